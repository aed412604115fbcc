// include/parabund/schedule.hpp - geometric radial sampling used by every "z -> 0" estimator.

#pragma once

#include <complex>
#include <string>
#include <string_view>

namespace parabund {

/// Radii r0 * sigma^k for k < count, each sampled at `angles` equally spaced points.
struct RadialSampleSchedule {
    double r0 = 0.1;
    double sigma = 0.5;
    int count = 18;
    int angles = 16;

    /// Throws InputError unless 0 < r0 < 1, 0 < sigma < 1, count >= 8, angles >= 4
    /// and the innermost radius stays above 1e-8.
    void validate() const;

    double radius(int k) const;
    std::complex<double> point(int k, int l) const;
    /// Index of the first radius used by the tail regressions (last half of the schedule).
    int tail_begin() const { return count / 2; }

    /// "r0,sigma,count,angles"
    static RadialSampleSchedule parse(std::string_view text);
    std::string str() const;
};

} // namespace parabund
