// include/parabund/estimators.hpp - log-log slope estimators for the limits at the puncture.
//
// Every estimator samples on a RadialSampleSchedule, reduces each circle to one number and fits
// y(r) = intercept + slope * log r + polylog * log(-log r) over the tail of the schedule.

#pragma once

#include "parabund/metric_model.hpp"
#include "parabund/schedule.hpp"
#include "parabund/weights.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace parabund {

enum class Verdict { converged, inconclusive };

const char* to_string(Verdict v);

struct RadialSample {
    double radius = 0.0;
    double value = 0.0;  // per-circle reduction (mean of log f, max of u, ...)
};

struct EstimateReport {
    double value = 0.0;
    double slope_fit = 0.0;
    double polylog_fit = 0.0;
    double intercept = 0.0;
    /// Max deviation of the fit over the tail samples.
    double residual = 0.0;
    int samples_used = 0;
    double tolerance = 0.0;
    Verdict verdict = Verdict::inconclusive;
    std::vector<RadialSample> samples;
};

inline constexpr double kDefaultResidualTolerance = 1e-4;

using ScalarField = std::function<double(Complex)>;

/// Slope of the angular mean of log f against log r. Throws NumericError if f <= 0 at a sample.
EstimateReport log_slope_limit(const ScalarField& f, const RadialSampleSchedule& sched = {},
                               double tolerance = kDefaultResidualTolerance);
/// Same, for a field given by its logarithm (avoids overflow for steep powers).
EstimateReport log_slope_limit_of_log(const ScalarField& log_f, const RadialSampleSchedule& sched = {},
                                      double tolerance = kDefaultResidualTolerance);

/// -1/2 times the slope of log det H; estimates the sum of raw frame degrees.
EstimateReport gamma_estimate(const MetricModel& mm, const RadialSampleSchedule& sched = {},
                              double tolerance = kDefaultResidualTolerance);

/// lim u / log|z|, using the per-circle maximum of u (the minimum of u / log|z|).
EstimateReport lelong_estimate(const ScalarField& u, const RadialSampleSchedule& sched = {},
                               double tolerance = kDefaultResidualTolerance);

struct MembershipResult {
    bool numeric = false;
    bool exact = false;
    /// Fitted growth exponent of |z^k e|_h.
    double slope = 0.0;
    EstimateReport report;
};

inline constexpr double kMembershipMargin = 1e-3;

/// Is z^k e in the prolongation of order a, for the frame vector e of a rank-one unperturbed model?
/// exact: k >= -floor(a - c); numeric: fitted slope of log|z^k e|_h >= -a - margin.
MembershipResult membership_test(const MetricModel& mm, std::int64_t k, const Weight& a,
                                 const RadialSampleSchedule& sched = {}, double margin = kMembershipMargin);

struct PolylogCheck {
    bool bounded = false;
    double sup = 0.0;
    std::vector<RadialSample> per_radius_max;
};

/// Section f = sum_i z^{orders[i]} e_i (nullopt = component absent). Evaluates
/// H(z) = |f|_h^2 |z|^{2a} (-log|z|^2)^{-N} and reports whether its per-circle maxima are
/// non-increasing toward the puncture (relative tolerance) and finite. Throws InputError if the
/// section is not in the prolongation of order a.
PolylogCheck polylog_bounded_check(const MetricModel& mm, const SectionCoordinates& orders, const Weight& a,
                                   std::int64_t N, const RadialSampleSchedule& sched = {},
                                   double relative_tolerance = 1e-6);

struct WeakNormFit {
    double C = 0.0;
    double M = 0.0;
    bool holds = false;
    /// Largest fitted |z|-power rate of the extreme eigenvalues; a sandwich needs it near zero.
    double power_rate = 0.0;
    double rate_tolerance = 0.0;
    EstimateReport largest;
    EstimateReport smallest;
};

inline constexpr double kWeakNormRateTolerance = 1e-1;

/// Gram matrix of v'_i = |z|^{d_i} e_i, where d_i are the frame degrees; fits
/// C^{-1} L^{-M} <= eigenvalues <= C L^{M} with L = -log|z|.
WeakNormFit weak_norm_fit(const MetricModel& mm, const RadialSampleSchedule& sched = {},
                          double rate_tolerance = kWeakNormRateTolerance);
WeakNormFit weak_norm_fit(const MetricModel& mm, const std::vector<Weight>& frame_degrees,
                          const RadialSampleSchedule& sched = {}, double rate_tolerance = kWeakNormRateTolerance);

} // namespace parabund
