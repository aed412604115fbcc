// include/parabund/analysis.hpp - area-infimum inequalities, simultaneous Diophantine search and
// cyclic-group isotypic projection.

#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace parabund {

using Complex = std::complex<double>;

/// B_r(w) = inf over open Omega in B(0, r) of area r^3 of r^{-3} * integral_Omega log|w - z|.
struct BrResult {
    Complex w;
    double r = 0.0;
    double value = 0.0;
    double bound_92 = 0.0;  // 1.5 log r - 0.5 log pi - 0.5
    double bound_93 = 0.0;  // 1.5 log(|w|/2) - 0.5 log pi - 0.5
    /// Radius s of the optimal sublevel set {|w - z| < s} inside B(0, r).
    double level_radius = 0.0;
};

/// Area of B(0, r) intersected with B(w, s).
double lens_area(double r, Complex w, double s);

/// Throws InputError unless 0 < r < 1; NumericError if the quadrature does not settle.
BrResult br_value(Complex w, double r);

double br_bound_92(double r);
double br_bound_93(Complex w);

struct Inequality94 {
    double lhs = 0.0;  // log|w - z|, -inf when z == w
    double rhs = 0.0;
    bool holds = false;
};

inline constexpr double kInequalitySlack = 1e-6;

/// log|w - z| <= (2/3)(log|z| / log r) B_r(w) + (1/3) log pi + 1/3 + 2 log 2.
/// Throws InputError unless r <= |z| < 1, |w| <= 2 and 0 < r < 1.
Inequality94 br_inequality_94(Complex z, Complex w, double r);
/// Same with a precomputed B_r(w).
Inequality94 br_inequality_94(Complex z, const BrResult& br);

/// Deterministic sample sets used by the inequality battery.
std::vector<Complex> w_grid(int count = 64);
std::vector<Complex> z_grid(double r, int count = 32);

struct DiophantineResult {
    std::vector<double> alpha;
    double q = 0.0;
    long long m = 0;
    std::vector<double> remainders;  // m alpha_i - nearest integer
    double delta = 0.0;
    double threshold = 0.0;  // q^{-1/l}
    bool holds = false;
};

/// max_i |m alpha_i - round(m alpha_i)| together with the signed remainders.
double diophantine_delta(const std::vector<double>& alpha, long long m, std::vector<double>* remainders = nullptr);

/// First m in 1..floor(q) with delta_m <= q^{-1/l}; if none, the best m with holds = false.
/// Throws InputError for empty alpha, non-finite entries or q <= 1.
DiophantineResult diophantine_search(const std::vector<double>& alpha, double q);

/// (1/m) sum_l zeta^{-lj} values[l], where values[l] = u(zeta^l w) and zeta = exp(2 pi i / m).
Complex isotypic_project(const std::vector<Complex>& values, int j);
Complex isotypic_project(const std::function<Complex(Complex)>& u, Complex w, int m, int j);

} // namespace parabund
