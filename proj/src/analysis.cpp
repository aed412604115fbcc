// src/analysis.cpp

#include "parabund/analysis.hpp"

#include "parabund/errors.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace parabund {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kGoldenAngle = 2.39996322972865332;

/// Antiderivative of rho log rho.
double radial_primitive(double rho) { return rho > 0.0 ? 0.5 * rho * rho * std::log(rho) - 0.25 * rho * rho : 0.0; }

struct Lens {
    double r;
    Complex w;
    double s;

    /// Radial range [lo, hi] of the ray w + rho e^{i phi} inside both disks (lo >= hi when empty).
    std::pair<double, double> range(double phi) const {
        const Complex dir = std::polar(1.0, phi);
        const double b = (std::conj(w) * dir).real();
        const double c = std::norm(w) - r * r;
        const double disc = b * b - c;
        if (disc <= 0.0) return {0.0, 0.0};
        const double root = std::sqrt(disc);
        const double lo = std::max(0.0, -b - root);
        const double hi = std::min(s, -b + root);
        return {lo, hi};
    }

    double log_integrand(double phi) const {
        const auto [lo, hi] = range(phi);
        return lo < hi ? radial_primitive(hi) - radial_primitive(lo) : 0.0;
    }

    double area_integrand(double phi) const {
        const auto [lo, hi] = range(phi);
        return lo < hi ? 0.5 * (hi * hi - lo * lo) : 0.0;
    }

    /// Angles (seen from w) where the integrand has kinks.
    std::vector<double> breakpoints() const {
        std::vector<double> out;
        const double d = std::abs(w);
        if (d > 0.0 && d < r + s && d > std::abs(r - s)) {
            // Intersection points of the two circles.
            const Complex u = w / d;
            const double x = (d * d + r * r - s * s) / (2.0 * d);
            const double y = std::sqrt(std::max(0.0, r * r - x * x));
            for (double sign : {1.0, -1.0}) out.push_back(std::arg(u * Complex(x, sign * y) - w));
        }
        if (d > r) {
            const double base = std::arg(-w), half = std::asin(r / d);
            out.push_back(base + half);
            out.push_back(base - half);
        }
        for (auto& a : out) {
            a = std::fmod(a, kTwoPi);
            if (a < 0.0) a += kTwoPi;
        }
        out.push_back(0.0);
        out.push_back(kTwoPi);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }
};

/// Double-exponential quadrature on each piece (the pieces end at the square-root kinks);
/// ok = false when the summed error estimate stays above tol.
template <class F>
double integrate_pieces(const F& f, const std::vector<double>& cuts, double tol, bool& ok) {
    thread_local boost::math::quadrature::tanh_sinh<double> integrator;
    double total = 0.0, error = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (!(cuts[i + 1] > cuts[i])) continue;
        double err = 0.0;
        total += integrator.integrate(f, cuts[i], cuts[i + 1], 1e-12, &err);
        error += err;
    }
    if (!(error <= tol)) ok = false;
    return total;
}

} // namespace

double lens_area(double r, Complex w, double s) {
    const double d = std::abs(w);
    if (s <= 0.0 || d >= r + s) return 0.0;
    if (d <= std::abs(r - s)) {
        const double m = std::min(r, s);
        return std::numbers::pi * m * m;
    }
    const double a1 = std::acos(std::clamp((d * d + r * r - s * s) / (2.0 * d * r), -1.0, 1.0));
    const double a2 = std::acos(std::clamp((d * d + s * s - r * r) / (2.0 * d * s), -1.0, 1.0));
    const double k = (-d + r + s) * (d + r - s) * (d - r + s) * (d + r + s);
    return r * r * a1 + s * s * a2 - 0.5 * std::sqrt(std::max(0.0, k));
}

double br_bound_92(double r) { return 1.5 * std::log(r) - 0.5 * std::log(std::numbers::pi) - 0.5; }

double br_bound_93(Complex w) { return 1.5 * std::log(std::abs(w) / 2.0) - 0.5 * std::log(std::numbers::pi) - 0.5; }

BrResult br_value(Complex w, double r) {
    if (!(r > 0.0 && r < 1.0)) throw InputError("B_r(w) needs 0 < r < 1");
    if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) throw InputError("w must be finite");

    const double area = r * r * r;
    const double d = std::abs(w);
    double lo = std::max(0.0, d - r), hi = d + r;
    for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (lens_area(r, w, mid) < area ? lo : hi) = mid;
    }
    const Lens lens{r, w, 0.5 * (lo + hi)};

    bool ok = true;
    const auto cuts = lens.breakpoints();
    const double integral = integrate_pieces([&](double phi) { return lens.log_integrand(phi); }, cuts, 1e-7 * area, ok);
    if (!ok) throw NumericError("B_r(w) quadrature did not converge");

    BrResult out;
    out.w = w;
    out.r = r;
    out.level_radius = lens.s;
    out.value = integral / area;
    out.bound_92 = br_bound_92(r);
    out.bound_93 = br_bound_93(w);
    return out;
}

Inequality94 br_inequality_94(Complex z, const BrResult& br) {
    const double az = std::abs(z), r = br.r;
    if (!(az >= r * (1.0 - 1e-12) && az < 1.0)) throw InputError("inequality needs r <= |z| < 1");
    if (!(std::abs(br.w) <= 2.0 * (1.0 + 1e-12))) throw InputError("inequality needs |w| <= 2");

    Inequality94 out;
    out.lhs = z == br.w ? -std::numeric_limits<double>::infinity() : std::log(std::abs(br.w - z));
    out.rhs = (2.0 / 3.0) * (std::log(az) / std::log(r)) * br.value + std::log(std::numbers::pi) / 3.0 + 1.0 / 3.0 + 2.0 * std::log(2.0);
    out.holds = out.lhs <= out.rhs + kInequalitySlack;
    return out;
}

Inequality94 br_inequality_94(Complex z, Complex w, double r) {
    if (!(std::abs(w) <= 2.0)) throw InputError("inequality needs |w| <= 2");
    if (!(r > 0.0 && r < 1.0)) throw InputError("B_r(w) needs 0 < r < 1");
    const double az = std::abs(z);
    if (!(az >= r * (1.0 - 1e-12) && az < 1.0)) throw InputError("inequality needs r <= |z| < 1");
    return br_inequality_94(z, br_value(w, r));
}

std::vector<Complex> w_grid(int count) {
    if (count < 2) throw InputError("w grid needs at least two points");
    std::vector<Complex> out;
    for (int k = 0; k < count; ++k) out.push_back(std::polar(2.0 * k / (count - 1), k * kGoldenAngle));
    return out;
}

std::vector<Complex> z_grid(double r, int count) {
    if (count < 1 || !(r > 0.0 && r < 1.0)) throw InputError("z grid needs count >= 1 and 0 < r < 1");
    std::vector<Complex> out;
    for (int k = 0; k < count; ++k) out.push_back(std::polar(r + (1.0 - r) * k / count, 0.5 + k * kGoldenAngle));
    return out;
}

double diophantine_delta(const std::vector<double>& alpha, long long m, std::vector<double>* remainders) {
    double delta = 0.0;
    if (remainders) remainders->clear();
    for (double a : alpha) {
        const double x = static_cast<double>(m) * a;
        const double rem = x - std::nearbyint(x);
        if (remainders) remainders->push_back(rem);
        delta = std::max(delta, std::abs(rem));
    }
    return delta;
}

DiophantineResult diophantine_search(const std::vector<double>& alpha, double q) {
    if (alpha.empty()) throw InputError("alpha must be non-empty");
    for (double a : alpha)
        if (!std::isfinite(a)) throw InputError("alpha entries must be finite");
    if (!(q > 1.0) || !std::isfinite(q)) throw InputError("q must be a finite real > 1");

    DiophantineResult out;
    out.alpha = alpha;
    out.q = q;
    out.threshold = std::pow(q, -1.0 / static_cast<double>(alpha.size()));
    out.delta = std::numeric_limits<double>::infinity();
    const auto top = static_cast<long long>(std::floor(q));
    for (long long m = 1; m <= top; ++m) {
        std::vector<double> rem;
        const double delta = diophantine_delta(alpha, m, &rem);
        if (delta < out.delta) {
            out.m = m;
            out.delta = delta;
            out.remainders = std::move(rem);
        }
        if (delta <= out.threshold) {
            out.holds = true;
            break;
        }
    }
    return out;
}

Complex isotypic_project(const std::vector<Complex>& values, int j) {
    const auto m = static_cast<int>(values.size());
    if (m < 1) throw InputError("isotypic projection needs m >= 1 samples");
    if (j < 0 || j >= m) throw InputError("isotypic index must lie in [0, m)");
    Complex acc = 0.0;
    for (int l = 0; l < m; ++l) acc += std::polar(1.0, -kTwoPi * static_cast<double>((static_cast<long long>(l) * j) % m) / m) * values[l];
    return acc / static_cast<double>(m);
}

Complex isotypic_project(const std::function<Complex(Complex)>& u, Complex w, int m, int j) {
    if (m < 1) throw InputError("isotypic projection needs m >= 1");
    std::vector<Complex> values;
    for (int l = 0; l < m; ++l) values.push_back(u(std::polar(1.0, kTwoPi * l / m) * w));
    return isotypic_project(values, j);
}

} // namespace parabund
