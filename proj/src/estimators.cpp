// src/estimators.cpp

#include "parabund/estimators.hpp"

#include "parabund/errors.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>

namespace parabund {

const char* to_string(Verdict v) { return v == Verdict::converged ? "converged" : "inconclusive"; }

namespace {

/// Least squares of value against {1, log r, log(-log r)} over samples[begin..).
EstimateReport fit_tail(std::vector<RadialSample> samples, int begin, double tolerance) {
    const int n = static_cast<int>(samples.size()) - begin;
    Eigen::MatrixXd A(n, 3);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        const double lr = std::log(samples[begin + i].radius);
        A(i, 0) = 1.0;
        A(i, 1) = lr;
        A(i, 2) = std::log(-lr);
        y(i) = samples[begin + i].value;
    }
    for (int i = 0; i < n; ++i)
        if (!std::isfinite(y(i))) throw NumericError("non-finite sample value at r = " + std::to_string(samples[begin + i].radius));

    const Eigen::VectorXd coef = A.colPivHouseholderQr().solve(y);
    EstimateReport rep;
    rep.intercept = coef(0);
    rep.slope_fit = coef(1);
    rep.polylog_fit = coef(2);
    rep.value = rep.slope_fit;
    rep.residual = (A * coef - y).cwiseAbs().maxCoeff();
    rep.samples_used = n;
    rep.tolerance = tolerance;
    rep.verdict = rep.residual < tolerance ? Verdict::converged : Verdict::inconclusive;
    rep.samples = std::move(samples);
    return rep;
}

enum class Reduce { mean, max, min };

/// One number per circle.
std::vector<RadialSample> sample_circles(const RadialSampleSchedule& sched, const ScalarField& g, Reduce how) {
    sched.validate();
    std::vector<RadialSample> out;
    out.reserve(static_cast<std::size_t>(sched.count));
    for (int k = 0; k < sched.count; ++k) {
        double acc = how == Reduce::mean ? 0.0 : how == Reduce::max ? -std::numeric_limits<double>::infinity()
                                                                     : std::numeric_limits<double>::infinity();
        for (int l = 0; l < sched.angles; ++l) {
            const double v = g(sched.point(k, l));
            if (how == Reduce::mean)
                acc += v;
            else if (how == Reduce::max)
                acc = std::max(acc, v);
            else
                acc = std::min(acc, v);
        }
        if (how == Reduce::mean) acc /= sched.angles;
        out.push_back({sched.radius(k), acc});
    }
    return out;
}

long double log_det(const MatrixCLD& h) {
    Eigen::LLT<MatrixCLD> llt(h);
    if (llt.info() != Eigen::Success) throw NumericError("metric is not positive definite at a sample");
    long double s = 0.0L;
    const auto& L = llt.matrixLLT();
    for (Eigen::Index i = 0; i < h.rows(); ++i) s += std::log(L(i, i).real());
    return 2.0L * s;
}

} // namespace

EstimateReport log_slope_limit_of_log(const ScalarField& log_f, const RadialSampleSchedule& sched, double tolerance) {
    return fit_tail(sample_circles(sched, log_f, Reduce::mean), sched.tail_begin(), tolerance);
}

EstimateReport log_slope_limit(const ScalarField& f, const RadialSampleSchedule& sched, double tolerance) {
    return log_slope_limit_of_log(
        [&](Complex z) {
            const double v = f(z);
            if (!(v > 0.0)) throw NumericError("field is not positive at a sample");
            return std::log(v);
        },
        sched, tolerance);
}

EstimateReport gamma_estimate(const MetricModel& mm, const RadialSampleSchedule& sched, double tolerance) {
    auto rep = log_slope_limit_of_log(
        [&](Complex z) { return static_cast<double>(log_det(evaluate_ld(mm, ComplexLD(z.real(), z.imag())))); }, sched, tolerance);
    rep.value = -0.5 * rep.slope_fit;
    return rep;
}

EstimateReport lelong_estimate(const ScalarField& u, const RadialSampleSchedule& sched, double tolerance) {
    return fit_tail(sample_circles(sched, u, Reduce::max), sched.tail_begin(), tolerance);
}

MembershipResult membership_test(const MetricModel& mm, std::int64_t k, const Weight& a, const RadialSampleSchedule& sched,
                                 double margin) {
    if (mm.rank() != 1) throw InputError("membership test needs a rank-one model");
    const Weight c = raw_frame_degrees(mm).front();

    MembershipResult res;
    res.exact = Weight(k) >= -Weight(floor_q(a - c));
    res.report = log_slope_limit_of_log(
        [&](Complex z) {
            const long double lh = std::log(evaluate_ld(mm, ComplexLD(z.real(), z.imag()))(0, 0).real());
            return static_cast<double>(static_cast<long double>(k) * std::log(static_cast<long double>(std::abs(z))) + 0.5L * lh);
        },
        sched);
    res.slope = res.report.slope_fit;
    res.numeric = res.slope >= -a.to_double() - margin;
    return res;
}

PolylogCheck polylog_bounded_check(const MetricModel& mm, const SectionCoordinates& orders, const Weight& a, std::int64_t N,
                                   const RadialSampleSchedule& sched, double relative_tolerance) {
    if (orders.size() != mm.rank()) throw InputError("section has " + std::to_string(orders.size()) + " coordinates, model rank is " +
                                                     std::to_string(mm.rank()));
    const auto degrees = raw_frame_degrees(mm);
    bool any = false;
    for (std::size_t i = 0; i < orders.size(); ++i) {
        if (!orders[i]) continue;
        any = true;
        if (degrees[i] - Weight(*orders[i]) > a) throw InputError("section is not in the prolongation of order " + a.str());
    }
    if (!any) throw InputError("zero section");

    const long double la = a.to_long_double();
    const auto logH = [&](Complex z) {
        const ComplexLD zl(z.real(), z.imag());
        const MatrixCLD h = evaluate_ld(mm, zl);
        Eigen::Matrix<ComplexLD, Eigen::Dynamic, 1> v = Eigen::Matrix<ComplexLD, Eigen::Dynamic, 1>::Zero(h.rows());
        for (std::size_t i = 0; i < orders.size(); ++i)
            if (orders[i]) v(static_cast<Eigen::Index>(i)) = std::pow(zl, static_cast<int>(*orders[i]));
        const long double norm2 = (v.adjoint() * h * v)(0, 0).real();
        const long double lr = std::log(std::abs(zl));
        return static_cast<double>(std::log(norm2) + 2.0L * la * lr - static_cast<long double>(N) * std::log(-2.0L * lr));
    };

    PolylogCheck out;
    out.bounded = true;
    for (const auto& s : sample_circles(sched, logH, Reduce::max)) {
        const double m = std::exp(s.value);
        if (!std::isfinite(m)) out.bounded = false;
        if (!out.per_radius_max.empty() && m > out.per_radius_max.back().value * (1.0 + relative_tolerance)) out.bounded = false;
        out.per_radius_max.push_back({s.radius, m});
        out.sup = std::max(out.sup, m);
    }
    return out;
}

WeakNormFit weak_norm_fit(const MetricModel& mm, const std::vector<Weight>& frame_degrees, const RadialSampleSchedule& sched,
                          double rate_tolerance) {
    if (frame_degrees.size() != mm.rank()) throw InputError("frame degree count does not match model rank");
    std::vector<long double> d;
    for (const auto& w : frame_degrees) d.push_back(w.to_long_double());

    sched.validate();
    std::vector<RadialSample> top, bottom;
    for (int k = 0; k < sched.count; ++k) {
        double hi = -std::numeric_limits<double>::infinity(), lo = std::numeric_limits<double>::infinity();
        for (int l = 0; l < sched.angles; ++l) {
            const Complex z = sched.point(k, l);
            const ComplexLD zl(z.real(), z.imag());
            const long double lr = std::log(std::abs(zl));
            MatrixCLD g = evaluate_ld(mm, zl);
            for (Eigen::Index i = 0; i < g.rows(); ++i)
                for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) *= std::exp((d[static_cast<std::size_t>(i)] + d[static_cast<std::size_t>(j)]) * lr);
            const Eigen::SelfAdjointEigenSolver<MatrixC> eig(g.cast<Complex>(), Eigen::EigenvaluesOnly);
            if (eig.info() != Eigen::Success || !(eig.eigenvalues().minCoeff() > 0.0))
                throw NumericError("rescaled Gram matrix is not positive definite at a sample");
            hi = std::max(hi, std::log(eig.eigenvalues().maxCoeff()));
            lo = std::min(lo, std::log(eig.eigenvalues().minCoeff()));
        }
        top.push_back({sched.radius(k), hi});
        bottom.push_back({sched.radius(k), lo});
    }

    WeakNormFit fit;
    fit.rate_tolerance = rate_tolerance;
    fit.largest = fit_tail(top, sched.tail_begin(), kDefaultResidualTolerance);
    fit.smallest = fit_tail(bottom, sched.tail_begin(), kDefaultResidualTolerance);
    fit.power_rate = std::max(std::abs(fit.largest.slope_fit), std::abs(fit.smallest.slope_fit));
    fit.M = std::max({0.0, fit.largest.polylog_fit, -fit.smallest.polylog_fit});

    double logC = 0.0;
    for (std::size_t k = 0; k < top.size(); ++k) {
        const double logL = std::log(-std::log(top[k].radius));
        logC = std::max({logC, top[k].value - fit.M * logL, -bottom[k].value - fit.M * logL});
    }
    fit.C = std::exp(logC);
    fit.holds = fit.power_rate <= rate_tolerance && std::isfinite(fit.C) && std::isfinite(fit.M);
    return fit;
}

WeakNormFit weak_norm_fit(const MetricModel& mm, const RadialSampleSchedule& sched, double rate_tolerance) {
    return weak_norm_fit(mm, raw_frame_degrees(mm), sched, rate_tolerance);
}

} // namespace parabund
