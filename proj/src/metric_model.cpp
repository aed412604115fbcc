#include "parabund/metric_model.hpp"

#include "parabund/errors.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <type_traits>

namespace parabund {

namespace {

constexpr long double kLogClamp = 700.0L;

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

MatrixCLD identity_ld(Eigen::Index n) { return MatrixCLD::Identity(n, n); }

MatrixCLD kronecker(const MatrixCLD& a, const MatrixCLD& b) {
    MatrixCLD out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

MatrixCLD eval_node(const MetricModel& mm, ComplexLD z);

struct NodeEvaluator {
    ComplexLD z;

    MatrixCLD operator()(const model::Line& l) const {
        const long double log_r = std::log(std::abs(z));
        const long double t = -2.0L * log_r;
        if (!(t > 0.0L)) throw NumericError("model line evaluated outside the unit disk");
        long double log_h = -2.0L * l.c.to_long_double() * log_r - static_cast<long double>(l.polylog) * std::log(t);
        log_h = std::clamp(log_h, -kLogClamp, kLogClamp);
        MatrixCLD h(1, 1);
        h(0, 0) = ComplexLD(std::exp(log_h), 0.0L);
        return h;
    }

    MatrixCLD operator()(const model::DirectSum& s) const {
        std::vector<MatrixCLD> blocks;
        Eigen::Index n = 0;
        for (const auto& p : s.parts) {
            blocks.push_back(eval_node(p, z));
            n += blocks.back().rows();
        }
        MatrixCLD out = MatrixCLD::Zero(n, n);
        Eigen::Index at = 0;
        for (const auto& b : blocks) {
            out.block(at, at, b.rows(), b.cols()) = b;
            at += b.rows();
        }
        return out;
    }

    MatrixCLD operator()(const model::Tensor& t) const {
        MatrixCLD out = eval_node(t.factors.front(), z);
        for (std::size_t i = 1; i < t.factors.size(); ++i) out = kronecker(out, eval_node(t.factors[i], z));
        return out;
    }

    MatrixCLD operator()(const model::Dual& d) const {
        const MatrixCLD h = eval_node(*d.inner, z);
        Eigen::LLT<MatrixCLD> llt(h);
        if (llt.info() != Eigen::Success) throw NumericError("metric is not positive definite; cannot dualize");
        return llt.solve(identity_ld(h.rows())).transpose();
    }

    MatrixCLD operator()(const model::GaugeTwist& g) const {
        const MatrixCLD gz = g.g.evaluate(z);
        const long double scale = std::pow(std::max(1.0L, gz.norm()), static_cast<long double>(gz.rows()));
        if (std::abs(gz.determinant()) <= 1e-14L * scale) throw NumericError("gauge matrix is singular at the evaluation point");
        const MatrixCLD h = eval_node(*g.inner, z);
        return gz.adjoint() * h * gz;
    }

    MatrixCLD operator()(const model::ScalarPerturb& p) const {
        const long double rho = std::clamp(p.rho.evaluate(z), -kLogClamp, kLogClamp);
        return eval_node(*p.inner, z) * ComplexLD(std::exp(rho), 0.0L);
    }

    MatrixCLD operator()(const model::Pullback& p) const {
        ComplexLD w(1.0L, 0.0L);
        for (std::int64_t i = 0; i < p.m; ++i) w *= z;
        return eval_node(*p.inner, w);
    }
};

MatrixCLD eval_node(const MetricModel& mm, ComplexLD z) { return std::visit(NodeEvaluator{z}, mm.node()); }

void check_domain(long double r) {
    if (!(r > 0.0L && r < 1.0L)) throw NumericError("point outside the punctured unit disk");
}

} // namespace

// PolynomialMatrix ----------------------------------------------------------

PolynomialMatrix::PolynomialMatrix(std::vector<MatrixC> coefficients) : coefficients_(std::move(coefficients)) {
    if (coefficients_.empty()) throw InputError("polynomial matrix needs at least one coefficient");
    const auto n = coefficients_.front().rows();
    for (const auto& c : coefficients_) {
        if (c.rows() != n || c.cols() != n || n == 0) throw InputError("polynomial matrix coefficients must be square and of equal size");
    }
}

MatrixCLD PolynomialMatrix::evaluate(ComplexLD z) const {
    // Horner.
    MatrixCLD acc = coefficients_.back().cast<ComplexLD>();
    for (auto it = coefficients_.rbegin() + 1; it != coefficients_.rend(); ++it) acc = (acc * z).eval() + it->cast<ComplexLD>();
    return acc;
}

PolynomialMatrix PolynomialMatrix::identity(Eigen::Index n) { return PolynomialMatrix({MatrixC::Identity(n, n)}); }

PolynomialMatrix PolynomialMatrix::unipotent(const MatrixC& u) {
    return PolynomialMatrix({MatrixC::Identity(u.rows(), u.cols()), u});
}

long double Perturbation::evaluate(ComplexLD z) const {
    const long double r = std::abs(z);
    switch (kind) {
    case Kind::log_power:
        return coefficient * std::pow(std::log(r), static_cast<long double>(power));
    case Kind::radial_power:
        return coefficient * std::pow(r, static_cast<long double>(power));
    }
    return 0.0L;
}

// MetricModel ---------------------------------------------------------------

MetricModel::MetricModel(model::Node node, std::size_t rank, bool perturbed)
    : node_(std::make_shared<const model::Node>(std::move(node))), rank_(rank), perturbed_(perturbed) {}

MetricModel MetricModel::line(Weight c, std::int64_t polylog) { return MetricModel(model::Line{std::move(c), polylog}, 1, false); }

MetricModel MetricModel::direct_sum(std::vector<MetricModel> parts) {
    if (parts.empty()) throw InputError("direct sum of no models");
    std::size_t rank = 0;
    bool perturbed = false;
    for (const auto& p : parts) {
        rank += p.rank();
        perturbed = perturbed || p.is_perturbed();
    }
    return MetricModel(model::DirectSum{std::move(parts)}, rank, perturbed);
}

MetricModel MetricModel::tensor(std::vector<MetricModel> factors) {
    if (factors.empty()) throw InputError("tensor product of no models");
    std::size_t rank = 1;
    bool perturbed = false;
    for (const auto& f : factors) {
        rank *= f.rank();
        perturbed = perturbed || f.is_perturbed();
    }
    return MetricModel(model::Tensor{std::move(factors)}, rank, perturbed);
}

MetricModel MetricModel::dual(MetricModel inner) {
    const auto rank = inner.rank();
    const bool perturbed = inner.is_perturbed();
    return MetricModel(model::Dual{std::make_shared<const MetricModel>(std::move(inner))}, rank, perturbed);
}

MetricModel MetricModel::gauge_twist(PolynomialMatrix g, MetricModel inner) {
    if (static_cast<std::size_t>(g.size()) != inner.rank()) throw InputError("gauge matrix size does not match the model rank");
    if (std::abs(g.coefficients().front().determinant()) < 1e-12) throw InputError("gauge matrix is not invertible at 0");
    const auto rank = inner.rank();
    const bool perturbed = inner.is_perturbed();
    return MetricModel(model::GaugeTwist{std::move(g), std::make_shared<const MetricModel>(std::move(inner))}, rank, perturbed);
}

MetricModel MetricModel::scalar_perturb(Perturbation rho, MetricModel inner) {
    const auto rank = inner.rank();
    return MetricModel(model::ScalarPerturb{rho, std::make_shared<const MetricModel>(std::move(inner))}, rank, true);
}

MetricModel MetricModel::pullback(std::int64_t m, MetricModel inner) {
    if (m < 1) throw InputError("pullback degree must be positive");
    const auto rank = inner.rank();
    const bool perturbed = inner.is_perturbed();
    return MetricModel(model::Pullback{m, std::make_shared<const MetricModel>(std::move(inner))}, rank, perturbed);
}

// Evaluation ----------------------------------------------------------------

MatrixCLD evaluate_ld(const MetricModel& mm, ComplexLD z) {
    check_domain(std::abs(z));
    return eval_node(mm, z);
}

MatrixC evaluate(const MetricModel& mm, Complex z) { return evaluate_ld(mm, ComplexLD(z)).cast<Complex>(); }

double poincare_density(Complex z) {
    const double r = std::abs(z);
    if (!(r > 0.0 && r < 1.0)) throw NumericError("point outside the punctured unit disk");
    const double t = -std::log(r * r);
    return 1.0 / (r * r * t * t);
}

CurvatureSample curvature(const MetricModel& mm, Complex z, const CurvatureOptions& opts) {
    const long double r = std::abs(ComplexLD(z));
    check_domain(r);
    const long double delta = static_cast<long double>(opts.step_ratio) * r;
    if (!(opts.step_ratio > 0.0) || r - 2.0L * delta <= 0.0L || r + 2.0L * delta >= 1.0L) {
        throw NumericError("finite-difference stencil leaves the punctured disk");
    }

    const ComplexLD z0(z);
    const ComplexLD dx(delta, 0.0L), dy(0.0L, delta);
    const MatrixCLD h = eval_node(mm, z0);

    Eigen::SelfAdjointEigenSolver<MatrixCLD> eig(h, Eigen::EigenvaluesOnly);
    const long double lo = eig.eigenvalues().minCoeff(), hi = eig.eigenvalues().maxCoeff();
    if (!(lo > 0.0L)) throw NumericError("metric is not positive definite at the sample point");
    if (hi / lo > static_cast<long double>(opts.max_condition)) throw NumericError("metric is too ill-conditioned at the sample point");

    const MatrixCLD xp1 = eval_node(mm, z0 + dx), xm1 = eval_node(mm, z0 - dx);
    const MatrixCLD xp2 = eval_node(mm, z0 + 2.0L * dx), xm2 = eval_node(mm, z0 - 2.0L * dx);
    const MatrixCLD yp1 = eval_node(mm, z0 + dy), ym1 = eval_node(mm, z0 - dy);
    const MatrixCLD yp2 = eval_node(mm, z0 + 2.0L * dy), ym2 = eval_node(mm, z0 - 2.0L * dy);

    const ComplexLD d1(12.0L * delta, 0.0L), d2(12.0L * delta * delta, 0.0L);
    const MatrixCLD hx = (-xp2 + 8.0L * xp1 - 8.0L * xm1 + xm2) / d1;
    const MatrixCLD hy = (-yp2 + 8.0L * yp1 - 8.0L * ym1 + ym2) / d1;
    const MatrixCLD hxx = (-xp2 + 16.0L * xp1 - 30.0L * h + 16.0L * xm1 - xm2) / d2;
    const MatrixCLD hyy = (-yp2 + 16.0L * yp1 - 30.0L * h + 16.0L * ym1 - ym2) / d2;

    const ComplexLD i(0.0L, 1.0L);
    const MatrixCLD dh = 0.5L * (hx - i * hy);     // d/dz
    const MatrixCLD dbar_h = 0.5L * (hx + i * hy); // d/dzbar
    const MatrixCLD laplace = 0.25L * (hxx + hyy);

    const auto lu = h.partialPivLu();
    const MatrixCLD hinv_dh = lu.solve(dh);
    // dbar(H^{-1} dH) = H^{-1} d dbar H - H^{-1} (dbar H) H^{-1} dH; Theta = -that  dz^dzbar.
    const MatrixCLD f = -(lu.solve(laplace) - lu.solve(dbar_h) * hinv_dh);

    const MatrixCLD g = lu.solve(MatrixCLD(f.adjoint() * h * f));
    const long double norm_h = std::sqrt(std::max(0.0L, g.trace().real()));

    CurvatureSample out;
    out.z = z;
    out.F = f.cast<Complex>();
    out.poincare_density = poincare_density(z);
    out.norm = static_cast<double>(norm_h) / out.poincare_density;
    return out;
}

AcceptabilityReport acceptability_scan(const MetricModel& mm, const RadialSampleSchedule& sched, const CurvatureOptions& opts,
                                       double trend_tolerance) {
    sched.validate();
    if (!(sched.r0 < kDomainRadius)) throw InputError("acceptability scan must stay inside |z| < 0.5");

    AcceptabilityReport rep;
    rep.tolerance = trend_tolerance;
    for (int k = 0; k < sched.count; ++k) {
        double m = 0.0;
        for (int l = 0; l < sched.angles; ++l) m = std::max(m, curvature(mm, sched.point(k, l), opts).norm);
        rep.radii.push_back(sched.radius(k));
        rep.per_radius_max.push_back(m);
        rep.sup_norm = std::max(rep.sup_norm, m);
    }

    // Ordinary least-squares slope against x = -log r.
    const auto n = static_cast<double>(rep.radii.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < rep.radii.size(); ++k) {
        const double x = -std::log(rep.radii[k]), y = rep.per_radius_max[k];
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    rep.trend = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    rep.bounded = std::abs(rep.trend) <= trend_tolerance;
    return rep;
}

// Symbolic side ---------------------------------------------------------------

namespace {

[[noreturn]] void refuse_perturbed() {
    throw RefusedError("model contains a scalar perturbation; no filtered bundle is predicted without acceptability evidence");
}

template <class T, class Leaf, class Combine>
std::vector<T> fold_frame(const MetricModel& mm, Leaf leaf, Combine combine_pair, T (*negate)(const T&), T (*scale)(const T&, std::int64_t)) {
    return std::visit(
        Overloaded{
            [&](const model::Line& l) { return std::vector<T>{leaf(l)}; },
            [&](const model::DirectSum& s) {
                std::vector<T> out;
                for (const auto& p : s.parts) {
                    auto part = fold_frame<T>(p, leaf, combine_pair, negate, scale);
                    out.insert(out.end(), part.begin(), part.end());
                }
                return out;
            },
            [&](const model::Tensor& t) {
                auto out = fold_frame<T>(t.factors.front(), leaf, combine_pair, negate, scale);
                for (std::size_t f = 1; f < t.factors.size(); ++f) {
                    const auto rhs = fold_frame<T>(t.factors[f], leaf, combine_pair, negate, scale);
                    std::vector<T> next;
                    for (const auto& a : out)
                        for (const auto& b : rhs) next.push_back(combine_pair(a, b));
                    out = std::move(next);
                }
                return out;
            },
            [&](const model::Dual& d) {
                auto out = fold_frame<T>(*d.inner, leaf, combine_pair, negate, scale);
                for (auto& x : out) x = negate(x);
                return out;
            },
            [&](const model::GaugeTwist& g) { return fold_frame<T>(*g.inner, leaf, combine_pair, negate, scale); },
            [&](const model::ScalarPerturb&) -> std::vector<T> { refuse_perturbed(); },
            [&](const model::Pullback& p) {
                auto out = fold_frame<T>(*p.inner, leaf, combine_pair, negate, scale);
                for (auto& x : out) x = scale(x, p.m);
                return out;
            },
        },
        mm.node());
}

Weight negate_weight(const Weight& w) { return -w; }
Weight scale_weight(const Weight& w, std::int64_t m) { return Weight(m) * w; }
std::int64_t negate_int(const std::int64_t& n) { return -n; }
std::int64_t keep_int(const std::int64_t& n, std::int64_t) { return n; }

} // namespace

std::vector<Weight> raw_frame_degrees(const MetricModel& mm) {
    return fold_frame<Weight>(
        mm, [](const model::Line& l) { return l.c; }, [](const Weight& a, const Weight& b) { return a + b; }, &negate_weight,
        &scale_weight);
}

std::vector<std::int64_t> raw_frame_polylog(const MetricModel& mm) {
    return fold_frame<std::int64_t>(
        mm, [](const model::Line& l) { return -l.polylog; }, [](const std::int64_t& a, const std::int64_t& b) { return a + b; },
        &negate_int, &keep_int);
}

FilteredBundle predicted_filtered_bundle(const MetricModel& mm) {
    return std::visit(
        Overloaded{
            // The polylog factor does not move the weight.
            [](const model::Line& l) { return FilteredBundle::from_weights({l.c}); },
            [](const model::DirectSum& s) {
                std::vector<Weight> all;
                for (const auto& p : s.parts) {
                    const auto fb = predicted_filtered_bundle(p);
                    all.insert(all.end(), fb.weights().begin(), fb.weights().end());
                }
                return FilteredBundle::from_weights(all);
            },
            [](const model::Tensor& t) {
                FilteredBundle out = predicted_filtered_bundle(t.factors.front());
                for (std::size_t f = 1; f < t.factors.size(); ++f) out = parabund::tensor(out, predicted_filtered_bundle(t.factors[f]));
                return out;
            },
            [](const model::Dual& d) { return parabund::dual(predicted_filtered_bundle(*d.inner)); },
            // det G(0) != 0, so the twist is a holomorphic frame change at the origin.
            [](const model::GaugeTwist& g) { return predicted_filtered_bundle(*g.inner); },
            [](const model::ScalarPerturb&) -> FilteredBundle { refuse_perturbed(); },
            [](const model::Pullback& p) { return cyclic_pullback(predicted_filtered_bundle(*p.inner), p.m); },
        },
        mm.node());
}

} // namespace parabund
