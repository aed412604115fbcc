// include/parabund/metric_model.hpp - concrete Hermitian metrics on the trivial bundle over the
// punctured disk, built from rank-one model lines by direct sum, tensor, dual, gauge change,
// cyclic pullback and (quarantined) scalar perturbation.

#pragma once

#include "parabund/filtered_bundle.hpp"
#include "parabund/schedule.hpp"
#include "parabund/weights.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <memory>
#include <variant>
#include <vector>

namespace parabund {

using Complex = std::complex<double>;
using ComplexLD = std::complex<long double>;
using MatrixC = Eigen::MatrixXcd;
using MatrixCLD = Eigen::Matrix<ComplexLD, Eigen::Dynamic, Eigen::Dynamic>;

/// G(z) = sum_k coefficients[k] z^k, square.
class PolynomialMatrix {
public:
    explicit PolynomialMatrix(std::vector<MatrixC> coefficients);

    Eigen::Index size() const { return coefficients_.front().rows(); }
    const std::vector<MatrixC>& coefficients() const { return coefficients_; }
    MatrixCLD evaluate(ComplexLD z) const;

    static PolynomialMatrix identity(Eigen::Index n);
    /// I + z U.
    static PolynomialMatrix unipotent(const MatrixC& u);

private:
    std::vector<MatrixC> coefficients_;
};

/// Real function rho multiplying the metric by exp(rho).
struct Perturbation {
    enum class Kind {
        log_power,    // coefficient * (log|z|)^power
        radial_power  // coefficient * |z|^power
    };
    Kind kind = Kind::log_power;
    double coefficient = 1.0;
    double power = 2.0;

    long double evaluate(ComplexLD z) const;
};

class MetricModel;

namespace model {

/// h = |z|^{-2c} (-log|z|^2)^{-N}
struct Line {
    Weight c;
    std::int64_t polylog = 0;
};
struct DirectSum {
    std::vector<MetricModel> parts;
};
struct Tensor {
    std::vector<MetricModel> factors;
};
struct Dual {
    std::shared_ptr<const MetricModel> inner;
};
/// Frame change e -> e G: H -> G^* H G.
struct GaugeTwist {
    PolynomialMatrix g;
    std::shared_ptr<const MetricModel> inner;
};
struct ScalarPerturb {
    Perturbation rho;
    std::shared_ptr<const MetricModel> inner;
};
/// Substitution z = w^m.
struct Pullback {
    std::int64_t m = 1;
    std::shared_ptr<const MetricModel> inner;
};

using Node = std::variant<Line, DirectSum, Tensor, Dual, GaugeTwist, ScalarPerturb, Pullback>;

} // namespace model

/// Immutable expression tree; copies share structure.
class MetricModel {
public:
    static MetricModel line(Weight c, std::int64_t polylog = 0);
    static MetricModel direct_sum(std::vector<MetricModel> parts);
    static MetricModel tensor(std::vector<MetricModel> factors);
    static MetricModel dual(MetricModel inner);
    /// Throws InputError unless G is square of matching size with det G(0) != 0.
    static MetricModel gauge_twist(PolynomialMatrix g, MetricModel inner);
    static MetricModel scalar_perturb(Perturbation rho, MetricModel inner);
    static MetricModel pullback(std::int64_t m, MetricModel inner);

    std::size_t rank() const { return rank_; }
    /// True if a ScalarPerturb node occurs anywhere in the tree.
    bool is_perturbed() const { return perturbed_; }
    const model::Node& node() const { return *node_; }

private:
    MetricModel(model::Node node, std::size_t rank, bool perturbed);

    std::shared_ptr<const model::Node> node_;
    std::size_t rank_ = 0;
    bool perturbed_ = false;
};

/// Gram matrix H(z) = (h(e_i, e_j)) in the model frame. Throws NumericError outside 0 < |z| < 1
/// or when a gauge matrix is singular at z.
MatrixC evaluate(const MetricModel& mm, Complex z);
MatrixCLD evaluate_ld(const MetricModel& mm, ComplexLD z);

/// Density of the Poincare metric, 1 / (|z| log|z|^2)^2.
double poincare_density(Complex z);

struct CurvatureOptions {
    double step_ratio = 1e-4;
    /// Largest accepted eigenvalue ratio of H at the sample point.
    double max_condition = 1e15;
};

struct CurvatureSample {
    Complex z;
    /// Curvature density F with Theta = F dz ^ dzbar; for rank one F = -d dbar log h.
    MatrixC F;
    double poincare_density = 0.0;
    /// |Theta|_{h, omega_P} = ||F||_h / p(z), with ||A||_h^2 = tr(H^{-1} A^* H A).
    double norm = 0.0;
};

/// Chern curvature by fourth-order central differences with step step_ratio * |z|.
CurvatureSample curvature(const MetricModel& mm, Complex z, const CurvatureOptions& opts = {});

struct AcceptabilityReport {
    double sup_norm = 0.0;
    /// Least-squares slope of the per-radius maximum norm against -log r.
    double trend = 0.0;
    double tolerance = 1e-2;
    bool bounded = false;  // |trend| <= tolerance
    std::vector<double> radii;
    std::vector<double> per_radius_max;
};

/// Domain radius; every scan stays inside B(0, kDomainRadius).
inline constexpr double kDomainRadius = 0.5;

AcceptabilityReport acceptability_scan(const MetricModel& mm, const RadialSampleSchedule& sched,
                                       const CurvatureOptions& opts = {}, double trend_tolerance = 1e-2);

/// Degrees of the model frame vectors (c for a line, sums under tensor, m*c under pullback, ...).
/// Throws RefusedError on perturbed models.
std::vector<Weight> raw_frame_degrees(const MetricModel& mm);

/// Exponent of (-log|z|^2) in |e_i|_h^2 for each model frame vector. Throws RefusedError on
/// perturbed models.
std::vector<std::int64_t> raw_frame_polylog(const MetricModel& mm);

/// Filtered bundle of the prolongation, assembled from the filtered-bundle operations.
/// Throws RefusedError on perturbed models.
FilteredBundle predicted_filtered_bundle(const MetricModel& mm);

} // namespace parabund
