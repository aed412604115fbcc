#include "parabund/errors.hpp"
#include "parabund/estimators.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace parabund;
using parabund::testing::W;
using parabund::testing::Ws;

namespace {

MetricModel line(const char* c, std::int64_t n = 0) { return MetricModel::line(W(c), n); }

double logmod(Complex z) { return std::log(std::abs(z)); }

MatrixC random_u(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    MatrixC u(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Complex e(d(rng), d(rng));
            if (std::abs(e) > 2.0) e *= 2.0 / std::abs(e);
            u(i, j) = e;
        }
    return u;
}

} // namespace

TEST_CASE("log slope limit examples") {
    auto rep = log_slope_limit([](Complex z) { return std::pow(std::abs(z), 0.7); });
    CHECK(std::abs(rep.value - 0.7) < 1e-3);
    CHECK(rep.verdict == Verdict::converged);
    CHECK(rep.samples_used == 9);
    CHECK(rep.samples.size() == 18);

    rep = log_slope_limit([](Complex z) { return std::sqrt(std::abs(z)) * std::pow(-2.0 * logmod(z), 3.0); });
    CHECK(std::abs(rep.value - 0.5) < 1e-2);
    CHECK(rep.polylog_fit == doctest::Approx(3.0).epsilon(1e-6));

    rep = log_slope_limit([](Complex) { return 4.2; });
    CHECK(std::abs(rep.value) < 1e-3);

    CHECK_THROWS_AS(log_slope_limit([](Complex z) { return z.real(); }), NumericError);
    RadialSampleSchedule bad;
    bad.count = 4;
    CHECK_THROWS_AS(log_slope_limit([](Complex) { return 1.0; }, bad), InputError);
}

TEST_CASE("log slope limit is exact on power laws") {
    for (int i = -30; i <= 30; ++i) {
        const double alpha = i / 10.0;
        const auto rep = log_slope_limit([&](Complex z) { return std::pow(std::abs(z), alpha); });
        CHECK(rep.residual < 1e-6);
        CHECK(rep.value == doctest::Approx(alpha).epsilon(1e-9));
    }
}

TEST_CASE("gamma estimate examples") {
    CHECK(std::abs(gamma_estimate(line("1/2")).value - 0.5) < 1e-2);
    CHECK(std::abs(gamma_estimate(MetricModel::direct_sum({line("1/3", 1), line("1/2")})).value - 5.0 / 6.0) < 1e-2);
    CHECK(std::abs(gamma_estimate(line("0")).value) < 1e-3);
}

TEST_CASE("gamma estimate matches raw frame degree sum") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<MetricModel> parts;
        const int rank = 1 + static_cast<int>(rng() % 3);
        // Gauge mixing loses the small eigenvalues once the weight spread outruns long double.
        const long span = trial % 4 == 3 ? 1 : 2;
        for (int i = 0; i < rank; ++i) parts.push_back(MetricModel::line(testing::random_weight(rng, 10, span), static_cast<std::int64_t>(rng() % 4)));
        auto mm = MetricModel::direct_sum(parts);
        switch (trial % 4) {
        case 1: mm = MetricModel::dual(mm); break;
        case 2: mm = MetricModel::tensor({mm, line("1/3", 1)}); break;
        case 3: mm = MetricModel::gauge_twist(PolynomialMatrix::unipotent(random_u(rng, rank)), mm); break;
        default: break;
        }
        const Weight exact = sum(raw_frame_degrees(mm));
        const auto rep = gamma_estimate(mm);
        CHECK(std::abs(rep.value - exact.to_double()) < 1e-2);
        CHECK(rep.verdict == Verdict::converged);
    }
}

TEST_CASE("gamma estimate is additive over direct sums") {
    const auto a = MetricModel::direct_sum({line("1/3", 1), line("-7/10", 2)});
    const auto b = line("9/10", 3);
    const double sum_parts = gamma_estimate(a).value + gamma_estimate(b).value;
    CHECK(gamma_estimate(MetricModel::direct_sum({a, b})).value == doctest::Approx(sum_parts).epsilon(1e-9));
}

TEST_CASE("gamma estimate under cyclic covers") {
    for (const char* c : {"0", "1/3", "1/2", "7/10", "2/5"}) {
        for (std::int64_t m : {2, 3}) {
            const auto mm = MetricModel::direct_sum({line(c, 1), line("1/4")});
            const auto predicted = predicted_filtered_bundle(mm);
            Weight expected = gamma(cyclic_pullback(predicted, m), Weight(0));
            for (const auto& b : predicted.weights()) expected += Weight(ceil_q(Weight(m) * b));
            const auto raw = raw_frame_degrees(mm);
            for (std::size_t i = 0; i < raw.size(); ++i) expected += Weight(m) * (raw[i] - predicted.weights()[i]);
            CHECK(expected == Weight(m) * sum(raw));
            CHECK(std::abs(gamma_estimate(MetricModel::pullback(m, mm)).value - expected.to_double()) < 2e-2);
        }
    }
}

TEST_CASE("lelong estimate examples") {
    CHECK(lelong_estimate([](Complex z) { return 0.7 * logmod(z); }).value == doctest::Approx(0.7).epsilon(1e-9));
    const auto rep = lelong_estimate([](Complex z) { return logmod(z) + z.real() - 0.3 * z.imag(); });
    CHECK(rep.value == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(std::abs(lelong_estimate([](Complex z) { return -std::log(-2.0 * logmod(z)); }).value) < 1e-9);
    // Additivity.
    const auto u1 = [](Complex z) { return 0.25 * logmod(z) + z.real(); };
    const auto u2 = [](Complex z) { return 1.5 * logmod(z - Complex(1e-9, 0.0)); };
    const double sum_parts = lelong_estimate(u1).value + lelong_estimate(u2).value;
    CHECK(lelong_estimate([&](Complex z) { return u1(z) + u2(z); }).value == doctest::Approx(sum_parts).epsilon(1e-3));
    // Not of logarithmic type: the fit cannot absorb it.
    const auto wild = lelong_estimate([](Complex z) { return -1.0 / std::sqrt(std::abs(z)); });
    CHECK(wild.verdict == Verdict::inconclusive);
}

TEST_CASE("membership test examples") {
    auto m = membership_test(line("1/2"), 1, W("0"));
    CHECK(m.numeric);
    CHECK(m.exact);
    m = membership_test(line("1/2"), 0, W("0"));
    CHECK_FALSE(m.numeric);
    CHECK_FALSE(m.exact);
    CHECK(m.slope == doctest::Approx(-0.5).epsilon(1e-6));
    m = membership_test(line("0"), 0, W("0"));
    CHECK(m.numeric);
    CHECK(m.exact);
    CHECK_THROWS_AS(membership_test(MetricModel::direct_sum({line("0"), line("0")}), 0, W("0")), InputError);
}

TEST_CASE("membership numeric and exact verdicts agree off the boundary") {
    int checked = 0;
    for (int q = 1; q <= 10; ++q) {
        for (int p = -q; p <= q; ++p) {
            const Weight c(p, q);
            for (std::int64_t N : {0, 2}) {
                const auto mm = MetricModel::line(c, N);
                for (int t = -10; t <= 10; ++t) {
                    const Weight a(t, 10);
                    if ((a - c).is_integer()) continue;
                    for (std::int64_t k = -3; k <= 3; ++k) {
                        const auto res = membership_test(mm, k, a);
                        CHECK(res.numeric == res.exact);
                        ++checked;
                    }
                }
            }
        }
    }
    CHECK(checked > 5000);
}

TEST_CASE("membership on the boundary is decided by the exact rule") {
    const auto res = membership_test(line("1/2"), 0, W("1/2"));
    CHECK(res.exact);
    CHECK(res.slope == doctest::Approx(-0.5).epsilon(1e-9));
}

TEST_CASE("polylog bounded check") {
    // |e|^2 = |z|^{-1} (-log|z|^2): the generator sits at its own weight with one log power.
    const auto mm = line("1/2", -1);
    auto res = polylog_bounded_check(mm, {BigInt(0)}, W("1/2"), 1);
    CHECK(res.bounded);
    CHECK(res.sup == doctest::Approx(1.0).epsilon(1e-12));
    res = polylog_bounded_check(mm, {BigInt(1)}, W("-1/2"), 1);
    CHECK(res.bounded);
    res = polylog_bounded_check(mm, {BigInt(0)}, W("1/2"), 0);
    CHECK_FALSE(res.bounded);

    res = polylog_bounded_check(line("0"), {BigInt(0)}, W("0"), 0);
    CHECK(res.bounded);
    for (const auto& s : res.per_radius_max) CHECK(s.value == doctest::Approx(1.0));

    // Polylog decay with N=1 on ModelLine(1/2, 1) is bounded too.
    CHECK(polylog_bounded_check(line("1/2", 1), {BigInt(1)}, W("-1/2"), 1).bounded);

    CHECK_THROWS_AS(polylog_bounded_check(line("1/2"), {BigInt(0)}, W("0"), 0), InputError);
    CHECK_THROWS_AS(polylog_bounded_check(line("1/2"), {BigInt(0), BigInt(0)}, W("1"), 0), InputError);

    const auto two = MetricModel::direct_sum({line("1/3", 1), line("7/10", 2)});
    CHECK(polylog_bounded_check(two, {BigInt(1), BigInt(1)}, W("0"), 0).bounded);
    CHECK(polylog_bounded_check(two, {std::nullopt, BigInt(0)}, W("7/10"), -2).bounded);
    CHECK_FALSE(polylog_bounded_check(two, {std::nullopt, BigInt(0)}, W("7/10"), -3).bounded);
}

TEST_CASE("weak norm fit") {
    for (std::int64_t N : {0, 1, 3}) {
        const auto fit = weak_norm_fit(line("1/3", N));
        CHECK(fit.holds);
        CHECK(fit.M == doctest::Approx(static_cast<double>(N)).epsilon(1e-6).scale(1.0));
        CHECK(fit.C >= 1.0);
    }
    const auto flat = weak_norm_fit(MetricModel::direct_sum({line("0"), line("1/2"), line("7/10")}));
    CHECK(flat.holds);
    CHECK(flat.M < 1e-6);

    std::mt19937_64 rng(3);
    const auto two = MetricModel::direct_sum({line("1/3", 1), line("7/10")});
    for (int t = 0; t < 5; ++t) {
        const auto fit = weak_norm_fit(MetricModel::gauge_twist(PolynomialMatrix::unipotent(random_u(rng, 2)), two));
        INFO("rate " << fit.power_rate << " M " << fit.M);
        CHECK(fit.holds);
        CHECK(std::isfinite(fit.M));
    }
    // Wrong frame degrees leave a power of |z| in the Gram matrix.
    CHECK_FALSE(weak_norm_fit(two, Ws({"0", "0"})).holds);
    // A degree off by 1/10 leaves |z|^{0.2} in an eigenvalue.
    for (const char* c : {"0", "1/3", "1/2", "7/10"}) {
        const auto off = weak_norm_fit(line(c, 1), {W(c) + W("1/10")});
        CHECK_FALSE(off.holds);
        CHECK(off.power_rate == doctest::Approx(0.2).epsilon(1e-3));
        CHECK_FALSE(weak_norm_fit(line(c, 1), {W(c) - W("1/10")}).holds);
    }
    CHECK_THROWS_AS(weak_norm_fit(two, Ws({"0"})), InputError);
}
