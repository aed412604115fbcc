// src/report.cpp

#include "parabund/report.hpp"

#include "parabund/analysis.hpp"
#include "parabund/errors.hpp"
#include "parabund/estimators.hpp"
#include "parabund/filtered_bundle.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

namespace parabund {

const char* to_string(RunStatus s) {
    switch (s) {
    case RunStatus::pass: return "pass";
    case RunStatus::fail: return "fail";
    case RunStatus::refused: return "refused";
    }
    return "fail";
}

RunStatus RunReport::status() const {
    bool failed = false;
    for (const auto& r : records) {
        if (r.refused) return RunStatus::refused;
        if (!r.pass) failed = true;
    }
    return failed ? RunStatus::fail : RunStatus::pass;
}

int RunReport::exit_code() const {
    switch (status()) {
    case RunStatus::pass: return 0;
    case RunStatus::fail: return 1;
    case RunStatus::refused: return 4;
    }
    return 1;
}

Json RunReport::to_json() const {
    Json recs = Json::array();
    for (const auto& r : records) {
        Json j = {{"name", r.name}, {"predicted", r.predicted}};
        j["estimated"] = r.estimated && std::isfinite(*r.estimated) ? Json(*r.estimated) : Json(nullptr);
        j["tolerance"] = r.tolerance ? Json(*r.tolerance) : Json(nullptr);
        j["pass"] = r.pass;
        if (r.refused) j["refused"] = true;
        if (!r.detail.empty()) j["detail"] = r.detail;
        recs.push_back(std::move(j));
    }
    std::size_t passed = 0;
    for (const auto& r : records) passed += r.pass ? 1 : 0;
    return {{"command", command},
            {"inputs", inputs},
            {"seed", seed},
            {"records", recs},
            {"passed", passed},
            {"total", records.size()},
            {"status", parabund::to_string(status())},
            {"wall_time_s", wall_time_s}};
}

std::string RunReport::summary() const {
    std::ostringstream os;
    std::size_t passed = 0;
    for (const auto& r : records) {
        passed += r.pass ? 1 : 0;
        os << (r.refused ? "REFUSED " : r.pass ? "PASS    " : "FAIL    ") << r.name << "  predicted=" << r.predicted;
        if (r.estimated) os << "  estimated=" << std::setprecision(8) << *r.estimated;
        if (r.tolerance) os << "  tol=" << std::setprecision(3) << *r.tolerance;
        os << '\n';
    }
    os << parabund::to_string(status()) << ": " << passed << '/' << records.size() << " records passed";
    return os.str();
}

void RunReport::add_input(const std::string& name, const std::string& raw_text) { inputs[name] = {{"sha256", sha256_hex(raw_text)}}; }

std::string sha256_hex(std::string_view data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) throw NumericError("sha256 failed");
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    return os.str();
}

// Checks ----------------------------------------------------------------------

namespace {

bool has_gauge(const MetricModel& mm) {
    return std::visit(
        [](const auto& n) -> bool {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, model::GaugeTwist>) {
                return true;
            } else if constexpr (std::is_same_v<T, model::DirectSum>) {
                return std::any_of(n.parts.begin(), n.parts.end(), has_gauge);
            } else if constexpr (std::is_same_v<T, model::Tensor>) {
                return std::any_of(n.factors.begin(), n.factors.end(), has_gauge);
            } else if constexpr (std::is_same_v<T, model::Line>) {
                return false;
            } else {
                return has_gauge(*n.inner);
            }
        },
        mm.node());
}

CheckRecord refused(const std::string& name) {
    CheckRecord r;
    r.name = name;
    r.predicted = "refused";
    r.refused = true;
    r.detail = {{"reason", "model contains a scalar perturbation; no filtered bundle is predicted"}};
    return r;
}

void check_gamma(const MetricModel& mm, const CheckOptions& opts, RunReport& report) {
    if (mm.is_perturbed()) {
        report.records.push_back(refused("gamma"));
        return;
    }
    const Weight predicted = sum(raw_frame_degrees(mm));
    const auto rep = gamma_estimate(mm, opts.schedule);
    CheckRecord r;
    r.name = "gamma";
    r.predicted = predicted.str();
    r.estimated = rep.value;
    r.tolerance = opts.tolerance.value_or(kGammaTolerance);
    r.pass = std::abs(rep.value - predicted.to_double()) <= *r.tolerance && rep.verdict == Verdict::converged;
    const auto fb = predicted_filtered_bundle(mm);
    r.detail = {{"predicted_bundle", to_json(fb)}, {"gamma_at_0", gamma(fb, Weight(0)).str()}, {"estimate", to_json(rep, opts.dump_samples)}};
    report.records.push_back(std::move(r));
}

void check_acceptability(const MetricModel& mm, const CheckOptions& opts, RunReport& report) {
    const double tol = opts.tolerance.value_or(1e-2);
    const auto rep = acceptability_scan(mm, opts.schedule, {}, tol);
    CheckRecord r;
    r.name = "acceptability";
    r.estimated = rep.trend;
    r.tolerance = tol;
    if (mm.is_perturbed()) {
        // Negative control: the perturbation is expected to be caught.
        r.predicted = "not acceptable";
        r.pass = !rep.bounded;
    } else {
        r.predicted = "acceptable";
        r.pass = rep.bounded;
    }
    r.detail = {{"negative_control", mm.is_perturbed()}, {"scan", to_json(rep, opts.dump_samples)}};
    report.records.push_back(std::move(r));
}

void check_weak_norm(const MetricModel& mm, const CheckOptions& opts, RunReport& report) {
    if (mm.is_perturbed()) {
        report.records.push_back(refused("weak-norm"));
        return;
    }
    const auto fit = weak_norm_fit(mm, opts.schedule, opts.tolerance.value_or(kWeakNormRateTolerance));
    CheckRecord r;
    r.name = "weak-norm";
    r.predicted = "holds";
    r.estimated = fit.M;
    r.tolerance = fit.rate_tolerance;
    r.pass = fit.holds;
    r.detail = to_json(fit, opts.dump_samples);
    report.records.push_back(std::move(r));
}

void check_membership(const MetricModel& mm, const CheckOptions& opts, RunReport& report) {
    if (mm.rank() != 1) throw InputError("membership check needs a rank-one model");
    if (mm.is_perturbed()) {
        report.records.push_back(refused("membership"));
        return;
    }
    const Weight c = raw_frame_degrees(mm).front();
    const bool boundary = (opts.anchor - c).is_integer();
    for (std::int64_t k = -3; k <= 3; ++k) {
        const auto res = membership_test(mm, k, opts.anchor, opts.schedule);
        CheckRecord r;
        r.name = "membership k=" + std::to_string(k) + " a=" + opts.anchor.str();
        r.predicted = res.exact ? "member" : "not member";
        r.estimated = res.slope;
        r.tolerance = kMembershipMargin;
        // On the boundary the numeric slope sits exactly at -a; the exact rule decides.
        r.pass = boundary || res.numeric == res.exact;
        r.detail = {{"k", k}, {"numeric", res.numeric}, {"exact", res.exact}, {"boundary", boundary}};
        report.records.push_back(std::move(r));
    }
}

void check_polylog(const MetricModel& mm, const CheckOptions& opts, RunReport& report) {
    if (mm.is_perturbed()) {
        report.records.push_back(refused("polylog"));
        return;
    }
    if (has_gauge(mm)) throw InputError("polylog check is only available for models without gauge twists");
    const auto degrees = raw_frame_degrees(mm);
    const auto logs = raw_frame_polylog(mm);
    for (std::size_t i = 0; i < mm.rank(); ++i) {
        SectionCoordinates s(mm.rank());
        s[i] = BigInt(0);
        const auto res = polylog_bounded_check(mm, s, degrees[i], logs[i], opts.schedule);
        CheckRecord r;
        r.name = "polylog e" + std::to_string(i);
        r.predicted = "bounded";
        r.estimated = res.sup;
        r.tolerance = 1e-6;
        r.pass = res.bounded;
        r.detail = {{"a", degrees[i].str()}, {"N", logs[i]}};
        report.records.push_back(std::move(r));
    }
}

} // namespace

const std::vector<std::string>& known_checks() {
    static const std::vector<std::string> names{"gamma", "acceptability", "weak-norm", "membership", "polylog"};
    return names;
}

std::vector<std::string> default_checks(const MetricModel& mm) {
    std::vector<std::string> out{"gamma", "acceptability", "weak-norm"};
    if (mm.rank() == 1) out.emplace_back("membership");
    return out;
}

void run_checks(const MetricModel& mm, const std::vector<std::string>& checks, const CheckOptions& opts, RunReport& report) {
    opts.schedule.validate();
    for (const auto& c : checks)
        if (std::find(known_checks().begin(), known_checks().end(), c) == known_checks().end()) throw InputError("unknown check '" + c + "'");
    for (const auto& c : checks) {
        if (c == "gamma") check_gamma(mm, opts, report);
        if (c == "acceptability") check_acceptability(mm, opts, report);
        if (c == "weak-norm") check_weak_norm(mm, opts, report);
        if (c == "membership") check_membership(mm, opts, report);
        if (c == "polylog") check_polylog(mm, opts, report);
    }
}

// Suites ----------------------------------------------------------------------

BrGrid BrGrid::parse(std::string_view text) {
    BrGrid g;
    if (text == "default") return g;
    const auto x = text.find('x');
    auto num = [&](std::string_view s) {
        int v = 0;
        const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size() || v < 2) throw InputError("grid must be 'default' or '<w>x<z>' with counts >= 2");
        return v;
    };
    if (x == std::string_view::npos) throw InputError("grid must be 'default' or '<w>x<z>'");
    g.w_count = num(text.substr(0, x));
    g.z_count = num(text.substr(x + 1));
    return g;
}

namespace {

CheckRecord count_record(std::string name, std::size_t failures, std::size_t checked, Json detail = Json::object()) {
    CheckRecord r;
    r.name = std::move(name);
    r.predicted = "0 failures";
    r.estimated = static_cast<double>(failures);
    r.tolerance = 0.0;
    r.pass = failures == 0;
    detail["checked"] = checked;
    r.detail = std::move(detail);
    return r;
}

std::string fmt_r(double r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

} // namespace

void suite_br(const BrGrid& grid, RunReport& report) {
    for (double r : grid.radii) {
        const std::string tag = "br r=" + fmt_r(r);
        std::size_t v_r = 0, v_w = 0, v_ineq = 0, n_ineq = 0;
        double worst_r = INFINITY, worst_w = INFINITY, worst_ineq = INFINITY;
        const auto ws = w_grid(grid.w_count);
        for (const auto w : ws) {
            const auto br = br_value(w, r);
            worst_r = std::min(worst_r, br.value - br.bound_92);
            worst_w = std::min(worst_w, br.value - br.bound_93);
            if (br.value < br.bound_92 - kInequalitySlack) ++v_r;
            if (br.value < br.bound_93 - kInequalitySlack) ++v_w;
            for (const auto z : z_grid(r, grid.z_count)) {
                const auto q = br_inequality_94(z, br);
                ++n_ineq;
                if (std::isfinite(q.lhs)) worst_ineq = std::min(worst_ineq, q.rhs - q.lhs);
                if (!q.holds) ++v_ineq;
            }
        }
        report.records.push_back(count_record(tag + " bound in r", v_r, ws.size(), {{"min_slack", worst_r}}));
        report.records.push_back(count_record(tag + " bound in |w|", v_w, ws.size(), {{"min_slack", worst_w}}));
        report.records.push_back(count_record(tag + " three-term inequality", v_ineq, n_ineq, {{"min_slack", worst_ineq}}));

        const auto centered = br_value(0.0, r);
        CheckRecord c;
        c.name = tag + " centered equality";
        c.predicted = "1.5 log r - 0.5 log pi - 0.5";
        c.estimated = centered.value - centered.bound_92;
        c.tolerance = 1e-4;
        c.pass = std::abs(*c.estimated) <= *c.tolerance;
        c.detail = {{"value", centered.value}, {"closed_form", centered.bound_92}};
        report.records.push_back(std::move(c));
    }
}

void suite_dio(std::uint64_t seed, int trials, const std::vector<double>& qs, RunReport& report) {
    if (trials < 1) throw InputError("trials must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (double q : qs) {
        for (int t = 0; t < trials; ++t) {
            std::vector<double> alpha(static_cast<std::size_t>(1 + t % 3));
            for (auto& a : alpha) a = unit(rng);
            const auto d = diophantine_search(alpha, q);
            // Recompute the distance to the nearest integer from floor/ceil.
            double delta = 0.0;
            for (double a : alpha) {
                const double x = static_cast<double>(d.m) * a;
                delta = std::max(delta, std::min(x - std::floor(x), std::ceil(x) - x));
            }
            CheckRecord r;
            r.name = "dio q=" + fmt_r(q) + " trial " + std::to_string(t);
            r.predicted = "m <= q, delta <= q^(-1/l)";
            r.estimated = delta;
            r.tolerance = d.threshold;
            r.pass = d.holds && d.m >= 1 && static_cast<double>(d.m) <= q && std::abs(delta - d.delta) <= 1e-12 && delta <= d.threshold;
            r.detail = to_json(d);
            report.records.push_back(std::move(r));
        }
    }
}

namespace {

Weight random_weight(std::mt19937_64& rng, long max_den, long span) {
    const long q = std::uniform_int_distribution<long>(1, max_den)(rng);
    return Weight(BigInt(std::uniform_int_distribution<long>(-span * q, span * q)(rng)), BigInt(q));
}

FilteredBundle random_bundle(std::mt19937_64& rng, std::size_t max_rank, long max_den) {
    std::vector<Weight> ws(std::uniform_int_distribution<std::size_t>(1, max_rank)(rng));
    for (auto& w : ws) w = random_weight(rng, max_den, 3);
    return FilteredBundle::from_weights(ws);
}

/// Largest integer n with n + x <= a, by walking from 0.
BigInt max_shift(const Weight& x, const Weight& a) {
    BigInt n = 0;
    while (Weight(n) + x > a) --n;
    while (Weight(n + 1) + x <= a) ++n;
    return n;
}

/// Largest m with v_i^dual (x) z^{-m} w_j mapping P_k into P_{a+k} for all k (critical k and midpoints).
BigInt hom_exponent_by_membership(const Weight& b, const Weight& c, const Weight& a) {
    std::vector<Weight> ks;
    for (long t = -2; t <= 2; ++t) {
        ks.push_back(b + Weight(t));
        ks.push_back(c - a + Weight(t));
    }
    std::sort(ks.begin(), ks.end());
    const std::size_t n = ks.size();
    for (std::size_t i = 0; i + 1 < n; ++i) ks.push_back((ks[i] + ks[i + 1]) / Weight(2));
    const auto ok = [&](const BigInt& m) {
        return std::all_of(ks.begin(), ks.end(), [&](const Weight& k) { return Weight(max_shift(b, k) + m) + c <= a + k; });
    };
    BigInt m = -10;
    while (!ok(m)) --m;
    while (ok(m + 1)) ++m;
    return m;
}

std::string show(const FilteredBundle& fb) { return to_json(fb).dump(); }

} // namespace

void suite_calculus(std::uint64_t seed, int trials, RunReport& report) {
    if (trials < 1) throw InputError("trials must be positive");
    std::mt19937_64 rng(seed);

    struct Tally {
        std::size_t failures = 0, checked = 0;
        std::string first;
        void add(bool ok, const std::string& what) {
            ++checked;
            if (!ok && failures++ == 0) first = what;
        }
        Json detail() const { return first.empty() ? Json::object() : Json{{"first_failure", first}}; }
    };
    Tally involution, shift, jumps, duality, tensor_gamma, tensor_enum, hom_tensor, hom_exp;

    for (int t = 0; t < trials; ++t) {
        const auto fb = random_bundle(rng, 6, 60);
        const Weight a = random_weight(rng, 60, 3);
        const Weight b = random_weight(rng, 60, 3);
        const Weight rank(static_cast<std::int64_t>(fb.rank()));
        const std::string where = show(fb) + " a=" + a.str();

        involution.add(dual(dual(fb)) == fb, where);
        shift.add(gamma(fb, a + Weight(1)) - gamma(fb, a) == rank, where);
        if (a != b) {
            const Weight lo = std::min(a, b), hi = std::max(a, b);
            std::size_t count = 0;
            for (const auto& j : jump_set(fb, lo, hi)) count += j.multiplicity;
            const Weight diff = gamma(fb, hi) - gamma(fb, lo);
            jumps.add(diff >= Weight(0) && diff == Weight(static_cast<std::int64_t>(count)), where + " b=" + b.str());
        }
        std::vector<Weight> neg;
        for (const auto& x : par(fb, a)) neg.push_back(-x);
        duality.add(sorted(dual_epsilon(fb, a).dual_par) == sorted(neg), where);
    }

    for (int t = 0; t < std::max(1, trials / 2); ++t) {
        const auto f1 = random_bundle(rng, 4, 60), f2 = random_bundle(rng, 4, 60);
        const std::string where = show(f1) + " " + show(f2);
        const auto tp = tensor(f1, f2);
        Weight ceil_sum;
        std::vector<Weight> pairs;
        for (const auto& bi : f1.weights())
            for (const auto& cj : f2.weights()) {
                ceil_sum += Weight(ceil_q(bi + cj));
                pairs.push_back(bi + cj + Weight(max_shift(bi + cj, Weight(0))));
            }
        const Weight r1(static_cast<std::int64_t>(f1.rank())), r2(static_cast<std::int64_t>(f2.rank()));
        tensor_gamma.add(gamma(tp, Weight(0)) == -ceil_sum + r2 * sum(f1.weights()) + r1 * sum(f2.weights()), where);
        tensor_enum.add(sorted(tp.weights()) == sorted(pairs), where);
    }

    for (int t = 0; t < std::max(1, trials / 5); ++t) {
        const auto f1 = random_bundle(rng, 3, 60), f2 = random_bundle(rng, 3, 60);
        const Weight a = random_weight(rng, 60, 2);
        const std::string where = show(f1) + " " + show(f2) + " a=" + a.str();
        hom_tensor.add(hom(f1, f2) == tensor(dual(f1), f2), where);
        const auto m = hom_exponents(f1, f2, a);
        bool ok = true;
        for (std::size_t i = 0; i < f1.rank(); ++i)
            for (std::size_t j = 0; j < f2.rank(); ++j) ok = ok && m[i][j] == hom_exponent_by_membership(f1.weights()[i], f2.weights()[j], a);
        hom_exp.add(ok, where);
    }

    report.records.push_back(count_record("calculus dual involution", involution.failures, involution.checked, involution.detail()));
    report.records.push_back(count_record("calculus gamma shift by rank", shift.failures, shift.checked, shift.detail()));
    report.records.push_back(count_record("calculus gamma jumps match jump set", jumps.failures, jumps.checked, jumps.detail()));
    report.records.push_back(count_record("calculus dual epsilon negates par", duality.failures, duality.checked, duality.detail()));
    report.records.push_back(count_record("calculus tensor gamma identity", tensor_gamma.failures, tensor_gamma.checked, tensor_gamma.detail()));
    report.records.push_back(count_record("calculus tensor pair enumeration", tensor_enum.failures, tensor_enum.checked, tensor_enum.detail()));
    report.records.push_back(count_record("calculus hom equals dual tensor", hom_tensor.failures, hom_tensor.checked, hom_tensor.detail()));
    report.records.push_back(count_record("calculus hom exponents by membership", hom_exp.failures, hom_exp.checked, hom_exp.detail()));
}

} // namespace parabund
