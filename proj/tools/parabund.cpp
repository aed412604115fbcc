// parabund - command-line front end: exact filtered-bundle calculus, predict-vs-estimate checks,
// property suites and single estimates. JSON on stdout, a short summary on stderr.
//
// Exit codes: 0 pass, 1 check failure, 2 input error, 3 calculus error, 4 refused operation.

#include "parabund/analysis.hpp"
#include "parabund/errors.hpp"
#include "parabund/estimators.hpp"
#include "parabund/filtered_bundle.hpp"
#include "parabund/json_io.hpp"
#include "parabund/metric_model.hpp"
#include "parabund/report.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

using namespace parabund;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitCalculus = 3;
constexpr int kExitRefused = 4;

struct Globals {
    std::optional<std::uint64_t> seed;
    std::string schedule;
    std::optional<double> tolerance;
    std::string anchor = "0";
    bool dump_samples = false;
    std::string command_line;
};

std::uint64_t resolve_seed(const Globals& g) {
    if (g.seed) return *g.seed;
    if (const char* env = std::getenv("PARABUND_SEED"); env && *env) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw InputError("PARABUND_SEED must be a non-negative integer");
        }
    }
    return 0;
}

RadialSampleSchedule resolve_schedule(const Globals& g) {
    if (g.schedule.empty()) return {};
    return RadialSampleSchedule::parse(g.schedule);
}

void emit(const Json& j) { std::cout << j.dump(2) << '\n'; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// fb ----------------------------------------------------------------------------

struct FbArgs {
    std::string op;
    std::vector<std::string> inputs;
    long long m = 2;
    std::string section;
    std::string degrees;
};

int run_fb(const Globals& g, const FbArgs& a) {
    const Weight anchor = Weight::parse(g.anchor);
    std::vector<FilteredBundle> fbs;
    Json digests = Json::object();
    for (std::size_t i = 0; i < a.inputs.size(); ++i) {
        const Json j = load_json_argument(a.inputs[i]);
        fbs.push_back(bundle_from_json(j));
        digests["bundle" + std::to_string(i + 1)] = {{"sha256", sha256_hex(j.dump())}};
    }
    const bool binary = a.op == "tensor" || a.op == "hom";
    if (fbs.size() != (binary ? 2U : 1U)) throw InputError("fb " + a.op + " takes " + (binary ? "two bundles" : "one bundle"));
    const auto& fb = fbs.front();

    Json out = {{"command", g.command_line}, {"op", a.op}, {"inputs", digests}};
    Json result;
    if (a.op == "par") {
        out["anchor"] = anchor.str();
        result = to_json(par(fb, anchor));
    } else if (a.op == "gamma") {
        out["anchor"] = anchor.str();
        result = gamma(fb, anchor).str();
    } else if (a.op == "frame") {
        out["anchor"] = anchor.str();
        result = Json::array();
        for (const auto& e : frame_exponents(fb, anchor)) result.push_back(e.str());
    } else if (a.op == "det") {
        const auto d = det(fb);
        result = {{"bundle", to_json(d.bundle)}, {"lattice_index", d.lattice_index.str()}};
    } else if (a.op == "dual") {
        result = to_json(dual(fb));
        const auto de = dual_epsilon(fb, anchor);
        out["anchor"] = anchor.str();
        out["epsilon"] = de.epsilon.str();
        out["dual_par"] = to_json(de.dual_par);
    } else if (a.op == "tensor") {
        result = to_json(tensor(fbs[0], fbs[1]));
    } else if (a.op == "hom") {
        result = to_json(hom(fbs[0], fbs[1]));
        Json m = Json::array();
        for (const auto& row : hom_exponents(fbs[0], fbs[1], anchor)) {
            Json r = Json::array();
            for (const auto& e : row) r.push_back(e.str());
            m.push_back(r);
        }
        out["anchor"] = anchor.str();
        out["exponents"] = m;
    } else if (a.op == "pullback") {
        out["m"] = a.m;
        result = to_json(cyclic_pullback(fb, a.m));
    } else if (a.op == "degree") {
        if (a.section.empty()) throw InputError("fb degree needs --section '[k1, null, ...]'");
        const Json s = load_json_argument(a.section);
        if (!s.is_array()) throw InputError("--section must be a JSON array of integers or null");
        SectionCoordinates coords;
        for (const auto& x : s) {
            if (x.is_null()) coords.emplace_back(std::nullopt);
            else if (x.is_number_integer()) coords.emplace_back(BigInt(x.get<std::int64_t>()));
            else throw InputError("--section entries must be integers or null");
        }
        const auto d = section_degree(fb, coords);
        result = d ? Json(d->str()) : Json("-inf");
    } else if (a.op == "compatible") {
        if (a.degrees.empty()) throw InputError("fb compatible needs --degrees '[\"-1/3\", ...]'");
        const Json s = load_json_argument(a.degrees);
        if (!s.is_array()) throw InputError("--degrees must be a JSON array of weights");
        std::vector<Weight> ds;
        for (const auto& x : s) ds.push_back(weight_from_json(x));
        out["anchor"] = anchor.str();
        result = is_compatible_frame(fb, anchor, ds);
    } else {
        throw InputError("unknown fb operation '" + a.op + "'");
    }
    out["result"] = result;
    emit(out);
    std::cerr << "fb " << a.op << ": " << (result.is_string() ? result.get<std::string>() : result.dump()) << '\n';
    return 0;
}

// check -------------------------------------------------------------------------

int run_check(const Globals& g, const std::string& input, const std::string& checks_csv) {
    const auto t0 = std::chrono::steady_clock::now();
    const Json j = load_json_argument(input);
    const auto mm = model_from_json(j);

    std::vector<std::string> checks;
    if (checks_csv.empty()) {
        checks = default_checks(mm);
    } else {
        std::string item;
        for (char c : checks_csv + ",") {
            if (c == ',') {
                if (!item.empty()) checks.push_back(item);
                item.clear();
            } else if (c != ' ') {
                item += c;
            }
        }
    }

    CheckOptions opts;
    opts.schedule = resolve_schedule(g);
    opts.tolerance = g.tolerance;
    opts.anchor = Weight::parse(g.anchor);
    opts.dump_samples = g.dump_samples;

    RunReport report;
    report.command = g.command_line;
    report.seed = resolve_seed(g);
    report.add_input("model", j.dump());
    report.inputs["schedule"] = opts.schedule.str();
    run_checks(mm, checks, opts, report);
    report.wall_time_s = seconds_since(t0);
    emit(report.to_json());
    std::cerr << report.summary() << '\n';
    return report.exit_code();
}

// suite -------------------------------------------------------------------------

struct SuiteArgs {
    std::string name;
    std::string grid = "default";
    std::optional<int> trials;
    std::vector<double> q;
};

int run_suite(const Globals& g, const SuiteArgs& a) {
    const auto t0 = std::chrono::steady_clock::now();
    RunReport report;
    report.command = g.command_line;
    report.seed = resolve_seed(g);
    if (a.name == "br") {
        report.inputs["grid"] = a.grid;
        suite_br(BrGrid::parse(a.grid), report);
    } else if (a.name == "dio") {
        const auto qs = a.q.empty() ? std::vector<double>{10.0, 100.0} : a.q;
        report.inputs["q"] = qs;
        suite_dio(report.seed, a.trials.value_or(100), qs, report);
    } else if (a.name == "calculus-properties") {
        suite_calculus(report.seed, a.trials.value_or(1000), report);
    } else {
        throw InputError("unknown suite '" + a.name + "' (br, dio, calculus-properties)");
    }
    report.wall_time_s = seconds_since(t0);
    emit(report.to_json());
    std::cerr << report.summary() << '\n';
    return report.exit_code();
}

// estimate ----------------------------------------------------------------------

struct EstimateArgs {
    std::string kind;
    std::string input;
    long long k = 0;
};

int run_estimate(const Globals& g, const EstimateArgs& a) {
    const Json j = load_json_argument(a.input);
    const auto sched = resolve_schedule(g);
    const double tol = g.tolerance.value_or(kDefaultResidualTolerance);
    Json out = {{"command", g.command_line}, {"kind", a.kind}, {"inputs", {{"input", {{"sha256", sha256_hex(j.dump())}}}}}, {"schedule", sched.str()}};
    bool ok = true;

    const auto model = [&] {
        auto mm = model_from_json(j);
        out["model"] = to_json(mm);
        return mm;
    };
    if (a.kind == "gamma") {
        const auto mm = model();
        if (mm.is_perturbed()) throw RefusedError("gamma estimate of a perturbed model has no prediction to compare against");
        const auto rep = gamma_estimate(mm, sched, tol);
        out["report"] = to_json(rep, g.dump_samples);
        out["predicted"] = sum(raw_frame_degrees(mm)).str();
        ok = rep.verdict == Verdict::converged;
    } else if (a.kind == "slope" || a.kind == "lelong") {
        const auto f = field_from_json(j);
        const auto rep = a.kind == "slope" ? log_slope_limit_of_log(f, sched, tol) : lelong_estimate(f, sched, tol);
        out["report"] = to_json(rep, g.dump_samples);
        ok = rep.verdict == Verdict::converged;
    } else if (a.kind == "acceptability") {
        const auto rep = acceptability_scan(model(), sched, {}, g.tolerance.value_or(1e-2));
        out["report"] = to_json(rep, g.dump_samples);
        ok = rep.bounded;
    } else if (a.kind == "weak-norm") {
        const auto mm = model();
        if (mm.is_perturbed()) throw RefusedError("weak norm fit needs the predicted filtered bundle");
        const auto fit = weak_norm_fit(mm, sched, g.tolerance.value_or(kWeakNormRateTolerance));
        out["report"] = to_json(fit, g.dump_samples);
        ok = fit.holds;
    } else if (a.kind == "membership") {
        const auto mm = model();
        if (mm.is_perturbed()) throw RefusedError("membership needs the predicted filtered bundle");
        const auto res = membership_test(mm, a.k, Weight::parse(g.anchor), sched);
        out["report"] = {{"k", a.k}, {"anchor", g.anchor}, {"numeric", res.numeric}, {"exact", res.exact}, {"slope", res.slope},
                         {"fit", to_json(res.report, g.dump_samples)}};
        ok = res.numeric == res.exact;
    } else if (a.kind == "br") {
        if (!j.is_object() || !j.contains("r") || !j.contains("w")) throw InputError("br input needs {\"w\": [re, im], \"r\": ...}");
        const auto& w = j.at("w");
        const Complex wc = w.is_array() ? Complex(w.at(0).get<double>(), w.at(1).get<double>()) : Complex(w.get<double>(), 0.0);
        const auto br = br_value(wc, j.at("r").get<double>());
        out["report"] = to_json(br);
        ok = br.value >= std::max(br.bound_92, br.bound_93) - kInequalitySlack;
    } else if (a.kind == "dio") {
        if (!j.is_object() || !j.contains("alpha") || !j.contains("q")) throw InputError("dio input needs {\"alpha\": [...], \"q\": ...}");
        const auto d = diophantine_search(j.at("alpha").get<std::vector<double>>(), j.at("q").get<double>());
        out["report"] = to_json(d);
        ok = d.holds;
    } else {
        throw InputError("unknown estimate kind '" + a.kind + "'");
    }
    out["status"] = ok ? "pass" : "fail";
    emit(out);
    std::cerr << "estimate " << a.kind << ": " << (ok ? "pass" : "fail") << '\n';
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Filtered bundles on the punctured disk: exact calculus, model metrics and numeric checks"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    for (int i = 0; i < argc; ++i) g.command_line += (i ? " " : "") + std::string(argv[i]);
    app.add_option("--seed", g.seed, "Seed for random trials (default: $PARABUND_SEED or 0)");
    app.add_option("--schedule", g.schedule, "Radial schedule r0,sigma,count,angles (default 0.1,0.5,18,16)");
    app.add_option("--tolerance", g.tolerance, "Override the tolerance of the requested check or estimate");
    app.add_option("--anchor", g.anchor, "Filtration index a, as a rational (default 0)");
    app.add_flag("--dump-samples", g.dump_samples, "Include per-radius samples in the JSON output");

    FbArgs fb;
    auto* fb_cmd = app.add_subcommand("fb", "Exact filtered-bundle operations");
    fb_cmd->add_option("op", fb.op, "par | gamma | frame | det | dual | tensor | hom | pullback | degree | compatible")
        ->required()
        ->check(CLI::IsMember({"par", "gamma", "frame", "det", "dual", "tensor", "hom", "pullback", "degree", "compatible"}));
    fb_cmd->add_option("bundles", fb.inputs, "Bundle descriptors (inline JSON or file paths)")->required();
    fb_cmd->add_option("--m", fb.m, "Cover degree for pullback");
    fb_cmd->add_option("--section", fb.section, "Section orders for degree, e.g. '[2, null]'");
    fb_cmd->add_option("--degrees", fb.degrees, "Frame degrees for compatible, e.g. '[\"-1/3\", \"0\"]'");

    std::string check_input, checks;
    auto* check_cmd = app.add_subcommand("check", "Compare exact predictions with numeric estimates for a model");
    check_cmd->add_option("model", check_input, "Model descriptor (inline JSON or file path)")->required();
    check_cmd->add_option("--checks", checks, "Comma-separated: gamma, acceptability, weak-norm, membership, polylog");

    SuiteArgs suite;
    auto* suite_cmd = app.add_subcommand("suite", "Run a property battery");
    suite_cmd->add_option("name", suite.name, "br | dio | calculus-properties")->required()->check(CLI::IsMember({"br", "dio", "calculus-properties"}));
    suite_cmd->add_option("--grid", suite.grid, "B_r grid: 'default' (64 w x 32 z) or '<w>x<z>'");
    suite_cmd->add_option("--trials", suite.trials, "Number of random trials");
    suite_cmd->add_option("--q", suite.q, "Diophantine q values (repeatable)");

    EstimateArgs est;
    auto* est_cmd = app.add_subcommand("estimate", "Run one estimator");
    est_cmd->add_option("kind", est.kind, "gamma | slope | lelong | acceptability | weak-norm | membership | br | dio")
        ->required()
        ->check(CLI::IsMember({"gamma", "slope", "lelong", "acceptability", "weak-norm", "membership", "br", "dio"}));
    est_cmd->add_option("input", est.input, "Model, field, or analysis input (inline JSON or file path)")->required();
    est_cmd->add_option("--k", est.k, "Laurent order for membership");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (*fb_cmd) return run_fb(g, fb);
        if (*check_cmd) return run_check(g, check_input, checks);
        if (*suite_cmd) return run_suite(g, suite);
        if (*est_cmd) return run_estimate(g, est);
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitInput;
    } catch (const Json::exception& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitInput;
    } catch (const CalculusError& e) {
        std::cerr << "calculus error: " << e.what() << '\n';
        return kExitCalculus;
    } catch (const RefusedError& e) {
        std::cerr << "refused: " << e.what() << '\n';
        return kExitRefused;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return kExitInput;
}
