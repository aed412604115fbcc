// src/json_io.cpp

#include "parabund/json_io.hpp"

#include "parabund/errors.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace parabund {

namespace {

[[noreturn]] void bad(const std::string& what) { throw InputError("invalid descriptor: " + what); }

const Json& member(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) bad(std::string("missing \"") + key + "\"");
    return j.at(key);
}

Complex complex_from_json(const Json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<double>(), j[1].get<double>()};
    bad("matrix entry must be a number or [re, im]");
}

Json complex_to_json(Complex z) {
    if (z.imag() == 0.0) return z.real();
    return Json::array({z.real(), z.imag()});
}

MatrixC matrix_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) bad("matrix must be a non-empty array of rows");
    const auto n = static_cast<Eigen::Index>(j.size());
    MatrixC m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) bad("matrix must be square");
        for (Eigen::Index k = 0; k < n; ++k) m(i, k) = complex_from_json(row[static_cast<std::size_t>(k)]);
    }
    return m;
}

Json matrix_to_json(const MatrixC& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
        rows.push_back(row);
    }
    return rows;
}

MetricModel model_node(const Json& j);

std::vector<MetricModel> model_list(const Json& j, const char* what) {
    if (!j.is_array() || j.empty()) bad(std::string(what) + " needs a non-empty array of models");
    std::vector<MetricModel> out;
    for (const auto& x : j) out.push_back(model_node(x));
    return out;
}

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};

Json samples_to_json(const std::vector<RadialSample>& samples) {
    Json out = Json::array();
    for (const auto& s : samples) out.push_back({{"r", s.radius}, {"value", s.value}});
    return out;
}

Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

template <class F>
auto guarded(F&& f) {
    try {
        return f();
    } catch (const Json::exception& e) {
        throw InputError(std::string("invalid descriptor: ") + e.what());
    }
}

MetricModel model_node(const Json& j) {
    if (!j.is_object() || j.size() != 1) bad("model must be an object with exactly one key");
    const auto& [key, body] = *j.items().begin();
    if (key == "line") {
        const std::int64_t n = body.contains("N") ? body.at("N").get<std::int64_t>() : 0;
        return MetricModel::line(weight_from_json(member(body, "c")), n);
    }
    if (key == "direct_sum") return MetricModel::direct_sum(model_list(body, "direct_sum"));
    if (key == "tensor") return MetricModel::tensor(model_list(body, "tensor"));
    if (key == "dual") return MetricModel::dual(model_node(body));
    if (key == "gauge") {
        auto inner = model_node(member(body, "model"));
        if (body.contains("unipotent")) return MetricModel::gauge_twist(PolynomialMatrix::unipotent(matrix_from_json(body.at("unipotent"))), inner);
        const auto& coeffs = member(body, "matrix");
        if (!coeffs.is_array() || coeffs.empty()) bad("gauge \"matrix\" must be a non-empty array of coefficient matrices");
        std::vector<MatrixC> cs;
        for (const auto& c : coeffs) cs.push_back(matrix_from_json(c));
        for (const auto& c : cs)
            if (c.rows() != cs.front().rows()) bad("gauge coefficients differ in size");
        return MetricModel::gauge_twist(PolynomialMatrix(std::move(cs)), inner);
    }
    if (key == "perturb") {
        const auto& rho = member(body, "rho");
        Perturbation p;
        p.coefficient = rho.contains("coef") ? rho.at("coef").get<double>() : 1.0;
        if (rho.contains("log_power")) {
            p.kind = Perturbation::Kind::log_power;
            p.power = rho.at("log_power").get<double>();
        } else if (rho.contains("radial_power")) {
            p.kind = Perturbation::Kind::radial_power;
            p.power = rho.at("radial_power").get<double>();
        } else {
            bad("rho needs \"log_power\" or \"radial_power\"");
        }
        return MetricModel::scalar_perturb(p, model_node(member(body, "model")));
    }
    if (key == "pullback") {
        const auto& m = member(body, "m");
        if (!m.is_number_integer()) bad("pullback \"m\" must be an integer");
        return MetricModel::pullback(m.get<std::int64_t>(), model_node(member(body, "model")));
    }
    bad("unknown model node \"" + key + "\"");
}


} // namespace

Json load_json_argument(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    std::string content;
    if (first != std::string_view::npos && (text[first] == '{' || text[first] == '[' || text[first] == '"')) {
        content = std::string(text);
    } else {
        std::ifstream in{std::string(text)};
        if (!in) throw InputError("cannot read input file '" + std::string(text) + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        content = ss.str();
    }
    try {
        return Json::parse(content);
    } catch (const Json::parse_error& e) {
        throw InputError(std::string("malformed JSON: ") + e.what());
    }
}

Weight weight_from_json(const Json& j) {
    if (j.is_string()) return Weight::parse(j.get<std::string>());
    if (j.is_number_integer()) return Weight(j.get<std::int64_t>());
    bad("weight must be a rational string like \"-1/3\" or an integer");
}

Json to_json(const Weight& w) { return w.str(); }

Json to_json(const std::vector<Weight>& ws) {
    Json out = Json::array();
    for (const auto& w : ws) out.push_back(w.str());
    return out;
}

FilteredBundle bundle_from_json(const Json& j) {
    return guarded([&] {
    const auto& ws = member(j, "weights");
    if (!ws.is_array() || ws.empty()) bad("\"weights\" must be a non-empty array");
    std::vector<Weight> weights;
    for (const auto& w : ws) weights.push_back(weight_from_json(w));
    if (j.contains("rank")) {
        const auto& r = j.at("rank");
        if (!r.is_number_integer() || r.get<std::int64_t>() != static_cast<std::int64_t>(weights.size()))
            bad("\"rank\" does not match the number of weights");
    }
    return FilteredBundle::from_weights(weights);
    });
}

Json to_json(const FilteredBundle& fb) { return {{"rank", fb.rank()}, {"weights", to_json(fb.weights())}}; }

MetricModel model_from_json(const Json& j) {
    return guarded([&] { return model_node(j); });
}

Json to_json(const MetricModel& mm) {
    return std::visit(Overloaded{
                          [](const model::Line& l) -> Json { return {{"line", {{"c", l.c.str()}, {"N", l.polylog}}}}; },
                          [](const model::DirectSum& s) -> Json {
                              Json parts = Json::array();
                              for (const auto& p : s.parts) parts.push_back(to_json(p));
                              return {{"direct_sum", parts}};
                          },
                          [](const model::Tensor& t) -> Json {
                              Json parts = Json::array();
                              for (const auto& p : t.factors) parts.push_back(to_json(p));
                              return {{"tensor", parts}};
                          },
                          [](const model::Dual& d) -> Json { return {{"dual", to_json(*d.inner)}}; },
                          [](const model::GaugeTwist& g) -> Json {
                              Json cs = Json::array();
                              for (const auto& c : g.g.coefficients()) cs.push_back(matrix_to_json(c));
                              return {{"gauge", {{"matrix", cs}, {"model", to_json(*g.inner)}}}};
                          },
                          [](const model::ScalarPerturb& p) -> Json {
                              const char* kind = p.rho.kind == Perturbation::Kind::log_power ? "log_power" : "radial_power";
                              return {{"perturb", {{"rho", {{kind, p.rho.power}, {"coef", p.rho.coefficient}}}, {"model", to_json(*p.inner)}}}};
                          },
                          [](const model::Pullback& p) -> Json { return {{"pullback", {{"m", p.m}, {"model", to_json(*p.inner)}}}}; },
                      },
                      mm.node());
}

double FieldSpec::operator()(Complex z) const {
    const double lr = std::log(std::abs(z));
    double v = power * lr;
    if (polylog != 0.0) v += polylog * std::log(-2.0 * lr);
    Complex h = 0.0;
    for (const auto& [n, c] : harmonic) h += c * std::pow(z, n);
    return v + h.real();
}

FieldSpec field_from_json(const Json& j) {
    return guarded([&] {
    if (!j.is_object()) bad("field must be an object");
    for (const auto& [key, _] : j.items())
        if (key != "power" && key != "polylog" && key != "harmonic") bad("unknown field key \"" + key + "\"");
    FieldSpec f;
    if (j.contains("power")) f.power = j.at("power").get<double>();
    if (j.contains("polylog")) f.polylog = j.at("polylog").get<double>();
    if (j.contains("harmonic")) {
        for (const auto& t : j.at("harmonic")) {
            const int n = member(t, "n").get<int>();
            if (n < 1) bad("harmonic terms need n >= 1");
            f.harmonic.emplace_back(n, complex_from_json(member(t, "coef")));
        }
    }
    return f;
    });
}

Json to_json(const EstimateReport& rep, bool with_samples) {
    Json out = {{"value", rep.value},
                {"slope_fit", rep.slope_fit},
                {"polylog_fit", rep.polylog_fit},
                {"intercept", rep.intercept},
                {"residual", rep.residual},
                {"samples_used", rep.samples_used},
                {"tolerance", rep.tolerance},
                {"verdict", to_string(rep.verdict)}};
    if (with_samples) out["samples"] = samples_to_json(rep.samples);
    return out;
}

Json to_json(const AcceptabilityReport& rep, bool with_samples) {
    Json out = {{"sup_norm", rep.sup_norm}, {"trend", rep.trend}, {"tolerance", rep.tolerance}, {"bounded", rep.bounded}};
    if (with_samples) {
        Json s = Json::array();
        for (std::size_t k = 0; k < rep.radii.size(); ++k) s.push_back({{"r", rep.radii[k]}, {"value", rep.per_radius_max[k]}});
        out["samples"] = s;
    }
    return out;
}

Json to_json(const WeakNormFit& fit, bool with_samples) {
    return {{"C", finite_or_null(fit.C)},
            {"M", finite_or_null(fit.M)},
            {"holds", fit.holds},
            {"power_rate", fit.power_rate},
            {"rate_tolerance", fit.rate_tolerance},
            {"largest_eigenvalue", to_json(fit.largest, with_samples)},
            {"smallest_eigenvalue", to_json(fit.smallest, with_samples)}};
}

Json to_json(const BrResult& br) {
    return {{"w", complex_to_json(br.w)},
            {"r", br.r},
            {"value", br.value},
            {"bound_92", finite_or_null(br.bound_92)},
            {"bound_93", finite_or_null(br.bound_93)},
            {"level_radius", br.level_radius}};
}

Json to_json(const DiophantineResult& d) {
    return {{"alpha", d.alpha}, {"q", d.q},         {"m", d.m}, {"remainders", d.remainders}, {"delta", d.delta},
            {"threshold", d.threshold}, {"holds", d.holds}};
}

} // namespace parabund
