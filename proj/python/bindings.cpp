// Python module parabund._core. Weights cross the boundary as rational strings, models and
// reports as JSON text; the pure-Python package wraps both into friendlier objects.

#include "parabund/analysis.hpp"
#include "parabund/errors.hpp"
#include "parabund/estimators.hpp"
#include "parabund/filtered_bundle.hpp"
#include "parabund/json_io.hpp"
#include "parabund/metric_model.hpp"
#include "parabund/report.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace parabund;

namespace {

std::vector<Weight> weights_in(const std::vector<std::string>& xs) {
    std::vector<Weight> out;
    for (const auto& x : xs) out.push_back(Weight::parse(x));
    return out;
}

std::vector<std::string> weights_out(const std::vector<Weight>& ws) {
    std::vector<std::string> out;
    for (const auto& w : ws) out.push_back(w.str());
    return out;
}

py::int_ big(const BigInt& n) { return py::int_(py::str(n.str())); }

FilteredBundle bundle(const std::vector<std::string>& ws) { return FilteredBundle::from_weights(weights_in(ws)); }

MetricModel model_arg(const std::string& descriptor) { return model_from_json(load_json_argument(descriptor)); }

RadialSampleSchedule schedule(const std::string& text) {
    return text.empty() ? RadialSampleSchedule{} : RadialSampleSchedule::parse(text);
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Filtered bundle calculus, metric models and asymptotic estimators";

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<CalculusError>(m, "CalculusError", PyExc_ArithmeticError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_RuntimeError);
    py::register_exception<RefusedError>(m, "RefusedError", PyExc_RuntimeError);

    m.def("canonical_weights", [](const std::vector<std::string>& ws) { return weights_out(bundle(ws).weights()); });
    m.def("par", [](const std::vector<std::string>& ws, const std::string& a) { return weights_out(par(bundle(ws), Weight::parse(a))); });
    m.def("gamma", [](const std::vector<std::string>& ws, const std::string& a) { return gamma(bundle(ws), Weight::parse(a)).str(); });
    m.def("frame_exponents", [](const std::vector<std::string>& ws, const std::string& a) {
        py::list out;
        for (const auto& e : frame_exponents(bundle(ws), Weight::parse(a))) out.append(big(e));
        return out;
    });
    m.def("jump_set", [](const std::vector<std::string>& ws, const std::string& lo, const std::string& hi) {
        std::vector<std::pair<std::string, std::size_t>> out;
        for (const auto& j : jump_set(bundle(ws), Weight::parse(lo), Weight::parse(hi))) out.emplace_back(j.weight.str(), j.multiplicity);
        return out;
    });
    m.def("det", [](const std::vector<std::string>& ws) {
        const auto d = det(bundle(ws));
        return std::make_pair(weights_out(d.bundle.weights()), d.lattice_index.str());
    });
    m.def("dual", [](const std::vector<std::string>& ws) { return weights_out(dual(bundle(ws)).weights()); });
    m.def("dual_epsilon", [](const std::vector<std::string>& ws, const std::string& a) {
        const auto d = dual_epsilon(bundle(ws), Weight::parse(a));
        return std::make_pair(d.epsilon.str(), weights_out(d.dual_par));
    });
    m.def("tensor", [](const std::vector<std::string>& a, const std::vector<std::string>& b) {
        return weights_out(tensor(bundle(a), bundle(b)).weights());
    });
    m.def("hom", [](const std::vector<std::string>& a, const std::vector<std::string>& b) {
        return weights_out(hom(bundle(a), bundle(b)).weights());
    });
    m.def("hom_exponents", [](const std::vector<std::string>& a, const std::vector<std::string>& b, const std::string& idx) {
        py::list rows;
        for (const auto& row : hom_exponents(bundle(a), bundle(b), Weight::parse(idx))) {
            py::list r;
            for (const auto& e : row) r.append(big(e));
            rows.append(r);
        }
        return rows;
    });
    m.def("cyclic_pullback", [](const std::vector<std::string>& ws, long long k) { return weights_out(cyclic_pullback(bundle(ws), k).weights()); });
    m.def("section_degree", [](const std::vector<std::string>& ws, const std::vector<std::optional<long long>>& orders) -> std::optional<std::string> {
        SectionCoordinates s;
        for (const auto& o : orders) s.push_back(o ? std::optional<BigInt>(BigInt(*o)) : std::nullopt);
        const auto d = section_degree(bundle(ws), s);
        if (!d) return std::nullopt;
        return d->str();
    });
    m.def("is_compatible_frame", [](const std::vector<std::string>& ws, const std::string& a, const std::vector<std::string>& d) {
        return is_compatible_frame(bundle(ws), Weight::parse(a), weights_in(d));
    });

    m.def("model_canonical", [](const std::string& d) { return to_json(model_arg(d)).dump(); });
    m.def("model_rank", [](const std::string& d) { return model_arg(d).rank(); });
    m.def("evaluate", [](const std::string& d, Complex z) { return evaluate(model_arg(d), z); });
    m.def("curvature_norm", [](const std::string& d, Complex z) { return curvature(model_arg(d), z).norm; });
    m.def("poincare_density", &poincare_density);
    m.def("predicted_bundle", [](const std::string& d) { return weights_out(predicted_filtered_bundle(model_arg(d)).weights()); });
    m.def("raw_frame_degrees", [](const std::string& d) { return weights_out(raw_frame_degrees(model_arg(d))); });
    m.def("acceptability_scan", [](const std::string& d, const std::string& sched) {
        return to_json(acceptability_scan(model_arg(d), schedule(sched)), false).dump();
    });
    m.def("gamma_estimate", [](const std::string& d, const std::string& sched, double tol) {
        return to_json(gamma_estimate(model_arg(d), schedule(sched), tol), false).dump();
    });
    m.def("weak_norm_fit", [](const std::string& d, const std::string& sched, double tol) {
        return to_json(weak_norm_fit(model_arg(d), schedule(sched), tol), false).dump();
    });
    m.def("membership_test", [](const std::string& d, std::int64_t k, const std::string& a, const std::string& sched) {
        const auto r = membership_test(model_arg(d), k, Weight::parse(a), schedule(sched));
        Json out = {{"numeric", r.numeric}, {"exact", r.exact}, {"slope", r.slope}, {"report", to_json(r.report, false)}};
        return out.dump();
    });
    m.def("log_slope_limit", [](const std::function<double(Complex)>& f, const std::string& sched, double tol) {
        return to_json(log_slope_limit(f, schedule(sched), tol), false).dump();
    });
    m.def("lelong_estimate", [](const std::function<double(Complex)>& u, const std::string& sched, double tol) {
        return to_json(lelong_estimate(u, schedule(sched), tol), false).dump();
    });

    m.def("br_value", [](Complex w, double r) { return to_json(br_value(w, r)).dump(); });
    m.def("diophantine_search", [](const std::vector<double>& alpha, double q) { return to_json(diophantine_search(alpha, q)).dump(); });
    m.def("isotypic_project", [](const std::vector<Complex>& values, int j) { return isotypic_project(values, j); });

    m.def("check", [](const std::string& d, const std::vector<std::string>& checks, const std::string& sched, std::optional<double> tol,
                      const std::string& anchor) {
        const auto mm = model_arg(d);
        RunReport report;
        report.command = "check";
        report.add_input("model", d);
        CheckOptions opts;
        opts.schedule = schedule(sched);
        opts.tolerance = tol;
        opts.anchor = Weight::parse(anchor);
        run_checks(mm, checks.empty() ? default_checks(mm) : checks, opts, report);
        return report.to_json().dump();
    });
    m.attr("default_residual_tolerance") = kDefaultResidualTolerance;
    m.attr("default_rate_tolerance") = kWeakNormRateTolerance;
}
