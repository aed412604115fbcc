// include/parabund/json_io.hpp - JSON descriptors for bundles, models and scalar fields, and
// JSON views of the result types.
//
// Bundle:  {"rank": 2, "weights": ["-1/3", "-1/2"]}
// Model:   {"line": {"c": "1/3", "N": 2}}
//          {"direct_sum": [model, ...]}   {"tensor": [model, ...]}   {"dual": model}
//          {"gauge": {"matrix": [C0, C1, ...], "model": model}}  (G(z) = sum C_k z^k)
//          {"gauge": {"unipotent": U, "model": model}}            (G(z) = I + z U)
//          {"perturb": {"rho": {"log_power": 2, "coef": 1}, "model": model}}
//          {"perturb": {"rho": {"radial_power": 1, "coef": 1}, "model": model}}
//          {"pullback": {"m": 2, "model": model}}
//          Matrix entries are numbers or [re, im] pairs.
// Field:   {"power": 0.7, "polylog": 3, "harmonic": [{"n": 1, "coef": [1, 0]}]}
//          meaning  power * log|z| + polylog * log(-log|z|^2) + Re sum coef z^n.

#pragma once

#include "parabund/analysis.hpp"
#include "parabund/estimators.hpp"
#include "parabund/filtered_bundle.hpp"
#include "parabund/metric_model.hpp"

#include <json.hpp>

#include <string>
#include <string_view>

namespace parabund {

using Json = nlohmann::ordered_json;

/// Parses inline JSON, or reads the file at `text` if it is not JSON. Throws InputError.
Json load_json_argument(std::string_view text);

Weight weight_from_json(const Json& j);
Json to_json(const Weight& w);
Json to_json(const std::vector<Weight>& ws);

FilteredBundle bundle_from_json(const Json& j);
Json to_json(const FilteredBundle& fb);

MetricModel model_from_json(const Json& j);
Json to_json(const MetricModel& mm);

/// log f (equivalently u) described by a field descriptor.
struct FieldSpec {
    double power = 0.0;
    double polylog = 0.0;
    std::vector<std::pair<int, Complex>> harmonic;

    double operator()(Complex z) const;
};

FieldSpec field_from_json(const Json& j);

Json to_json(const EstimateReport& rep, bool with_samples);
Json to_json(const AcceptabilityReport& rep, bool with_samples);
Json to_json(const WeakNormFit& fit, bool with_samples);
Json to_json(const BrResult& br);
Json to_json(const DiophantineResult& d);

} // namespace parabund
