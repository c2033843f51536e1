#include "run_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace nsdde::cli {

using nlohmann::json;

namespace {

void reject_unknown(const json& object, const std::set<std::string>& allowed,
                    const std::string& where) {
    for (const auto& [key, value] : object.items()) {
        if (!allowed.count(key)) {
            throw ConfigError(where.empty() ? key : where + "." + key, "unknown key");
        }
    }
}

double number(const json& value, const std::string& field) {
    if (!value.is_number()) throw ConfigError(field, "expected a number");
    return value.get<double>();
}

std::uint64_t count(const json& value, const std::string& field) {
    if (value.is_number_unsigned()) return value.get<std::uint64_t>();
    if (value.is_number_integer() && value.get<std::int64_t>() >= 0) {
        return static_cast<std::uint64_t>(value.get<std::int64_t>());
    }
    throw ConfigError(field, "expected a nonnegative integer");
}

std::vector<double> numbers(const json& value, const std::string& field) {
    if (value.is_number()) return {value.get<double>()};
    if (!value.is_array() || value.empty()) throw ConfigError(field, "expected a number or array");
    std::vector<double> out;
    for (std::size_t i = 0; i < value.size(); ++i) {
        out.push_back(number(value[i], field + "[" + std::to_string(i) + "]"));
    }
    return out;
}

Vector to_vector(const std::vector<double>& v, int dim, const std::string& field) {
    if (v.size() == 1 && dim > 1) return Vector::Constant(dim, v[0]);
    if (static_cast<int>(v.size()) != dim) {
        throw ConfigError(field, "expected " + std::to_string(dim) + " components");
    }
    return Eigen::Map<const Vector>(v.data(), dim);
}

SegmentSpec parse_segment(const json& doc) {
    if (!doc.is_object()) throw ConfigError("xi", "expected an object");
    if (!doc.contains("type") || !doc["type"].is_string()) {
        throw ConfigError("xi.type", "expected \"constant\" or \"affine\"");
    }
    SegmentSpec spec;
    spec.kind = doc["type"].get<std::string>();
    if (spec.kind == "constant") {
        reject_unknown(doc, {"type", "value"}, "xi");
        if (!doc.contains("value")) throw ConfigError("xi.value", "missing");
        spec.offset = numbers(doc["value"], "xi.value");
        spec.slope.assign(spec.offset.size(), 0.0);
    } else if (spec.kind == "affine") {
        reject_unknown(doc, {"type", "offset", "slope"}, "xi");
        if (!doc.contains("offset") || !doc.contains("slope")) {
            throw ConfigError("xi", "affine segment needs offset and slope");
        }
        spec.offset = numbers(doc["offset"], "xi.offset");
        spec.slope = numbers(doc["slope"], "xi.slope");
        if (spec.offset.size() != spec.slope.size()) {
            throw ConfigError("xi", "offset and slope differ in length");
        }
    } else {
        throw ConfigError("xi.type", "expected \"constant\" or \"affine\"");
    }
    return spec;
}

RateOverrides parse_rates(const json& doc) {
    if (!doc.is_object()) throw ConfigError("rates", "expected an object");
    reject_unknown(doc, {"K1", "K1_tilde", "KR", "KR_tilde", "kappa", "C1_tau", "CR_tau"}, "rates");
    RateOverrides r;
    auto take = [&](const char* key, std::optional<double>& slot) {
        if (doc.contains(key)) slot = number(doc[key], std::string("rates.") + key);
    };
    take("K1", r.K1);
    take("K1_tilde", r.K1_tilde);
    take("KR", r.KR);
    take("KR_tilde", r.KR_tilde);
    take("kappa", r.kappa);
    take("C1_tau", r.C1_tau);
    take("CR_tau", r.CR_tau);
    return r;
}

}  // namespace

InitialSegment SegmentSpec::build(int state_dim) const {
    const Vector a = to_vector(offset, state_dim, "xi");
    if (kind == "constant") return InitialSegment::constant(a);
    return InitialSegment::affine(a, to_vector(slope, state_dim, "xi"));
}

bool RateOverrides::any() const {
    return K1 || K1_tilde || KR || KR_tilde || kappa || C1_tau || CR_tau;
}

json RunConfig::to_json() const {
    json doc;
    doc["model"] = model_id;
    doc["params"] = json::object();
    for (const auto& [k, v] : params) doc["params"][k] = v;
    doc["tau"] = tau;
    doc["horizon"] = horizon;
    doc["ladder"] = ladder;
    doc["epsilon"] = epsilon;
    doc["n_paths"] = n_paths;
    doc["seed"] = seed;
    if (xi.kind == "constant") {
        doc["xi"] = {{"type", "constant"}, {"value", xi.offset}};
    } else {
        doc["xi"] = {{"type", "affine"}, {"offset", xi.offset}, {"slope", xi.slope}};
    }
    doc["box_radius"] = box_radius;
    doc["samples"] = samples;
    doc["truncation_radius"] = truncation_radius;
    if (rates.any()) {
        json r = json::object();
        auto put = [&](const char* key, const std::optional<double>& v) {
            if (v) r[key] = *v;
        };
        put("K1", rates.K1);
        put("K1_tilde", rates.K1_tilde);
        put("KR", rates.KR);
        put("KR_tilde", rates.KR_tilde);
        put("kappa", rates.kappa);
        put("C1_tau", rates.C1_tau);
        put("CR_tau", rates.CR_tau);
        doc["rates"] = r;
    }
    doc["output_dir"] = output_dir;
    return doc;
}

RunConfig parse_config(const json& doc) {
    if (!doc.is_object()) throw ConfigError("<root>", "expected a JSON object");
    reject_unknown(doc,
                   {"model", "params", "tau", "horizon", "ladder", "epsilon", "n_paths", "seed",
                    "xi", "box_radius", "samples", "truncation_radius", "rates", "output_dir"},
                   "");

    RunConfig config;
    if (!doc.contains("model") || !doc["model"].is_string()) {
        throw ConfigError("model", "expected a built-in model id");
    }
    config.model_id = doc["model"].get<std::string>();
    if (doc.contains("params")) {
        if (!doc["params"].is_object()) throw ConfigError("params", "expected an object");
        for (const auto& [key, value] : doc["params"].items()) {
            config.params[key] = number(value, "params." + key);
        }
    }
    for (const char* key : {"tau", "horizon", "ladder"}) {
        if (!doc.contains(key)) throw ConfigError(key, "missing");
    }
    config.tau = number(doc["tau"], "tau");
    config.horizon = number(doc["horizon"], "horizon");
    config.ladder = numbers(doc["ladder"], "ladder");
    if (doc.contains("epsilon")) config.epsilon = number(doc["epsilon"], "epsilon");
    if (doc.contains("n_paths")) config.n_paths = count(doc["n_paths"], "n_paths");
    if (doc.contains("seed")) config.seed = count(doc["seed"], "seed");
    if (doc.contains("xi")) config.xi = parse_segment(doc["xi"]);
    if (doc.contains("box_radius")) config.box_radius = number(doc["box_radius"], "box_radius");
    if (doc.contains("samples")) config.samples = count(doc["samples"], "samples");
    if (doc.contains("truncation_radius")) {
        config.truncation_radius = number(doc["truncation_radius"], "truncation_radius");
    }
    if (doc.contains("rates")) config.rates = parse_rates(doc["rates"]);
    if (doc.contains("output_dir")) {
        if (!doc["output_dir"].is_string()) throw ConfigError("output_dir", "expected a string");
        config.output_dir = doc["output_dir"].get<std::string>();
    }

    if (config.n_paths < 1) throw ConfigError("n_paths", "must be >= 1");
    if (config.samples < 1) throw ConfigError("samples", "must be >= 1");
    if (!(config.epsilon > 0.0)) throw ConfigError("epsilon", "must be positive");
    if (!(config.box_radius > 0.0)) throw ConfigError("box_radius", "must be positive");
    if (!(config.truncation_radius > 0.0)) throw ConfigError("truncation_radius", "must be positive");
    try {
        make_ladder(config.tau, config.horizon, config.ladder);
    } catch (const Error& e) {
        throw ConfigError("ladder", std::string(e.what()) +
                                        " (each step must divide tau, horizon and the previous step)");
    }
    config.xi.build(build_model(config).state_dim());
    return config;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("--config", "cannot open " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("--config", std::string("invalid JSON: ") + e.what());
    }
    return parse_config(doc);
}

NsddeModel build_model(const RunConfig& config) {
    try {
        return make_builtin(config.model_id, config.params, config.tau, config.box_radius);
    } catch (const Error& e) {
        bool known_id = true;
        try {
            builtin_defaults(config.model_id);
        } catch (const Error&) {
            known_id = false;
        }
        throw ConfigError(known_id ? "params" : "model", e.what());
    }
}

ConditionSpec build_rates(const RunConfig& config, const NsddeModel& model) {
    ConditionSpec spec;
    if (model.rates()) {
        spec = *model.rates();
    } else if (!(config.rates.K1 && config.rates.K1_tilde && config.rates.KR && config.rates.KR_tilde)) {
        throw ConfigError("rates", "model '" + model.id() +
                                       "' ships no rate bundle; supply K1, K1_tilde, KR, KR_tilde");
    }
    const RateOverrides& r = config.rates;
    auto constant = [](double v) { return RateFn([v](double) { return v; }); };
    if (r.K1) spec.K1 = constant(*r.K1);
    if (r.K1_tilde) spec.K1_tilde = constant(*r.K1_tilde);
    if (r.KR) spec.KR = constant(*r.KR);
    if (r.KR_tilde) spec.KR_tilde = constant(*r.KR_tilde);
    if (r.kappa) spec.kappa = *r.kappa;
    if (r.C1_tau) spec.C1_tau = *r.C1_tau;
    if (r.CR_tau) spec.CR_tau = *r.CR_tau;
    spec.box_radius = config.box_radius;
    try {
        spec.validate();
    } catch (const Error& e) {
        throw ConfigError("rates", e.what());
    }
    return spec;
}

}  // namespace nsdde::cli
