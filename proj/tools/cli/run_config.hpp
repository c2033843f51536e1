#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "nsdde/nsdde.hpp"

namespace nsdde::cli {

/// Invalid experiment definition. Maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error("config field '" + field + "': " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Initial segment descriptor: constant value or theta -> offset + slope * theta.
struct SegmentSpec {
    std::string kind = "constant";
    std::vector<double> offset{1.0};
    std::vector<double> slope{0.0};

    InitialSegment build(int state_dim) const;
};

/// Constant-rate overrides layered over the model's own bundle.
struct RateOverrides {
    std::optional<double> K1, K1_tilde, KR, KR_tilde, kappa, C1_tau, CR_tau;

    bool any() const;
};

struct RunConfig {
    std::string model_id;
    ParamMap params;
    double tau = 1.0;
    double horizon = 2.0;
    std::vector<double> ladder;
    double epsilon = 0.1;
    std::uint64_t n_paths = 100;
    std::uint64_t seed = 0;
    SegmentSpec xi;
    double box_radius = 2.0;
    std::uint64_t samples = 10000;
    double truncation_radius = 30.0;
    RateOverrides rates;
    std::string output_dir = "out";

    /// Echo used in manifests; keys sorted, unknown keys never present.
    nlohmann::json to_json() const;
};

/// Parses and validates a config document. Unknown keys, wrong types and
/// violated ranges throw ConfigError naming the field.
RunConfig parse_config(const nlohmann::json& doc);

/// Reads `path` as JSON and parses it. Syntax errors report the line.
RunConfig load_config(const std::filesystem::path& path);

/// Builds the configured model; construction failures become ConfigError.
NsddeModel build_model(const RunConfig& config);

/// Rate bundle for condition checks: the model's own bundle with overrides
/// applied. Throws ConfigError when neither is available or the result is
/// inconsistent.
ConditionSpec build_rates(const RunConfig& config, const NsddeModel& model);

}  // namespace nsdde::cli
