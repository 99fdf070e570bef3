#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "skewlab/circle.hpp"
#include "skewlab/coupling.hpp"
#include "skewlab/diagnostics.hpp"
#include "skewlab/engine.hpp"
#include "skewlab/field.hpp"
#include "skewlab/observable.hpp"

namespace skewlab::cli {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

/// Limit policy named in a config. `automatic` picks the staircase formula
/// matching the slope, but refuses fields without a mixing certificate.
enum class LimitPolicy {
    automatic,
    ergodic_product,
    staircase_rational,
    staircase_irrational,
    m2_mixture,
    none,
};

/// A parsed, validated experiment configuration.
struct ExperimentConfig {
    nlohmann::json raw;
    std::string kind;

    std::optional<Slope> slope;
    std::optional<Coupling> coupling;
    std::optional<FieldGenerator> field;  // carries the master seed
    std::optional<WindowObservable> observable;
    ShiftBasis basis{};

    std::vector<CirclePoint> t_points;   // single t or a grid
    bool grid_breakpoint_avoiding = false;
    std::vector<std::uint64_t> checkpoints;
    std::vector<std::uint64_t> seeds;
    double tolerance = 0.01;
    std::int64_t c2_threshold = 0;
    LimitPolicy limit_policy = LimitPolicy::automatic;

    // check-growth
    std::vector<std::uint64_t> growth_n;
    std::vector<std::uint64_t> growth_m;

    // mixing
    std::optional<CylinderEvent> event_a;
    std::optional<CylinderEvent> event_b;
    std::vector<Vec2> shifts;
    std::uint64_t mixing_samples = 0;  // 0 = exact enumeration

    // equicontinuity
    std::vector<double> deltas;
    std::vector<std::uint64_t> n_list;

    // sweep
    std::string sweep_axis;              // "lambda" | "t" | "m", empty = none
    std::vector<nlohmann::json> sweep_values;

    std::string out_path;
};

/// Parses and validates a config document; throws config_error with a
/// field-level message on any problem.
ExperimentConfig parse_config(const nlohmann::json& doc);

nlohmann::json load_config_file(const std::string& path);

/// Digest of the semantically meaningful fields (everything except "out"),
/// stable under re-serialization of the same document.
std::string config_digest(const nlohmann::json& doc);

/// Canonical one-line form used in output headers.
std::string canonical_config(const nlohmann::json& doc);

Slope parse_slope(const nlohmann::json& v);

}  // namespace skewlab::cli
