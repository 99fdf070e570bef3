#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "skewlab/cli/config.hpp"

namespace skewlab::cli {

/// One output row. Fields not meaningful for the experiment kind stay empty.
struct Row {
    std::optional<std::uint64_t> n;
    std::optional<std::size_t> t_index;
    std::optional<double> t;
    std::optional<std::size_t> seed_index;
    std::optional<std::uint64_t> seed;
    std::optional<double> value;
    std::string exact;
    std::optional<double> limit;
    std::string limit_exact;
    std::optional<double> error;
    std::string formula;
    std::optional<double> std_error;
    std::string label;
};

struct RunResult {
    std::vector<Row> rows;
    std::string report;
    int exit_code = 0;
};

/// Exit codes shared with the CLI:
///   0 pass, 1 verification failure, 2 configuration error (also "not
///   verifiable"), 3 budget exceeded.
RunResult run_experiment(const ExperimentConfig& cfg, unsigned threads);
RunResult run_sweep(const ExperimentConfig& cfg, unsigned threads);
RunResult run_verify(const ExperimentConfig& cfg, unsigned threads,
                     std::optional<double> tolerance_override = std::nullopt);

/// CSV with a '#'-prefixed header block (tool version, schema, digest,
/// timestamp, resolved config) followed by the data table. The timestamp is
/// the only non-deterministic byte range and is isolated to its header line.
std::string render_csv(const nlohmann::json& raw_config, const std::vector<Row>& rows);

}  // namespace skewlab::cli
