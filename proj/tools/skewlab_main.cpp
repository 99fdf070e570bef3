// skewlab — command-line experiment runner for skew-product ergodic
// averages over lattice random fields.
//
// Subcommands: run, sweep, verify, limits, check. Exit codes: 0 pass,
// 1 verification failure, 2 configuration error, 3 budget exceeded.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "skewlab/cli/config.hpp"
#include "skewlab/cli/runner.hpp"
#include "skewlab/errors.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    unsigned threads = 1;
    std::optional<double> tolerance;
};

void add_common(CLI::App* sub, CommonOpts& opts) {
    sub->add_option("--config", opts.config_path, "experiment config (JSON)")->required();
    sub->add_option("--out", opts.out_path, "output CSV path (default: config's out, else stdout)");
    sub->add_option("--seed", opts.seed, "override the master seed");
    sub->add_option("--threads", opts.threads, "worker threads (must not change results)")
        ->default_val(1u);
    sub->add_option("--tolerance", opts.tolerance, "override the tolerance policy");
}

nlohmann::json load_with_overrides(const CommonOpts& opts) {
    nlohmann::json doc = skewlab::cli::load_config_file(opts.config_path);
    if (opts.seed) {
        std::uint64_t reps = 1;
        if (doc.contains("seeds")) {
            if (doc["seeds"].is_object())
                reps = doc["seeds"].value("replicates", 1u);
            else if (doc["seeds"].is_array())
                reps = doc["seeds"].size();
        }
        doc["seeds"] = {{"master", *opts.seed}, {"replicates", reps}};
    }
    if (opts.tolerance) doc["tolerance"] = *opts.tolerance;
    if (!opts.out_path.empty()) doc["out"] = opts.out_path;
    return doc;
}

int emit(const nlohmann::json& doc, const skewlab::cli::RunResult& result) {
    std::string csv = skewlab::cli::render_csv(doc, result.rows);
    std::string out = doc.value("out", "");
    if (out.empty()) {
        std::cout << csv;
    } else {
        std::ofstream f(out, std::ios::binary);
        if (!f) {
            std::cerr << "error: cannot write '" << out << "'\n";
            return 2;
        }
        f << csv;
    }
    if (!result.report.empty()) std::cerr << result.report;
    return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"skewlab: skew-product ergodic average toolkit"};
    app.require_subcommand(1);

    CommonOpts opts;
    CLI::App* cmd_run = app.add_subcommand("run", "run the experiment named by the config");
    CLI::App* cmd_sweep = app.add_subcommand("sweep", "run the config once per sweep-axis value");
    CLI::App* cmd_verify =
        app.add_subcommand("verify", "compare terminal errors against the tolerance policy");
    CLI::App* cmd_limits = app.add_subcommand("limits", "evaluate the closed-form limits");
    CLI::App* cmd_check =
        app.add_subcommand("check", "run a hypothesis check (check-growth, check-c2, mixing)");
    for (CLI::App* sub : {cmd_run, cmd_sweep, cmd_verify, cmd_limits, cmd_check})
        add_common(sub, opts);

    CLI11_PARSE(app, argc, argv);

    try {
        nlohmann::json doc = load_with_overrides(opts);
        skewlab::cli::ExperimentConfig cfg = skewlab::cli::parse_config(doc);

        if (cmd_limits->parsed() && cfg.kind != "limits")
            throw skewlab::config_error("limits: config kind must be 'limits'");
        if (cmd_check->parsed() && cfg.kind != "check-growth" && cfg.kind != "check-c2" &&
            cfg.kind != "mixing")
            throw skewlab::config_error("check: config kind must be check-growth, check-c2, or mixing");

        skewlab::cli::RunResult result;
        if (cmd_sweep->parsed())
            result = skewlab::cli::run_sweep(cfg, opts.threads);
        else if (cmd_verify->parsed())
            result = skewlab::cli::run_verify(cfg, opts.threads, opts.tolerance);
        else
            result = skewlab::cli::run_experiment(cfg, opts.threads);
        return emit(doc, result);
    } catch (const skewlab::budget_error& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return 3;
    } catch (const skewlab::config_error& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
