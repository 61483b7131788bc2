#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tunelab/objectives.hpp"
#include "tunelab/optimizers.hpp"
#include "tunelab/tuner.hpp"

namespace tunelab {

/// Bad user input: malformed config, unknown keys, out-of-range values.
/// The CLI maps this to exit code 1; other failures exit with 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parsed campaign file: the problem plus assessment settings and the
/// requested work items.
struct CampaignConfig {
    explicit CampaignConfig(ObjectiveSpec problem_spec) : problem(std::move(problem_spec)) {}

    ObjectiveSpec problem;
    int budget = 140;
    int runs = 20;
    int intervals = 14;
    double zl = 4.0;
    std::uint64_t master_seed = 1;
    int workers = 1;
    int strategy = 1;
    int validation_runs = 50;
    double success_tol = 1e-9;
    std::uint64_t oracle_limit = 10'000'000;
    bool auto_oracle = false;  ///< solve the space exhaustively for validation reference
    std::filesystem::path out_dir = ".";
    std::optional<OptimizerConfig> run_config;
    std::vector<ParameterGrid> tune_grids;
};

/// Load and validate a campaign JSON file. Unknown keys are errors; a table
/// path is resolved relative to the config file.
CampaignConfig load_campaign(const std::filesystem::path& config_path);

/// Replace content atomically (temp file + rename), creating directories.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Assess the configured method over `runs` seeded runs; writes
/// run_trace.csv, run_report.json and run_apc.svg into the output directory.
void cmd_run(const CampaignConfig& campaign);

/// Tune every grid in the campaign; per method writes <method>_report.json,
/// <method>_report.csv, <method>_fc_box.svg and <method>_best_apc.svg.
void cmd_tune(const CampaignConfig& campaign);

/// Exhaustive optimum of the problem; writes oracle.json.
void cmd_oracle(const CampaignConfig& campaign);

/// Cross-method charts from previously written tuning reports:
/// compare_fc_box.svg, compare_apc.svg and one <method>_influence.svg per
/// method. Renders stored numbers only, never recomputes.
void cmd_report(const CampaignConfig& campaign);

}  // namespace tunelab
