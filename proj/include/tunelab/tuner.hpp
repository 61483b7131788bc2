#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tunelab/metrics.hpp"
#include "tunelab/objectives.hpp"
#include "tunelab/optimizers.hpp"

namespace tunelab {

/// One grid axis: a named optimizer parameter and its candidate values.
using ParamValue = std::variant<double, std::string>;

std::string param_value_text(const ParamValue& v);
bool param_value_equal(const ParamValue& a, const ParamValue& b);

struct GridParameter {
    std::string name;
    std::vector<ParamValue> values;
};

/// Cartesian parameter grid of one optimizer.
struct ParameterGrid {
    Method method = Method::ga_elitist;
    std::vector<GridParameter> parameters;
};

/// Number of configurations in the grid.
std::uint64_t grid_size(const ParameterGrid& grid);

/// Mixed-radix decode of a configuration index; the last parameter varies
/// fastest. Values are returned in grid parameter order.
std::vector<ParamValue> assignment_at(const ParameterGrid& grid, std::uint64_t index);

/// Concrete optimizer config at a grid index.
OptimizerConfig config_at(const ParameterGrid& grid, std::uint64_t index);

/// Build a config from named parameter values; unnamed fields keep their
/// defaults, unknown names throw.
OptimizerConfig make_config(Method method,
                            std::span<const std::pair<std::string, ParamValue>> params);

/// Named parameter values of a config, in canonical order.
std::vector<std::pair<std::string, ParamValue>> config_params(const OptimizerConfig& config);

/// Full stock grid of a method (the complete factory sweep).
ParameterGrid stock_grid(Method method);

/// Thinned stock grid: every other value per axis, for cheap sweeps.
ParameterGrid quick_grid(Method method);

/// Population-size axes are never fixed by the two-phase reduction.
bool is_population_parameter(std::string_view name);

/// Shared settings of every grid assessment.
struct AssessmentParams {
    int n_runs = 20;
    int budget = 140;
    int intervals = 14;
    double zl = 4.0;
    std::uint64_t master_seed = 1;
    int workers = 1;
};

/// Outcome of assessing one configuration over n_runs seeded runs.
struct ConfigResult {
    std::uint64_t config_index = 0;
    OptimizerConfig config;
    Apc apc;
    UtilityReport utility;
    std::vector<double> finals;        ///< per-run final best fitness, run order
    std::vector<std::uint64_t> seeds;  ///< per-run seeds, run order
};

/// Assess every configuration of a grid. Runs are seeded from
/// (master_seed, phase, config_index, run_index), so results do not depend on
/// the worker count; aggregation folds run results in index order. The run
/// counter, when given, grows by grid_size * n_runs.
std::vector<ConfigResult> assess_grid(const ParameterGrid& grid, const ObjectiveSpec& spec,
                                      const AssessmentParams& params, std::uint64_t phase,
                                      std::uint64_t* runs_executed = nullptr);

/// Per-value mean utility of one parameter across a phase's results.
struct ParamInfluence {
    std::string name;
    double influence = 0.0;  ///< spread: worst group mean minus best group mean
    std::vector<std::pair<ParamValue, double>> group_means;
};

std::vector<ParamInfluence> influences(const ParameterGrid& grid,
                                       std::span<const ConfigResult> results);

/// A parameter pinned to its best-scoring value.
struct FixDecision {
    std::string name;
    ParamValue value;
    double influence = 0.0;
};

/// Pin the most influential non-population parameters (at most max_fixes,
/// only those with more than one candidate) to their best group-mean value.
std::vector<FixDecision> decide_fixes(const ParameterGrid& grid,
                                      std::span<const ConfigResult> results, int max_fixes = 2);

ParameterGrid apply_fixes(const ParameterGrid& grid, std::span<const FixDecision> fixes);

/// Values discarded from one parameter after a phase.
struct DropDecision {
    std::string name;
    std::vector<ParamValue> kept;
    std::vector<ParamValue> dropped;
};

/// Drop values whose group mean lies above
/// best + keep_span * (worst - best); the best two values of each parameter
/// always survive. Population axes participate here.
std::vector<DropDecision> decide_drops(const ParameterGrid& grid,
                                       std::span<const ConfigResult> results,
                                       double keep_span = 0.25);

ParameterGrid apply_drops(const ParameterGrid& grid, std::span<const DropDecision> drops);

/// Seed-stream phase used for final validation runs.
inline constexpr std::uint64_t kValidationPhase = 3;

/// Repeated runs of one chosen config on fresh seeds.
struct ValidationReport {
    int n_runs = 0;
    std::vector<double> finals;
    FiveNumber summary;
    Apc apc;
    double fc = 0.0;
    double success_tol = 0.0;
    std::optional<double> optimum;       ///< reference minimum when known
    std::optional<double> success_rate;  ///< fraction of runs within tol of optimum
};

ValidationReport validate(const OptimizerConfig& config, const ObjectiveSpec& spec,
                          const AssessmentParams& params, int n_runs, double success_tol,
                          std::optional<double> optimum);

/// One assessment sweep plus the decisions taken after it.
struct PhaseReport {
    int phase = 0;
    ParameterGrid grid;
    std::vector<ConfigResult> results;
    std::vector<ParamInfluence> influence;
    std::vector<FixDecision> fixes;  ///< applied after this phase
    std::vector<DropDecision> drops;
};

struct TuneOptions {
    int strategy = 1;  ///< 1 = single sweep, 2 = sweep + fix + drop
    AssessmentParams assessment;
    int validation_runs = 50;  ///< 0 skips validation
    double success_tol = 1e-9;
    std::optional<double> optimum;
};

struct TuningReport {
    Method method = Method::ga_elitist;
    int strategy = 1;
    AssessmentParams assessment;
    std::vector<PhaseReport> phases;
    int best_phase = 0;
    std::uint64_t best_config_index = 0;
    OptimizerConfig best_config;
    double best_fc = 0.0;
    std::optional<ValidationReport> validation;
    std::uint64_t runs_executed = 0;
};

/// Strategy 1: assess the full grid once; the winner is the lowest utility,
/// ties broken by the lower configuration index.
/// Strategy 2: assess, pin the two most influential non-population
/// parameters, reassess on a fresh seed stream, drop clearly bad values,
/// and reassess once more. Every phase spends new runs even when a decision
/// left the grid unchanged, so apparent optima may move between phases.
/// Postconditions checked internally: the seed multiset across all phases
/// and validation has no duplicates, and the run counter equals
/// sum over phases of |grid| * n_runs plus validation runs.
TuningReport tune(const ParameterGrid& grid, const ObjectiveSpec& spec, const TuneOptions& options);

}  // namespace tunelab
