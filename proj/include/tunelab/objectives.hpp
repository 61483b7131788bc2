#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "tunelab/space.hpp"

namespace tunelab {

/// Ackley function, any dimension >= 1. Global minimum 0 at the origin.
double ackley(const Eigen::Ref<const Eigen::ArrayXd>& x);

/// Two-variable Eggholder function.
double eggholder2(double x, double y);

/// Eggholder extended to n >= 2 variables as the sum of the two-variable
/// form over consecutive coordinate pairs. Throws for n < 2.
double eggholder_nd(const Eigen::Ref<const Eigen::ArrayXd>& x);

enum class SurrogateKind { ackley, eggholder, table };

/// Marks some index vectors infeasible; their fitness is raised by a fixed
/// positive magnitude so minimizers drift back into the feasible region.
struct PenaltyRule {
    double magnitude = 0.0;
    std::unordered_set<std::uint64_t> infeasible;  // linear_index() keys
};

/// A discrete objective: a value space plus either an analytic benchmark
/// evaluated at decoded values or an explicit fitness table.
class ObjectiveSpec {
public:
    static ObjectiveSpec ackley_surrogate(DiscreteSpace space);
    static ObjectiveSpec eggholder_surrogate(DiscreteSpace space);
    static ObjectiveSpec table_surrogate(DiscreteSpace space,
                                         std::unordered_map<std::uint64_t, double> table);

    SurrogateKind kind() const noexcept { return kind_; }
    const DiscreteSpace& space() const noexcept { return space_; }
    const std::unordered_map<std::uint64_t, double>& table() const noexcept { return table_; }
    const std::optional<PenaltyRule>& penalty() const noexcept { return penalty_; }

    /// Attach a penalty rule; magnitude must be positive.
    void set_penalty(PenaltyRule rule);

private:
    ObjectiveSpec(SurrogateKind kind, DiscreteSpace space,
                  std::unordered_map<std::uint64_t, double> table);

    SurrogateKind kind_;
    DiscreteSpace space_;
    std::unordered_map<std::uint64_t, double> table_;
    std::optional<PenaltyRule> penalty_;
};

struct Evaluation {
    double fitness = 0.0;
    bool feasible = true;
};

/// Fitness of one index vector, penalty applied when the vector is marked
/// infeasible. Throws std::invalid_argument for out-of-range indices or a
/// table vector with no entry.
Evaluation evaluate(const ObjectiveSpec& spec, const IndexVector& iv);

/// Reused buffers for the optimizer inner loop.
struct EvalScratch {
    IndexVector indices;
    Eigen::ArrayXd values;
};

/// snap + evaluate without allocating. Returns the penalized fitness and
/// leaves the snapped indices in scratch.indices.
double fitness_of(const ObjectiveSpec& spec, const Genotype& g, EvalScratch& scratch);

/// Parse a fitness table from CSV with header i1,...,ik,fitness. Row order is
/// free; missing rows are allowed here and only fail at evaluation time.
/// Errors (bad header, malformed row, duplicate, out-of-range index) carry
/// 1-based line numbers. Without an explicit space the per-variable grid
/// sizes are inferred as max index + 1 and values default to 0..m-1.
ObjectiveSpec load_table(const std::filesystem::path& path);
ObjectiveSpec load_table(const std::filesystem::path& path, const DiscreteSpace& space);

/// Write the table entries in linear-index order, round-trip safe.
void save_table(const ObjectiveSpec& spec, const std::filesystem::path& path);

struct OracleResult {
    IndexVector minimizer;
    double minimum = 0.0;
    std::uint64_t cardinality = 0;
    double wall_seconds = 0.0;
};

/// Exhaustive scan of the whole space. Ties keep the lexicographically
/// smallest index vector. Refuses spaces larger than limit.
OracleResult brute_force_optimum(const ObjectiveSpec& spec, std::uint64_t limit = 10'000'000);

}  // namespace tunelab
