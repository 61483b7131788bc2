#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tunelab/objectives.hpp"
#include "tunelab/rng.hpp"
#include "tunelab/space.hpp"

namespace tunelab {

enum class Method { ga_elitist, ga_ypea, pso, bbo };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

/// Parent-selection schemes of the elitist GA.
enum class SelFn { stochunif, remainder, uniform, roulette, tournament };

/// Crossover schemes of the elitist GA.
enum class CrossFn { scattered, intermediate, heuristic, singlepoint, twopoints, arithmetic };

std::string sel_fn_name(SelFn fn);
SelFn sel_fn_from_name(const std::string& name);
std::string cross_fn_name(CrossFn fn);
CrossFn cross_fn_from_name(const std::string& name);

/// Generational GA with an elite carried over unchanged; the remaining slots
/// are filled by crossover and Gaussian-mutation children.
struct GaElitistConfig {
    int pop_size = 100;
    double e_count_fract = 0.05;
    double cross_fract = 0.8;
    SelFn sel_fn = SelFn::stochunif;
    CrossFn cross_fn = CrossFn::scattered;
};

/// Generational GA with blend crossover, per-gene mutation of a fixed gene
/// fraction and Boltzmann-style parent weighting on normalized cost.
struct GaYpeaConfig {
    int pop_size = 100;
    double cross_prob = 0.7;
    double cross_infl = 0.1;
    double mut_rate = 0.2;
    double mut_step_size = 0.1;
    double sel_press = 5.0;
};

/// Particle swarm with adaptive inertia and growing random neighborhoods.
struct PsoConfig {
    int swarm_size = 100;
    double min_fract_neigh = 0.25;
    double self_adj = 1.49;
    double social_adj = 1.49;
};

/// Biogeography-based optimization: rank-driven migration plus Gaussian
/// mutation with a per-iteration step-size damping factor.
struct BboConfig {
    int pop_size = 100;
    double alpha = 0.9;
    double mut_prob = 0.4;
    double mut_step_size = 0.05;
    double mut_step_size_damp = 1.0;
    double keep_rate = 0.2;  ///< elite fraction, fixed rather than tuned
};

using OptimizerConfig = std::variant<GaElitistConfig, GaYpeaConfig, PsoConfig, BboConfig>;

Method method_of(const OptimizerConfig& config);

/// Throws std::invalid_argument when a field is outside its legal range.
void validate_config(const OptimizerConfig& config);

/// One optimization run. best(t) is the best fitness seen in evaluations up
/// to and including iteration t; best(0) covers the initial population.
struct RunTrace {
    Eigen::ArrayXd best;        ///< budget + 1 entries, non-increasing
    IndexVector best_solution;  ///< snapped solution behind best(budget)
    std::uint64_t evaluations = 0;
};

/// Counts evaluations and tracks the best snapped solution of one run.
class ObjectiveProbe {
public:
    explicit ObjectiveProbe(const ObjectiveSpec& spec) : spec_(&spec) {}

    double operator()(const Genotype& g) {
        const double f = fitness_of(*spec_, g, scratch_);
        ++evaluations_;
        if (evaluations_ == 1 || f < best_fitness_) {
            best_fitness_ = f;
            best_solution_ = scratch_.indices;
        }
        return f;
    }

    std::uint64_t evaluations() const noexcept { return evaluations_; }
    double best_fitness() const noexcept { return best_fitness_; }
    const IndexVector& best_solution() const noexcept { return best_solution_; }

private:
    const ObjectiveSpec* spec_;
    EvalScratch scratch_;
    std::uint64_t evaluations_ = 0;
    double best_fitness_ = 0.0;
    IndexVector best_solution_;
};

/// Run one configured optimizer for `budget` iterations from a seeded stream.
/// Same (config, objective, budget, seed) always reproduces the same trace.
RunTrace run(const OptimizerConfig& config, const ObjectiveSpec& spec, int budget,
             std::uint64_t seed);

/// Exact number of objective evaluations run() will spend.
std::uint64_t expected_evaluations(const OptimizerConfig& config, int budget);

struct Individual {
    Genotype genotype;
    double fitness = 0.0;
};

// Operator-level pieces, exposed so their algebra can be checked in isolation.

struct GaElitistCounts {
    int elite = 0;
    int crossover = 0;  ///< children produced by crossover
    int mutants = 0;
};

/// Elite / crossover / mutant child counts; rounds half away from zero and
/// assigns the remainder to mutation.
GaElitistCounts ga_elitist_counts(int pop_size, double e_count_fract, double cross_fract);

/// Rank-based expectation 1 / sqrt(position) over ascending fitness,
/// positions 1-based; tied fitness values share the mean expectation of the
/// positions they occupy, so equal inputs get equal weights.
std::vector<double> rank_expectations(std::span<const double> fitness);

/// `count` parent indices under the given scheme. Layout-based schemes
/// (stochunif, remainder) shuffle their output so slot order is unbiased.
std::vector<int> select_parents(std::span<const double> fitness, SelFn fn, int count,
                                Xoshiro256& rng);

/// One child genotype from two parents under the given scheme.
Genotype ga_crossover(const Individual& p1, const Individual& p2, CrossFn fn, Xoshiro256& rng);

/// Mutation scale as a fraction of each variable's index range: anneals
/// linearly from 0.1 at the start to 0.01 at the final iteration.
double ga_mutation_scale(int iteration, int budget);

/// exp(-sel_press * normalized cost); all weights 1 when costs are equal.
std::vector<double> ypea_selection_weights(std::span<const double> costs, double sel_press);

/// Per-gene blend coefficients alpha_j drawn uniformly from
/// [-cross_infl, 1 + cross_infl].
Eigen::ArrayXd ypea_crossover_alpha(int n, double cross_infl, Xoshiro256& rng);

/// Symmetric blend children: y1 = a*x1 + (1-a)*x2 and y2 with roles swapped.
std::pair<Genotype, Genotype> ypea_blend(const Genotype& x1, const Genotype& x2,
                                         const Eigen::ArrayXd& alpha);

/// max(1, floor(swarm_size * min_fract_neigh)).
int initial_neighborhood_size(int swarm_size, double min_fract_neigh);

/// Velocity update w*v + c1*u1.*(pbest - x) + c2*u2.*(gbest - x).
Eigen::ArrayXd pso_velocity(const Eigen::ArrayXd& v, const Genotype& x, const Genotype& pbest,
                            const Genotype& gbest, double w, double c1, double c2,
                            const Eigen::ArrayXd& u1, const Eigen::ArrayXd& u2);

/// Rank-based immigration and emigration rates: lambda_i = i / (pop + 1) for
/// rank i starting at 1 (best), mu_i = 1 - lambda_i.
std::pair<Eigen::ArrayXd, Eigen::ArrayXd> bbo_rates(int pop_size);

/// Blend step of one migrated gene, (1 - alpha) * current + alpha * source:
/// alpha 0 keeps the current value exactly, alpha 1 adopts the source exactly.
double migrate_species(double current, double source, double alpha);

/// Mutation scale fraction at a 1-based iteration: the first iteration is
/// undamped, every following iteration multiplies by the damp factor.
double bbo_sigma_scale(double mut_step_size, double damp, int iteration);

}  // namespace tunelab
