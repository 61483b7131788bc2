#include "tunelab/optimizers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace tunelab {

std::string method_name(Method m) {
    switch (m) {
        case Method::ga_elitist: return "ga_elitist";
        case Method::ga_ypea: return "ga_ypea";
        case Method::pso: return "pso";
        case Method::bbo: return "bbo";
    }
    throw std::logic_error("unknown method");
}

Method method_from_name(const std::string& name) {
    if (name == "ga_elitist") return Method::ga_elitist;
    if (name == "ga_ypea") return Method::ga_ypea;
    if (name == "pso") return Method::pso;
    if (name == "bbo") return Method::bbo;
    throw std::invalid_argument("unknown method '" + name + "'");
}

std::string sel_fn_name(SelFn fn) {
    switch (fn) {
        case SelFn::stochunif: return "stochunif";
        case SelFn::remainder: return "remainder";
        case SelFn::uniform: return "uniform";
        case SelFn::roulette: return "roulette";
        case SelFn::tournament: return "tournament";
    }
    throw std::logic_error("unknown selection function");
}

SelFn sel_fn_from_name(const std::string& name) {
    if (name == "stochunif") return SelFn::stochunif;
    if (name == "remainder") return SelFn::remainder;
    if (name == "uniform") return SelFn::uniform;
    if (name == "roulette") return SelFn::roulette;
    if (name == "tournament") return SelFn::tournament;
    throw std::invalid_argument("unknown selection function '" + name + "'");
}

std::string cross_fn_name(CrossFn fn) {
    switch (fn) {
        case CrossFn::scattered: return "scattered";
        case CrossFn::intermediate: return "intermediate";
        case CrossFn::heuristic: return "heuristic";
        case CrossFn::singlepoint: return "singlepoint";
        case CrossFn::twopoints: return "twopoints";
        case CrossFn::arithmetic: return "arithmetic";
    }
    throw std::logic_error("unknown crossover function");
}

CrossFn cross_fn_from_name(const std::string& name) {
    if (name == "scattered") return CrossFn::scattered;
    if (name == "intermediate") return CrossFn::intermediate;
    if (name == "heuristic") return CrossFn::heuristic;
    if (name == "singlepoint") return CrossFn::singlepoint;
    if (name == "twopoints") return CrossFn::twopoints;
    if (name == "arithmetic") return CrossFn::arithmetic;
    throw std::invalid_argument("unknown crossover function '" + name + "'");
}

Method method_of(const OptimizerConfig& config) {
    return std::visit(
        [](const auto& cfg) {
            using T = std::decay_t<decltype(cfg)>;
            if constexpr (std::is_same_v<T, GaElitistConfig>) return Method::ga_elitist;
            if constexpr (std::is_same_v<T, GaYpeaConfig>) return Method::ga_ypea;
            if constexpr (std::is_same_v<T, PsoConfig>) return Method::pso;
            if constexpr (std::is_same_v<T, BboConfig>) return Method::bbo;
        },
        config);
}

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

}  // namespace

GaElitistCounts ga_elitist_counts(int pop_size, double e_count_fract, double cross_fract) {
    require(pop_size >= 2, "PopSize must be >= 2");
    require(e_count_fract >= 0.0 && e_count_fract <= 1.0, "ECountFract must be in [0, 1]");
    require(cross_fract >= 0.0 && cross_fract <= 1.0, "CrossFract must be in [0, 1]");
    GaElitistCounts c;
    c.elite = static_cast<int>(std::llround(e_count_fract * pop_size));
    require(c.elite < pop_size, "ECountFract leaves no room for children");
    c.crossover = static_cast<int>(std::llround(cross_fract * (pop_size - c.elite)));
    c.mutants = pop_size - c.elite - c.crossover;
    return c;
}

void validate_config(const OptimizerConfig& config) {
    std::visit(
        [](const auto& cfg) {
            using T = std::decay_t<decltype(cfg)>;
            if constexpr (std::is_same_v<T, GaElitistConfig>) {
                ga_elitist_counts(cfg.pop_size, cfg.e_count_fract, cfg.cross_fract);
            } else if constexpr (std::is_same_v<T, GaYpeaConfig>) {
                require(cfg.pop_size >= 2, "PopSize must be >= 2");
                require(cfg.cross_prob >= 0.0 && cfg.cross_prob <= 1.0,
                        "CrossProb must be in [0, 1]");
                require(cfg.cross_infl >= 0.0, "CrossInfl must be >= 0");
                require(cfg.mut_rate >= 0.0 && cfg.mut_rate <= 1.0, "MutRate must be in [0, 1]");
                require(cfg.mut_step_size > 0.0, "MutStepSize must be positive");
                require(cfg.sel_press >= 0.0, "SelPress must be >= 0");
            } else if constexpr (std::is_same_v<T, PsoConfig>) {
                require(cfg.swarm_size >= 2, "SwarmSize must be >= 2");
                require(cfg.min_fract_neigh > 0.0 && cfg.min_fract_neigh <= 1.0,
                        "MinFractNeigh must be in (0, 1]");
                require(cfg.self_adj >= 0.0, "SelfAdj must be >= 0");
                require(cfg.social_adj >= 0.0, "SocialAdj must be >= 0");
            } else if constexpr (std::is_same_v<T, BboConfig>) {
                require(cfg.pop_size >= 2, "PopSize must be >= 2");
                require(cfg.alpha > 0.0 && cfg.alpha <= 1.0, "Alpha must be in (0, 1]");
                require(cfg.mut_prob >= 0.0 && cfg.mut_prob <= 1.0, "MutProb must be in [0, 1]");
                require(cfg.mut_step_size > 0.0, "MutStepSize must be positive");
                require(cfg.mut_step_size_damp > 0.0, "MutStepSizeDamp must be positive");
                require(cfg.keep_rate >= 0.0 && cfg.keep_rate <= 1.0, "KeepRate must be in [0, 1]");
            }
        },
        config);
}

std::vector<double> rank_expectations(std::span<const double> fitness) {
    const int n = static_cast<int>(fitness.size());
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (fitness[static_cast<std::size_t>(a)] != fitness[static_cast<std::size_t>(b)])
            return fitness[static_cast<std::size_t>(a)] < fitness[static_cast<std::size_t>(b)];
        return a < b;
    });
    std::vector<double> expectation(static_cast<std::size_t>(n), 0.0);
    int pos = 0;
    while (pos < n) {
        int end = pos + 1;
        while (end < n && fitness[static_cast<std::size_t>(order[static_cast<std::size_t>(end)])] ==
                              fitness[static_cast<std::size_t>(order[static_cast<std::size_t>(pos)])])
            ++end;
        double mean = 0.0;  // tied block shares the mean of its positional weights
        for (int p = pos; p < end; ++p) mean += 1.0 / std::sqrt(static_cast<double>(p + 1));
        mean /= static_cast<double>(end - pos);
        for (int p = pos; p < end; ++p)
            expectation[static_cast<std::size_t>(order[static_cast<std::size_t>(p)])] = mean;
        pos = end;
    }
    return expectation;
}

namespace {

/// Prefix-sum wheel; draws cost one uniform and a binary search.
class Wheel {
public:
    void build(std::span<const double> weights) {
        prefix_.resize(weights.size());
        double acc = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            acc += weights[i];
            prefix_[i] = acc;
        }
    }

    double total() const { return prefix_.empty() ? 0.0 : prefix_.back(); }

    int draw(Xoshiro256& rng) const {
        const double u = rng.uniform01() * total();
        const auto it = std::upper_bound(prefix_.begin(), prefix_.end(), u);
        if (it == prefix_.end()) return static_cast<int>(prefix_.size()) - 1;
        return static_cast<int>(it - prefix_.begin());
    }

    /// Draw over all slots except `skip` whose weight is `weight_skip`.
    int draw_excluding(int skip, double weight_skip, Xoshiro256& rng) const {
        const double before = prefix_[static_cast<std::size_t>(skip)] - weight_skip;
        double u = rng.uniform01() * (total() - weight_skip);
        if (u >= before) u += weight_skip;  // shift past the skipped slot
        const auto it = std::upper_bound(prefix_.begin(), prefix_.end(), u);
        int idx = it == prefix_.end() ? static_cast<int>(prefix_.size()) - 1
                                      : static_cast<int>(it - prefix_.begin());
        if (idx == skip) idx = skip + 1 < static_cast<int>(prefix_.size()) ? skip + 1 : skip - 1;
        return idx;
    }

private:
    std::vector<double> prefix_;
};

}  // namespace

std::vector<int> select_parents(std::span<const double> fitness, SelFn fn, int count,
                                Xoshiro256& rng) {
    const int n = static_cast<int>(fitness.size());
    require(n >= 1, "selection needs a non-empty population");
    require(count >= 0, "selection count must be >= 0");
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(count));

    switch (fn) {
        case SelFn::uniform: {
            for (int k = 0; k < count; ++k) out.push_back(rng.below(n));
            return out;
        }
        case SelFn::tournament: {
            const int size = std::min(4, n);
            std::vector<int> picks;
            for (int k = 0; k < count; ++k) {
                sample_distinct(n, size, rng, picks);
                int winner = picks[0];
                for (int r = 1; r < size; ++r) {
                    if (fitness[static_cast<std::size_t>(picks[static_cast<std::size_t>(r)])] <
                        fitness[static_cast<std::size_t>(winner)])
                        winner = picks[static_cast<std::size_t>(r)];
                }
                out.push_back(winner);
            }
            return out;
        }
        case SelFn::roulette: {
            const std::vector<double> e = rank_expectations(fitness);
            Wheel wheel;
            wheel.build(e);
            for (int k = 0; k < count; ++k) out.push_back(wheel.draw(rng));
            return out;
        }
        case SelFn::stochunif: {
            const std::vector<double> e = rank_expectations(fitness);
            const double total = std::accumulate(e.begin(), e.end(), 0.0);
            // quotas sum to count; equally spaced pointers with one random phase
            const double start = rng.uniform01();
            int idx = 0;
            double acc = e[0] * static_cast<double>(count) / total;
            for (int k = 0; k < count; ++k) {
                const double pointer = start + static_cast<double>(k);
                while (acc <= pointer && idx + 1 < n) {
                    ++idx;
                    acc += e[static_cast<std::size_t>(idx)] * static_cast<double>(count) / total;
                }
                out.push_back(idx);
            }
            shuffle(out, rng);
            return out;
        }
        case SelFn::remainder: {
            const std::vector<double> e = rank_expectations(fitness);
            const double total = std::accumulate(e.begin(), e.end(), 0.0);
            std::vector<double> fraction(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) {
                const double quota = e[static_cast<std::size_t>(i)] * static_cast<double>(count) / total;
                const double whole = std::floor(quota);
                fraction[static_cast<std::size_t>(i)] = quota - whole;
                for (int r = 0; r < static_cast<int>(whole) && static_cast<int>(out.size()) < count;
                     ++r)
                    out.push_back(i);
            }
            while (static_cast<int>(out.size()) < count) {
                // roulette over leftover fractions, chosen slots zeroed out
                const double left = std::accumulate(fraction.begin(), fraction.end(), 0.0);
                if (left <= 0.0) {
                    out.push_back(rng.below(n));
                    continue;
                }
                const double u = rng.uniform01() * left;
                double acc = 0.0;
                int pick = n - 1;
                for (int i = 0; i < n; ++i) {
                    acc += fraction[static_cast<std::size_t>(i)];
                    if (u < acc) {
                        pick = i;
                        break;
                    }
                }
                out.push_back(pick);
                fraction[static_cast<std::size_t>(pick)] = 0.0;
            }
            shuffle(out, rng);
            return out;
        }
    }
    throw std::logic_error("unknown selection function");
}

Genotype ga_crossover(const Individual& p1, const Individual& p2, CrossFn fn, Xoshiro256& rng) {
    const Eigen::Index n = p1.genotype.size();
    require(p2.genotype.size() == n, "crossover parents differ in dimension");
    Genotype child(n);
    switch (fn) {
        case CrossFn::scattered: {
            for (Eigen::Index j = 0; j < n; ++j)
                child(j) = rng.uniform01() < 0.5 ? p1.genotype(j) : p2.genotype(j);
            return child;
        }
        case CrossFn::intermediate: {
            for (Eigen::Index j = 0; j < n; ++j) {
                const double u = rng.uniform01();
                child(j) = p1.genotype(j) + u * (p2.genotype(j) - p1.genotype(j));
            }
            return child;
        }
        case CrossFn::heuristic: {
            // step of 1.2 from the worse parent through and past the better
            const bool first_better = p1.fitness <= p2.fitness;
            const Genotype& better = first_better ? p1.genotype : p2.genotype;
            const Genotype& worse = first_better ? p2.genotype : p1.genotype;
            child = worse + 1.2 * (better - worse);
            return child;
        }
        case CrossFn::arithmetic: {
            child = 0.5 * (p1.genotype + p2.genotype);
            return child;
        }
        case CrossFn::singlepoint: {
            if (n < 2) {
                rng.below(1);  // keep the draw count shape-independent
                return p2.genotype;
            }
            const Eigen::Index cut = 1 + rng.below(static_cast<int>(n) - 1);
            for (Eigen::Index j = 0; j < n; ++j)
                child(j) = j < cut ? p1.genotype(j) : p2.genotype(j);
            return child;
        }
        case CrossFn::twopoints: {
            if (n < 2) {
                rng.below(1);
                rng.below(1);
                return p1.genotype;
            }
            Eigen::Index c1 = 1 + rng.below(static_cast<int>(n) - 1);
            Eigen::Index c2 = 1 + rng.below(static_cast<int>(n) - 1);
            if (c2 < c1) std::swap(c1, c2);
            for (Eigen::Index j = 0; j < n; ++j)
                child(j) = (j >= c1 && j < c2) ? p2.genotype(j) : p1.genotype(j);
            return child;
        }
    }
    throw std::logic_error("unknown crossover function");
}

double ga_mutation_scale(int iteration, int budget) {
    require(budget >= 1, "budget must be >= 1");
    const double t = static_cast<double>(iteration) / static_cast<double>(budget);
    return 0.1 + (0.01 - 0.1) * t;
}

std::vector<double> ypea_selection_weights(std::span<const double> costs, double sel_press) {
    require(!costs.empty(), "selection weights need a non-empty population");
    const auto [lo_it, hi_it] = std::minmax_element(costs.begin(), costs.end());
    const double lo = *lo_it, hi = *hi_it;
    std::vector<double> w(costs.size(), 1.0);
    if (hi > lo) {
        for (std::size_t i = 0; i < costs.size(); ++i)
            w[i] = std::exp(-sel_press * (costs[i] - lo) / (hi - lo));
    }
    return w;
}

Eigen::ArrayXd ypea_crossover_alpha(int n, double cross_infl, Xoshiro256& rng) {
    Eigen::ArrayXd alpha(n);
    for (int j = 0; j < n; ++j)
        alpha(j) = -cross_infl + (1.0 + 2.0 * cross_infl) * rng.uniform01();
    return alpha;
}

std::pair<Genotype, Genotype> ypea_blend(const Genotype& x1, const Genotype& x2,
                                         const Eigen::ArrayXd& alpha) {
    Genotype y1 = alpha * x1 + (1.0 - alpha) * x2;
    Genotype y2 = alpha * x2 + (1.0 - alpha) * x1;
    return {std::move(y1), std::move(y2)};
}

int initial_neighborhood_size(int swarm_size, double min_fract_neigh) {
    return std::max(1, static_cast<int>(std::floor(static_cast<double>(swarm_size) * min_fract_neigh)));
}

Eigen::ArrayXd pso_velocity(const Eigen::ArrayXd& v, const Genotype& x, const Genotype& pbest,
                            const Genotype& gbest, double w, double c1, double c2,
                            const Eigen::ArrayXd& u1, const Eigen::ArrayXd& u2) {
    return w * v + c1 * u1 * (pbest - x) + c2 * u2 * (gbest - x);
}

std::pair<Eigen::ArrayXd, Eigen::ArrayXd> bbo_rates(int pop_size) {
    require(pop_size >= 1, "PopSize must be >= 1");
    Eigen::ArrayXd lambda(pop_size), mu(pop_size);
    for (int i = 0; i < pop_size; ++i) {
        lambda(i) = static_cast<double>(i + 1) / static_cast<double>(pop_size + 1);
        mu(i) = 1.0 - lambda(i);
    }
    return {std::move(lambda), std::move(mu)};
}

double migrate_species(double current, double source, double alpha) {
    // Two-product form so alpha 0 and 1 return the endpoints exactly.
    return (1.0 - alpha) * current + alpha * source;
}

double bbo_sigma_scale(double mut_step_size, double damp, int iteration) {
    require(iteration >= 1, "iteration must be >= 1");
    return mut_step_size * std::pow(damp, static_cast<double>(iteration - 1));
}

namespace {

Eigen::ArrayXd index_ranges(const DiscreteSpace& space) {
    Eigen::ArrayXd r(space.n_vars());
    for (int j = 0; j < space.n_vars(); ++j) r(j) = static_cast<double>(space.grid(j).count() - 1);
    return r;
}

void init_population(std::vector<Individual>& pop, int size, const DiscreteSpace& space,
                     Xoshiro256& rng, ObjectiveProbe& probe) {
    pop.resize(static_cast<std::size_t>(size));
    for (Individual& ind : pop) {
        ind.genotype = random_genotype(space, rng);
        ind.fitness = probe(ind.genotype);
    }
}

void sort_by_fitness(std::vector<int>& order, const std::vector<Individual>& pop) {
    order.resize(pop.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return pop[static_cast<std::size_t>(a)].fitness <
                                                pop[static_cast<std::size_t>(b)].fitness; });
}

void run_ga_elitist(const GaElitistConfig& cfg, const ObjectiveSpec& spec, int budget,
                    Xoshiro256& rng, ObjectiveProbe& probe, RunTrace& trace) {
    const GaElitistCounts counts = ga_elitist_counts(cfg.pop_size, cfg.e_count_fract, cfg.cross_fract);
    const Eigen::ArrayXd range = index_ranges(spec.space());
    const int n = spec.space().n_vars();

    std::vector<Individual> pop, next;
    init_population(pop, cfg.pop_size, spec.space(), rng, probe);
    trace.best(0) = probe.best_fitness();

    std::vector<double> fitness(static_cast<std::size_t>(cfg.pop_size));
    std::vector<int> order;
    const int n_parents = 2 * counts.crossover + counts.mutants;

    for (int t = 1; t <= budget; ++t) {
        for (int i = 0; i < cfg.pop_size; ++i)
            fitness[static_cast<std::size_t>(i)] = pop[static_cast<std::size_t>(i)].fitness;
        const std::vector<int> parents = select_parents(fitness, cfg.sel_fn, n_parents, rng);

        next.clear();
        next.reserve(static_cast<std::size_t>(cfg.pop_size));
        sort_by_fitness(order, pop);
        for (int k = 0; k < counts.elite; ++k)
            next.push_back(pop[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])]);

        for (int k = 0; k < counts.crossover; ++k) {
            const Individual& p1 = pop[static_cast<std::size_t>(parents[static_cast<std::size_t>(2 * k)])];
            const Individual& p2 =
                pop[static_cast<std::size_t>(parents[static_cast<std::size_t>(2 * k + 1)])];
            Individual child;
            child.genotype = ga_crossover(p1, p2, cfg.cross_fn, rng);
            next.push_back(std::move(child));
        }
        const double scale = ga_mutation_scale(t, budget);
        for (int k = 0; k < counts.mutants; ++k) {
            const Individual& base =
                pop[static_cast<std::size_t>(parents[static_cast<std::size_t>(2 * counts.crossover + k)])];
            Individual child;
            child.genotype = base.genotype;
            for (int j = 0; j < n; ++j) child.genotype(j) += scale * range(j) * rng.normal01();
            next.push_back(std::move(child));
        }
        for (std::size_t i = static_cast<std::size_t>(counts.elite); i < next.size(); ++i)
            next[i].fitness = probe(next[i].genotype);

        pop.swap(next);
        trace.best(t) = probe.best_fitness();
    }
}

void run_ga_ypea(const GaYpeaConfig& cfg, const ObjectiveSpec& spec, int budget, Xoshiro256& rng,
                 ObjectiveProbe& probe, RunTrace& trace) {
    const Eigen::ArrayXd range = index_ranges(spec.space());
    const int n = spec.space().n_vars();
    const int pop_size = cfg.pop_size;

    std::vector<Individual> pop, next;
    init_population(pop, pop_size, spec.space(), rng, probe);
    trace.best(0) = probe.best_fitness();

    int n_cross = 2 * static_cast<int>(std::llround(cfg.cross_prob * pop_size / 2.0));
    n_cross = std::min(n_cross, pop_size - pop_size % 2);
    const int n_mut = pop_size - n_cross;
    const int genes_mutated = std::min(n, static_cast<int>(std::ceil(cfg.mut_rate * n)));

    std::vector<double> costs(static_cast<std::size_t>(pop_size));
    std::vector<int> gene_buf;
    Wheel wheel;

    for (int t = 1; t <= budget; ++t) {
        for (int i = 0; i < pop_size; ++i)
            costs[static_cast<std::size_t>(i)] = pop[static_cast<std::size_t>(i)].fitness;
        wheel.build(ypea_selection_weights(costs, cfg.sel_press));

        next.clear();
        next.reserve(static_cast<std::size_t>(pop_size));
        for (int k = 0; k < n_cross / 2; ++k) {
            const int i1 = wheel.draw(rng);
            const int i2 = wheel.draw(rng);
            const Eigen::ArrayXd alpha = ypea_crossover_alpha(n, cfg.cross_infl, rng);
            auto [y1, y2] = ypea_blend(pop[static_cast<std::size_t>(i1)].genotype,
                                       pop[static_cast<std::size_t>(i2)].genotype, alpha);
            next.push_back({std::move(y1), 0.0});
            next.push_back({std::move(y2), 0.0});
        }
        for (int k = 0; k < n_mut; ++k) {
            const int i = wheel.draw(rng);
            Individual child;
            child.genotype = pop[static_cast<std::size_t>(i)].genotype;
            sample_distinct(n, genes_mutated, rng, gene_buf);
            for (const int j : gene_buf)
                child.genotype(j) += cfg.mut_step_size * range(j) * rng.normal01();
            next.push_back(std::move(child));
        }
        for (Individual& child : next) child.fitness = probe(child.genotype);

        pop.swap(next);
        trace.best(t) = probe.best_fitness();
    }
}

void run_pso(const PsoConfig& cfg, const ObjectiveSpec& spec, int budget, Xoshiro256& rng,
             ObjectiveProbe& probe, RunTrace& trace) {
    const Eigen::ArrayXd range = index_ranges(spec.space());
    const int n = spec.space().n_vars();
    const int swarm = cfg.swarm_size;

    std::vector<Genotype> position(static_cast<std::size_t>(swarm));
    std::vector<Eigen::ArrayXd> velocity(static_cast<std::size_t>(swarm));
    std::vector<Genotype> pbest(static_cast<std::size_t>(swarm));
    std::vector<double> pbest_fit(static_cast<std::size_t>(swarm));

    for (int i = 0; i < swarm; ++i) {
        position[static_cast<std::size_t>(i)] = random_genotype(spec.space(), rng);
        Eigen::ArrayXd v(n);
        for (int j = 0; j < n; ++j) v(j) = rng.uniform(-range(j), range(j));
        velocity[static_cast<std::size_t>(i)] = std::move(v);
    }
    for (int i = 0; i < swarm; ++i) {
        pbest_fit[static_cast<std::size_t>(i)] = probe(position[static_cast<std::size_t>(i)]);
        pbest[static_cast<std::size_t>(i)] = position[static_cast<std::size_t>(i)];
    }
    trace.best(0) = probe.best_fitness();

    const int n0 = initial_neighborhood_size(swarm, cfg.min_fract_neigh);
    int neighborhood = n0;
    int stall = 0;
    double inertia = 1.1;  // adaptive within [0.1, 1.1]
    double global_best = *std::min_element(pbest_fit.begin(), pbest_fit.end());

    std::vector<int> others;
    Eigen::ArrayXd u1(n), u2(n);

    for (int t = 1; t <= budget; ++t) {
        for (int i = 0; i < swarm; ++i) {
            // neighborhood = self plus (neighborhood - 1) distinct others
            int best_idx = i;
            double best_fit = pbest_fit[static_cast<std::size_t>(i)];
            sample_distinct(swarm - 1, neighborhood - 1, rng, others);
            for (const int raw : others) {
                const int nb = raw < i ? raw : raw + 1;
                if (pbest_fit[static_cast<std::size_t>(nb)] < best_fit) {
                    best_fit = pbest_fit[static_cast<std::size_t>(nb)];
                    best_idx = nb;
                }
            }
            for (int j = 0; j < n; ++j) u1(j) = rng.uniform01();
            for (int j = 0; j < n; ++j) u2(j) = rng.uniform01();

            Eigen::ArrayXd& v = velocity[static_cast<std::size_t>(i)];
            Genotype& x = position[static_cast<std::size_t>(i)];
            v = pso_velocity(v, x, pbest[static_cast<std::size_t>(i)],
                             pbest[static_cast<std::size_t>(best_idx)], inertia, cfg.self_adj,
                             cfg.social_adj, u1, u2);
            v = v.max(-range).min(range);
            x += v;
        }
        for (int i = 0; i < swarm; ++i) {
            const double f = probe(position[static_cast<std::size_t>(i)]);
            if (f < pbest_fit[static_cast<std::size_t>(i)]) {
                pbest_fit[static_cast<std::size_t>(i)] = f;
                pbest[static_cast<std::size_t>(i)] = position[static_cast<std::size_t>(i)];
            }
        }
        const double new_best = *std::min_element(pbest_fit.begin(), pbest_fit.end());
        if (new_best < global_best) {
            stall = std::max(0, stall - 1);
            neighborhood = n0;
            global_best = new_best;
        } else {
            ++stall;
            neighborhood = std::min(neighborhood + n0, swarm);
        }
        if (stall < 2)
            inertia = std::min(2.0 * inertia, 1.1);
        else if (stall > 5)
            inertia = std::max(0.5 * inertia, 0.1);
        trace.best(t) = probe.best_fitness();
    }
}

void run_bbo(const BboConfig& cfg, const ObjectiveSpec& spec, int budget, Xoshiro256& rng,
             ObjectiveProbe& probe, RunTrace& trace) {
    const Eigen::ArrayXd range = index_ranges(spec.space());
    const int n = spec.space().n_vars();
    const int pop_size = cfg.pop_size;
    const int n_keep = std::clamp(static_cast<int>(std::llround(cfg.keep_rate * pop_size)), 0, pop_size);

    std::vector<Individual> pop;
    init_population(pop, pop_size, spec.space(), rng, probe);
    std::vector<int> order;
    sort_by_fitness(order, pop);
    {
        std::vector<Individual> sorted;
        sorted.reserve(pop.size());
        for (const int i : order) sorted.push_back(std::move(pop[static_cast<std::size_t>(i)]));
        pop.swap(sorted);
    }
    trace.best(0) = probe.best_fitness();

    const auto [lambda, mu] = bbo_rates(pop_size);
    Wheel wheel;
    wheel.build(std::span<const double>(mu.data(), static_cast<std::size_t>(mu.size())));

    std::vector<Individual> transformed(static_cast<std::size_t>(pop_size));

    for (int t = 1; t <= budget; ++t) {
        const double sigma_scale = bbo_sigma_scale(cfg.mut_step_size, cfg.mut_step_size_damp, t);
        // sources read from the pre-step population; pop stays sorted best-first
        for (int a = 0; a < pop_size; ++a) {
            Genotype g = pop[static_cast<std::size_t>(a)].genotype;
            for (int j = 0; j < n; ++j) {
                if (rng.uniform01() < lambda(a)) {
                    const int src = wheel.draw_excluding(a, mu(a), rng);
                    g(j) = migrate_species(g(j), pop[static_cast<std::size_t>(src)].genotype(j),
                                           cfg.alpha);
                }
                if (rng.uniform01() < cfg.mut_prob) g(j) += sigma_scale * range(j) * rng.normal01();
            }
            const double f = probe(g);
            transformed[static_cast<std::size_t>(a)] = {std::move(g), f};
        }
        sort_by_fitness(order, transformed);
        std::vector<Individual> next;
        next.reserve(static_cast<std::size_t>(pop_size));
        for (int k = 0; k < n_keep; ++k) next.push_back(pop[static_cast<std::size_t>(k)]);
        for (int k = 0; k < pop_size - n_keep; ++k)
            next.push_back(transformed[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])]);
        sort_by_fitness(order, next);
        pop.clear();
        for (const int i : order) pop.push_back(std::move(next[static_cast<std::size_t>(i)]));
        trace.best(t) = probe.best_fitness();
    }
}

}  // namespace

RunTrace run(const OptimizerConfig& config, const ObjectiveSpec& spec, int budget,
             std::uint64_t seed) {
    validate_config(config);
    require(budget >= 1, "budget must be >= 1");
    Xoshiro256 rng(seed);
    ObjectiveProbe probe(spec);
    RunTrace trace;
    trace.best.resize(budget + 1);
    std::visit(
        [&](const auto& cfg) {
            using T = std::decay_t<decltype(cfg)>;
            if constexpr (std::is_same_v<T, GaElitistConfig>)
                run_ga_elitist(cfg, spec, budget, rng, probe, trace);
            else if constexpr (std::is_same_v<T, GaYpeaConfig>)
                run_ga_ypea(cfg, spec, budget, rng, probe, trace);
            else if constexpr (std::is_same_v<T, PsoConfig>)
                run_pso(cfg, spec, budget, rng, probe, trace);
            else
                run_bbo(cfg, spec, budget, rng, probe, trace);
        },
        config);
    trace.best_solution = probe.best_solution();
    trace.evaluations = probe.evaluations();
    return trace;
}

std::uint64_t expected_evaluations(const OptimizerConfig& config, int budget) {
    require(budget >= 1, "budget must be >= 1");
    const auto b = static_cast<std::uint64_t>(budget);
    return std::visit(
        [&](const auto& cfg) -> std::uint64_t {
            using T = std::decay_t<decltype(cfg)>;
            if constexpr (std::is_same_v<T, GaElitistConfig>) {
                const GaElitistCounts c =
                    ga_elitist_counts(cfg.pop_size, cfg.e_count_fract, cfg.cross_fract);
                return static_cast<std::uint64_t>(cfg.pop_size) +
                       b * static_cast<std::uint64_t>(cfg.pop_size - c.elite);
            } else if constexpr (std::is_same_v<T, GaYpeaConfig>) {
                return static_cast<std::uint64_t>(cfg.pop_size) * (b + 1);
            } else if constexpr (std::is_same_v<T, PsoConfig>) {
                return static_cast<std::uint64_t>(cfg.swarm_size) * (b + 1);
            } else {
                return static_cast<std::uint64_t>(cfg.pop_size) * (b + 1);
            }
        },
        config);
}

}  // namespace tunelab
