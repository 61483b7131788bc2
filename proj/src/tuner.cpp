#include "tunelab/tuner.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <functional>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <unordered_set>
#include <utility>

namespace tunelab {

std::string param_value_text(const ParamValue& v) {
    if (const auto* s = std::get_if<std::string>(&v)) return *s;
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, std::get<double>(v));
    return std::string(buf, res.ptr);
}

bool param_value_equal(const ParamValue& a, const ParamValue& b) {
    if (a.index() != b.index()) return false;
    if (const auto* s = std::get_if<std::string>(&a)) return *s == std::get<std::string>(b);
    return std::get<double>(a) == std::get<double>(b);
}

std::uint64_t grid_size(const ParameterGrid& grid) {
    std::uint64_t n = 1;
    for (const GridParameter& p : grid.parameters) {
        if (p.values.empty()) throw std::invalid_argument("grid parameter '" + p.name + "' has no values");
        n *= p.values.size();
    }
    return n;
}

std::vector<ParamValue> assignment_at(const ParameterGrid& grid, std::uint64_t index) {
    if (index >= grid_size(grid)) throw std::invalid_argument("configuration index out of range");
    std::vector<ParamValue> values(grid.parameters.size());
    for (std::size_t p = grid.parameters.size(); p-- > 0;) {
        const auto m = static_cast<std::uint64_t>(grid.parameters[p].values.size());
        values[p] = grid.parameters[p].values[static_cast<std::size_t>(index % m)];
        index /= m;
    }
    return values;
}

namespace {

double as_double(const ParamValue& v, const std::string& name) {
    if (const auto* d = std::get_if<double>(&v)) return *d;
    throw std::invalid_argument("parameter '" + name + "' needs a numeric value");
}

int as_int(const ParamValue& v, const std::string& name) {
    const double d = as_double(v, name);
    const double r = std::nearbyint(d);
    if (std::abs(d - r) > 1e-9 || r < -2147483648.0 || r > 2147483647.0)
        throw std::invalid_argument("parameter '" + name + "' needs an integer value");
    return static_cast<int>(r);
}

std::string as_text(const ParamValue& v, const std::string& name) {
    if (const auto* s = std::get_if<std::string>(&v)) return *s;
    throw std::invalid_argument("parameter '" + name + "' needs a text value");
}

void set_param(OptimizerConfig& config, const std::string& name, const ParamValue& value) {
    const bool known = std::visit(
        [&](auto& cfg) {
            using T = std::decay_t<decltype(cfg)>;
            if constexpr (std::is_same_v<T, GaElitistConfig>) {
                if (name == "PopSize") cfg.pop_size = as_int(value, name);
                else if (name == "ECountFract") cfg.e_count_fract = as_double(value, name);
                else if (name == "CrossFract") cfg.cross_fract = as_double(value, name);
                else if (name == "SelFn") cfg.sel_fn = sel_fn_from_name(as_text(value, name));
                else if (name == "CrossFn") cfg.cross_fn = cross_fn_from_name(as_text(value, name));
                else return false;
            } else if constexpr (std::is_same_v<T, GaYpeaConfig>) {
                if (name == "PopSize") cfg.pop_size = as_int(value, name);
                else if (name == "CrossProb") cfg.cross_prob = as_double(value, name);
                else if (name == "CrossInfl") cfg.cross_infl = as_double(value, name);
                else if (name == "MutRate") cfg.mut_rate = as_double(value, name);
                else if (name == "MutStepSize") cfg.mut_step_size = as_double(value, name);
                else if (name == "SelPress") cfg.sel_press = as_double(value, name);
                else return false;
            } else if constexpr (std::is_same_v<T, PsoConfig>) {
                if (name == "SwarmSize") cfg.swarm_size = as_int(value, name);
                else if (name == "MinFractNeigh") cfg.min_fract_neigh = as_double(value, name);
                else if (name == "SelfAdj") cfg.self_adj = as_double(value, name);
                else if (name == "SocialAdj") cfg.social_adj = as_double(value, name);
                else return false;
            } else if constexpr (std::is_same_v<T, BboConfig>) {
                if (name == "PopSize") cfg.pop_size = as_int(value, name);
                else if (name == "Alpha") cfg.alpha = as_double(value, name);
                else if (name == "MutProb") cfg.mut_prob = as_double(value, name);
                else if (name == "MutStepSize") cfg.mut_step_size = as_double(value, name);
                else if (name == "MutStepSizeDamp") cfg.mut_step_size_damp = as_double(value, name);
                else if (name == "KeepRate") cfg.keep_rate = as_double(value, name);
                else return false;
            }
            return true;
        },
        config);
    if (!known)
        throw std::invalid_argument("unknown parameter '" + name + "' for method " +
                                    method_name(method_of(config)));
}

OptimizerConfig default_config(Method method) {
    switch (method) {
        case Method::ga_elitist: return GaElitistConfig{};
        case Method::ga_ypea: return GaYpeaConfig{};
        case Method::pso: return PsoConfig{};
        case Method::bbo: return BboConfig{};
    }
    throw std::logic_error("unknown method");
}

}  // namespace

OptimizerConfig config_at(const ParameterGrid& grid, std::uint64_t index) {
    const std::vector<ParamValue> values = assignment_at(grid, index);
    OptimizerConfig config = default_config(grid.method);
    for (std::size_t p = 0; p < grid.parameters.size(); ++p)
        set_param(config, grid.parameters[p].name, values[p]);
    return config;
}

OptimizerConfig make_config(Method method,
                            std::span<const std::pair<std::string, ParamValue>> params) {
    OptimizerConfig config = default_config(method);
    for (const auto& [name, value] : params) set_param(config, name, value);
    return config;
}

std::vector<std::pair<std::string, ParamValue>> config_params(const OptimizerConfig& config) {
    return std::visit(
        [](const auto& cfg) -> std::vector<std::pair<std::string, ParamValue>> {
            using T = std::decay_t<decltype(cfg)>;
            if constexpr (std::is_same_v<T, GaElitistConfig>) {
                return {{"PopSize", static_cast<double>(cfg.pop_size)},
                        {"ECountFract", cfg.e_count_fract},
                        {"CrossFract", cfg.cross_fract},
                        {"SelFn", sel_fn_name(cfg.sel_fn)},
                        {"CrossFn", cross_fn_name(cfg.cross_fn)}};
            } else if constexpr (std::is_same_v<T, GaYpeaConfig>) {
                return {{"PopSize", static_cast<double>(cfg.pop_size)},
                        {"CrossProb", cfg.cross_prob},
                        {"CrossInfl", cfg.cross_infl},
                        {"MutRate", cfg.mut_rate},
                        {"MutStepSize", cfg.mut_step_size},
                        {"SelPress", cfg.sel_press}};
            } else if constexpr (std::is_same_v<T, PsoConfig>) {
                return {{"SwarmSize", static_cast<double>(cfg.swarm_size)},
                        {"MinFractNeigh", cfg.min_fract_neigh},
                        {"SelfAdj", cfg.self_adj},
                        {"SocialAdj", cfg.social_adj}};
            } else {
                return {{"PopSize", static_cast<double>(cfg.pop_size)},
                        {"Alpha", cfg.alpha},
                        {"MutProb", cfg.mut_prob},
                        {"MutStepSize", cfg.mut_step_size},
                        {"MutStepSizeDamp", cfg.mut_step_size_damp},
                        {"KeepRate", cfg.keep_rate}};
            }
        },
        config);
}

namespace {

GridParameter num_axis(std::string name, std::vector<double> values) {
    GridParameter p;
    p.name = std::move(name);
    for (const double v : values) p.values.emplace_back(v);
    return p;
}

GridParameter text_axis(std::string name, std::vector<std::string> values) {
    GridParameter p;
    p.name = std::move(name);
    for (std::string& v : values) p.values.emplace_back(std::move(v));
    return p;
}

ParameterGrid thin(ParameterGrid grid) {
    for (GridParameter& p : grid.parameters) {
        std::vector<ParamValue> kept;
        for (std::size_t k = 0; k < p.values.size(); k += 2) kept.push_back(p.values[k]);
        p.values = std::move(kept);
    }
    return grid;
}

}  // namespace

ParameterGrid stock_grid(Method method) {
    ParameterGrid grid;
    grid.method = method;
    switch (method) {
        case Method::ga_elitist:
            grid.parameters = {
                num_axis("PopSize", {50, 100, 150, 200}),
                num_axis("ECountFract", {0.05, 0.10, 0.15, 0.20}),
                num_axis("CrossFract", {0.70, 0.80, 0.90, 1.00}),
                text_axis("SelFn", {"stochunif", "remainder", "uniform", "roulette", "tournament"}),
                text_axis("CrossFn", {"scattered", "intermediate", "heuristic", "singlepoint",
                                      "twopoints", "arithmetic"}),
            };
            break;
        case Method::ga_ypea:
            grid.parameters = {
                num_axis("PopSize", {50, 100, 150, 200}),
                num_axis("CrossProb", {0.60, 0.70, 0.80, 0.90}),
                num_axis("CrossInfl", {0.10, 0.20, 0.30, 0.40}),
                num_axis("MutRate", {0.10, 0.20, 0.30, 0.40}),
                num_axis("MutStepSize", {0.05, 0.10, 0.15, 0.20}),
                num_axis("SelPress", {1, 3, 5}),
            };
            break;
        case Method::pso:
            grid.parameters = {
                num_axis("SwarmSize", {50, 100, 150, 200}),
                num_axis("MinFractNeigh", {0.10, 0.20, 0.30, 0.40}),
                num_axis("SelfAdj", {0.50, 1.00, 1.49, 1.99}),
                num_axis("SocialAdj", {0.50, 1.00, 1.49, 1.99}),
            };
            break;
        case Method::bbo:
            grid.parameters = {
                num_axis("PopSize", {50, 80, 100, 120, 140}),
                num_axis("Alpha", {0.90, 0.95, 0.99}),
                num_axis("MutProb", {0.30, 0.40, 0.50}),
                num_axis("MutStepSize", {0.025, 0.050, 0.075, 0.100}),
                num_axis("MutStepSizeDamp", {0.99, 1.00, 1.01, 1.02}),
            };
            break;
    }
    return grid;
}

ParameterGrid quick_grid(Method method) { return thin(stock_grid(method)); }

bool is_population_parameter(std::string_view name) {
    return name == "PopSize" || name == "SwarmSize";
}

namespace {

void check_params(const AssessmentParams& p) {
    if (p.n_runs < 1) throw std::invalid_argument("n_runs must be >= 1");
    if (p.budget < 1) throw std::invalid_argument("budget must be >= 1");
    if (p.intervals < 1) throw std::invalid_argument("intervals must be >= 1");
    if (p.budget % p.intervals != 0)
        throw std::invalid_argument("budget " + std::to_string(p.budget) +
                                    " is not divisible by " + std::to_string(p.intervals) +
                                    " intervals");
    if (!(p.zl >= 1.0)) throw std::invalid_argument("zl must be >= 1");
    if (p.workers < 1) throw std::invalid_argument("workers must be >= 1");
}

/// Deterministic job pool: job j runs configs[j] with seeds[j]; traces land
/// in slot j no matter which worker picks the job up. Failures surface as a
/// runtime_error carrying describe(j) for context.
std::vector<Eigen::ArrayXd> run_pool(const std::vector<const OptimizerConfig*>& configs,
                                     const std::vector<std::uint64_t>& seeds,
                                     const ObjectiveSpec& spec, int budget, int workers,
                                     const std::function<std::string(std::size_t)>& describe) {
    const std::size_t total = configs.size();
    std::vector<Eigen::ArrayXd> traces(total);
    std::atomic<std::size_t> next_job{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;

    const auto worker = [&] {
        for (;;) {
            const std::size_t j = next_job.fetch_add(1);
            if (j >= total || failed.load()) return;
            try {
                RunTrace t = run(*configs[j], spec, budget, seeds[j]);
                traces[j] = std::move(t.best);
            } catch (const std::exception& e) {
                {
                    const std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error)
                        error = std::make_exception_ptr(
                            std::runtime_error(describe(j) + ": " + e.what()));
                }
                failed.store(true);
                return;
            } catch (...) {
                {
                    const std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
                failed.store(true);
                return;
            }
        }
    };

    const int n_threads = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(workers), total));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(static_cast<std::size_t>(n_threads));
        for (int i = 0; i < n_threads; ++i) threads.emplace_back(worker);
        for (std::thread& t : threads) t.join();
    }
    if (error) std::rethrow_exception(error);
    return traces;
}

}  // namespace

std::vector<ConfigResult> assess_grid(const ParameterGrid& grid, const ObjectiveSpec& spec,
                                      const AssessmentParams& params, std::uint64_t phase,
                                      std::uint64_t* runs_executed) {
    check_params(params);
    const std::uint64_t n_cfg = grid_size(grid);
    std::vector<OptimizerConfig> configs;
    configs.reserve(n_cfg);
    for (std::uint64_t c = 0; c < n_cfg; ++c) {
        configs.push_back(config_at(grid, c));
        validate_config(configs.back());  // fail before spending any runs
    }

    const std::size_t total = static_cast<std::size_t>(n_cfg) * static_cast<std::size_t>(params.n_runs);
    std::vector<const OptimizerConfig*> job_config(total);
    std::vector<std::uint64_t> job_seed(total);
    for (std::uint64_t c = 0; c < n_cfg; ++c) {
        for (int r = 0; r < params.n_runs; ++r) {
            const std::size_t j = static_cast<std::size_t>(c) * static_cast<std::size_t>(params.n_runs) +
                                  static_cast<std::size_t>(r);
            job_config[j] = &configs[static_cast<std::size_t>(c)];
            job_seed[j] = derive_seed(params.master_seed, phase, c, static_cast<std::uint64_t>(r));
        }
    }

    const auto describe = [&](std::size_t j) {
        const std::uint64_t c = static_cast<std::uint64_t>(j) / static_cast<std::uint64_t>(params.n_runs);
        const std::uint64_t r = static_cast<std::uint64_t>(j) % static_cast<std::uint64_t>(params.n_runs);
        return "configuration " + std::to_string(c) + ", run " + std::to_string(r);
    };
    std::vector<Eigen::ArrayXd> traces =
        run_pool(job_config, job_seed, spec, params.budget, params.workers, describe);

    std::vector<ConfigResult> results;
    results.reserve(n_cfg);
    for (std::uint64_t c = 0; c < n_cfg; ++c) {
        ConfigResult r;
        r.config_index = c;
        r.config = configs[static_cast<std::size_t>(c)];
        const std::size_t base = static_cast<std::size_t>(c) * static_cast<std::size_t>(params.n_runs);
        r.apc = compute_apc(std::span<const Eigen::ArrayXd>(traces.data() + base,
                                                            static_cast<std::size_t>(params.n_runs)));
        r.utility = utility_fc(r.apc, params.intervals, params.zl);
        r.finals.reserve(static_cast<std::size_t>(params.n_runs));
        r.seeds.assign(job_seed.begin() + static_cast<std::ptrdiff_t>(base),
                       job_seed.begin() + static_cast<std::ptrdiff_t>(base) + params.n_runs);
        for (int run_idx = 0; run_idx < params.n_runs; ++run_idx)
            r.finals.push_back(traces[base + static_cast<std::size_t>(run_idx)](params.budget));
        results.push_back(std::move(r));
    }
    if (runs_executed) *runs_executed += static_cast<std::uint64_t>(total);
    return results;
}

namespace {

/// Mixed-radix digit of config index `index` for parameter `p`.
std::size_t digit_of(const ParameterGrid& grid, std::uint64_t index, std::size_t p) {
    std::uint64_t stride = 1;
    for (std::size_t q = grid.parameters.size(); q-- > p + 1;)
        stride *= grid.parameters[q].values.size();
    return static_cast<std::size_t>((index / stride) %
                                    static_cast<std::uint64_t>(grid.parameters[p].values.size()));
}

}  // namespace

std::vector<ParamInfluence> influences(const ParameterGrid& grid,
                                       std::span<const ConfigResult> results) {
    std::vector<ParamInfluence> out;
    out.reserve(grid.parameters.size());
    for (std::size_t p = 0; p < grid.parameters.size(); ++p) {
        const GridParameter& param = grid.parameters[p];
        std::vector<double> sum(param.values.size(), 0.0);
        std::vector<std::uint64_t> count(param.values.size(), 0);
        for (const ConfigResult& r : results) {
            const std::size_t d = digit_of(grid, r.config_index, p);
            sum[d] += r.utility.fc;
            ++count[d];
        }
        ParamInfluence inf;
        inf.name = param.name;
        double lo = 0.0, hi = 0.0;
        bool first = true;
        for (std::size_t k = 0; k < param.values.size(); ++k) {
            if (count[k] == 0) throw std::invalid_argument("results do not cover the grid");
            const double mean = sum[k] / static_cast<double>(count[k]);
            inf.group_means.emplace_back(param.values[k], mean);
            if (first || mean < lo) lo = mean;
            if (first || mean > hi) hi = mean;
            first = false;
        }
        inf.influence = hi - lo;
        out.push_back(std::move(inf));
    }
    return out;
}

std::vector<FixDecision> decide_fixes(const ParameterGrid& grid,
                                      std::span<const ConfigResult> results, int max_fixes) {
    const std::vector<ParamInfluence> inf = influences(grid, results);
    std::vector<std::size_t> candidates;
    for (std::size_t p = 0; p < grid.parameters.size(); ++p) {
        if (is_population_parameter(grid.parameters[p].name)) continue;
        if (grid.parameters[p].values.size() < 2) continue;
        candidates.push_back(p);
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](std::size_t a, std::size_t b) { return inf[a].influence > inf[b].influence; });
    if (static_cast<int>(candidates.size()) > max_fixes)
        candidates.resize(static_cast<std::size_t>(max_fixes));

    std::vector<FixDecision> fixes;
    for (const std::size_t p : candidates) {
        FixDecision fix;
        fix.name = grid.parameters[p].name;
        fix.influence = inf[p].influence;
        std::size_t best = 0;
        for (std::size_t k = 1; k < inf[p].group_means.size(); ++k) {
            if (inf[p].group_means[k].second < inf[p].group_means[best].second) best = k;
        }
        fix.value = inf[p].group_means[best].first;
        fixes.push_back(std::move(fix));
    }
    return fixes;
}

ParameterGrid apply_fixes(const ParameterGrid& grid, std::span<const FixDecision> fixes) {
    ParameterGrid out = grid;
    for (const FixDecision& fix : fixes) {
        bool found = false;
        for (GridParameter& p : out.parameters) {
            if (p.name != fix.name) continue;
            p.values = {fix.value};
            found = true;
            break;
        }
        if (!found) throw std::invalid_argument("fix for unknown parameter '" + fix.name + "'");
    }
    return out;
}

std::vector<DropDecision> decide_drops(const ParameterGrid& grid,
                                       std::span<const ConfigResult> results, double keep_span) {
    const std::vector<ParamInfluence> inf = influences(grid, results);
    std::vector<DropDecision> drops;
    for (std::size_t p = 0; p < grid.parameters.size(); ++p) {
        const auto& means = inf[p].group_means;
        if (means.size() <= 2) continue;  // the best two values always survive
        double best = means[0].second, worst = means[0].second;
        for (const auto& [value, mean] : means) {
            best = std::min(best, mean);
            worst = std::max(worst, mean);
        }
        const double threshold = best + keep_span * (worst - best);
        std::vector<std::size_t> kept;
        for (std::size_t k = 0; k < means.size(); ++k)
            if (means[k].second <= threshold) kept.push_back(k);
        if (kept.size() < 2) {
            // fall back to the two lowest group means
            std::vector<std::size_t> order(means.size());
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return means[a].second < means[b].second;
            });
            kept.assign(order.begin(), order.begin() + 2);
            std::sort(kept.begin(), kept.end());
        }
        if (kept.size() == means.size()) continue;
        DropDecision drop;
        drop.name = grid.parameters[p].name;
        std::size_t next_kept = 0;
        for (std::size_t k = 0; k < means.size(); ++k) {
            if (next_kept < kept.size() && kept[next_kept] == k) {
                drop.kept.push_back(means[k].first);
                ++next_kept;
            } else {
                drop.dropped.push_back(means[k].first);
            }
        }
        drops.push_back(std::move(drop));
    }
    return drops;
}

ParameterGrid apply_drops(const ParameterGrid& grid, std::span<const DropDecision> drops) {
    ParameterGrid out = grid;
    for (const DropDecision& drop : drops) {
        bool found = false;
        for (GridParameter& p : out.parameters) {
            if (p.name != drop.name) continue;
            std::vector<ParamValue> kept;
            for (const ParamValue& v : p.values) {
                const bool keep = std::any_of(drop.kept.begin(), drop.kept.end(),
                                              [&](const ParamValue& k) { return param_value_equal(k, v); });
                if (keep) kept.push_back(v);
            }
            if (kept.empty()) throw std::invalid_argument("drop would empty parameter '" + p.name + "'");
            p.values = std::move(kept);
            found = true;
            break;
        }
        if (!found) throw std::invalid_argument("drop for unknown parameter '" + drop.name + "'");
    }
    return out;
}

ValidationReport validate(const OptimizerConfig& config, const ObjectiveSpec& spec,
                          const AssessmentParams& params, int n_runs, double success_tol,
                          std::optional<double> optimum) {
    check_params(params);
    if (n_runs < 1) throw std::invalid_argument("validation needs at least one run");
    if (!(success_tol >= 0.0)) throw std::invalid_argument("success tolerance must be >= 0");
    validate_config(config);

    std::vector<const OptimizerConfig*> job_config(static_cast<std::size_t>(n_runs), &config);
    std::vector<std::uint64_t> job_seed(static_cast<std::size_t>(n_runs));
    for (int r = 0; r < n_runs; ++r)
        job_seed[static_cast<std::size_t>(r)] =
            derive_seed(params.master_seed, kValidationPhase, 0, static_cast<std::uint64_t>(r));
    const auto describe = [](std::size_t j) { return "validation run " + std::to_string(j); };
    const std::vector<Eigen::ArrayXd> traces =
        run_pool(job_config, job_seed, spec, params.budget, params.workers, describe);

    ValidationReport report;
    report.n_runs = n_runs;
    report.finals.reserve(static_cast<std::size_t>(n_runs));
    for (const Eigen::ArrayXd& t : traces) report.finals.push_back(t(params.budget));
    report.summary = five_number(report.finals);
    report.apc = compute_apc(std::span<const Eigen::ArrayXd>(traces.data(), traces.size()));
    report.fc = utility_fc(report.apc, params.intervals, params.zl).fc;
    report.success_tol = success_tol;
    report.optimum = optimum;
    if (optimum) {
        int hits = 0;
        for (const double f : report.finals)
            if (std::abs(f - *optimum) <= success_tol) ++hits;
        report.success_rate = static_cast<double>(hits) / static_cast<double>(n_runs);
    }
    return report;
}

namespace {

void pick_best(const PhaseReport& phase, TuningReport& report) {
    const ConfigResult* best = nullptr;
    for (const ConfigResult& r : phase.results) {
        if (!best || r.utility.fc < best->utility.fc) best = &r;  // tie keeps the lower index
    }
    if (!best) throw std::logic_error("phase has no results");
    report.best_phase = phase.phase;
    report.best_config_index = best->config_index;
    report.best_config = best->config;
    report.best_fc = best->utility.fc;
}

}  // namespace

TuningReport tune(const ParameterGrid& grid, const ObjectiveSpec& spec, const TuneOptions& options) {
    if (options.strategy != 1 && options.strategy != 2)
        throw std::invalid_argument("strategy must be 1 or 2");
    check_params(options.assessment);

    TuningReport report;
    report.method = grid.method;
    report.strategy = options.strategy;
    report.assessment = options.assessment;

    PhaseReport phase0;
    phase0.phase = 0;
    phase0.grid = grid;
    phase0.results = assess_grid(grid, spec, options.assessment, 0, &report.runs_executed);
    phase0.influence = influences(grid, phase0.results);

    if (options.strategy == 2) {
        phase0.fixes = decide_fixes(grid, phase0.results);
        ParameterGrid grid1 = apply_fixes(grid, phase0.fixes);

        // Each phase re-runs on its own seed stream even when a decision left
        // the grid unchanged; re-testing may move the apparent optimum.
        PhaseReport phase1;
        phase1.phase = 1;
        phase1.grid = grid1;
        phase1.results = assess_grid(grid1, spec, options.assessment, 1, &report.runs_executed);
        phase1.influence = influences(grid1, phase1.results);
        phase1.drops = decide_drops(grid1, phase1.results);
        ParameterGrid grid2 = apply_drops(grid1, phase1.drops);

        PhaseReport phase2;
        phase2.phase = 2;
        phase2.grid = grid2;
        phase2.results = assess_grid(grid2, spec, options.assessment, 2, &report.runs_executed);
        phase2.influence = influences(grid2, phase2.results);

        report.phases.push_back(std::move(phase0));
        report.phases.push_back(std::move(phase1));
        report.phases.push_back(std::move(phase2));
    } else {
        report.phases.push_back(std::move(phase0));
    }

    pick_best(report.phases.back(), report);

    if (options.validation_runs > 0) {
        report.validation = validate(report.best_config, spec, options.assessment,
                                     options.validation_runs, options.success_tol, options.optimum);
        report.runs_executed += static_cast<std::uint64_t>(options.validation_runs);
    }

    // Postconditions: no seed is ever reused across phases or validation, and
    // the run counter matches the analytic total.
    std::unordered_set<std::uint64_t> seen;
    std::uint64_t expected_runs = 0;
    for (const PhaseReport& ph : report.phases) {
        expected_runs += grid_size(ph.grid) * static_cast<std::uint64_t>(options.assessment.n_runs);
        for (const ConfigResult& r : ph.results)
            for (const std::uint64_t s : r.seeds)
                if (!seen.insert(s).second)
                    throw std::logic_error("seed reused across assessment phases");
    }
    if (report.validation) {
        expected_runs += static_cast<std::uint64_t>(report.validation->n_runs);
        for (int r = 0; r < report.validation->n_runs; ++r) {
            const std::uint64_t s = derive_seed(options.assessment.master_seed, kValidationPhase, 0,
                                                static_cast<std::uint64_t>(r));
            if (!seen.insert(s).second) throw std::logic_error("seed reused by validation");
        }
    }
    if (report.runs_executed != expected_runs)
        throw std::logic_error("run counter does not match the phase grids");
    return report;
}

}  // namespace tunelab
