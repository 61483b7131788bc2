#include "tunelab/campaign.hpp"

#include "json.hpp"
#include "tunelab/metrics.hpp"
#include "tunelab/rng.hpp"
#include "tunelab/svg.hpp"
#include "tunelab/text.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

namespace tunelab {

using json = nlohmann::ordered_json;

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

namespace {

[[noreturn]] void config_error(const std::string& what) { throw ConfigError(what); }

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* a : allowed) {
            if (key == a) {
                known = true;
                break;
            }
        }
        if (!known) config_error("unknown key \"" + key + "\" in " + where);
    }
}

const json* find(const json& obj, const char* key) {
    const auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

int get_int(const json& obj, const char* key, int fallback, int lo, const std::string& where) {
    const json* v = find(obj, key);
    if (!v) return fallback;
    if (!v->is_number_integer())
        config_error("\"" + std::string(key) + "\" in " + where + " must be an integer");
    const auto value = v->get<std::int64_t>();
    if (value < lo || value > 2147483647)
        config_error("\"" + std::string(key) + "\" in " + where + " must be >= " + std::to_string(lo));
    return static_cast<int>(value);
}

double get_double(const json& obj, const char* key, double fallback, const std::string& where) {
    const json* v = find(obj, key);
    if (!v) return fallback;
    if (!v->is_number()) config_error("\"" + std::string(key) + "\" in " + where + " must be a number");
    return v->get<double>();
}

std::uint64_t get_u64(const json& obj, const char* key, std::uint64_t fallback,
                      const std::string& where) {
    const json* v = find(obj, key);
    if (!v) return fallback;
    if (v->is_number_unsigned()) return v->get<std::uint64_t>();
    if (v->is_number_integer() && v->get<std::int64_t>() >= 0)
        return static_cast<std::uint64_t>(v->get<std::int64_t>());
    config_error("\"" + std::string(key) + "\" in " + where + " must be a non-negative integer");
}

ParamValue param_value_from_json(const json& v, const std::string& where) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number()) return v.get<double>();
    config_error("parameter values in " + where + " must be numbers or strings");
}

std::vector<std::pair<std::string, ParamValue>> params_from_json(const json& obj,
                                                                 const std::string& where) {
    if (!obj.is_object()) config_error("\"params\" in " + where + " must be an object");
    std::vector<std::pair<std::string, ParamValue>> out;
    for (const auto& [key, value] : obj.items())
        out.emplace_back(key, param_value_from_json(value, where));
    return out;
}

DiscreteSpace space_from_json(const json& arr) {
    if (!arr.is_array() || arr.empty())
        config_error("\"space\" must be a non-empty array of variable definitions");
    std::vector<ValueGrid> grids;
    grids.reserve(arr.size());
    for (std::size_t j = 0; j < arr.size(); ++j) {
        const json& var = arr[j];
        const std::string where = "space[" + std::to_string(j) + "]";
        if (!var.is_object()) config_error(where + " must be an object");
        if (find(var, "values")) {
            check_keys(var, {"values"}, where);
            const json& values = var["values"];
            if (!values.is_array() || values.size() < 2)
                config_error(where + ".values must list at least two numbers");
            Eigen::ArrayXd v(values.size());
            for (std::size_t k = 0; k < values.size(); ++k) {
                if (!values[k].is_number()) config_error(where + ".values must be numbers");
                v(static_cast<Eigen::Index>(k)) = values[k].get<double>();
            }
            grids.push_back(ValueGrid::from_values(std::move(v)));
        } else {
            check_keys(var, {"lower", "upper", "count"}, where);
            if (!find(var, "lower") || !find(var, "upper") || !find(var, "count"))
                config_error(where + " needs lower, upper and count (or values)");
            if (!var["lower"].is_number() || !var["upper"].is_number())
                config_error(where + ".lower/.upper must be numbers");
            const int count = get_int(var, "count", -1, 2, where);
            grids.push_back(ValueGrid::linear(var["lower"].get<double>(),
                                              var["upper"].get<double>(), count));
        }
    }
    return DiscreteSpace(std::move(grids));
}

ObjectiveSpec problem_from_json(const json& obj, const std::filesystem::path& base_dir) {
    if (!obj.is_object()) config_error("\"problem\" must be an object");
    check_keys(obj, {"space", "objective", "table", "penalty"}, "problem");
    if (!find(obj, "space")) config_error("problem needs a \"space\"");
    if (!find(obj, "objective") || !obj["objective"].is_string())
        config_error("problem needs an \"objective\" string");
    DiscreteSpace space = space_from_json(obj["space"]);
    const std::string objective = obj["objective"].get<std::string>();

    ObjectiveSpec spec = [&]() -> ObjectiveSpec {
        if (objective == "ackley") {
            if (find(obj, "table")) config_error("\"table\" is only valid for the table objective");
            return ObjectiveSpec::ackley_surrogate(std::move(space));
        }
        if (objective == "eggholder") {
            if (find(obj, "table")) config_error("\"table\" is only valid for the table objective");
            return ObjectiveSpec::eggholder_surrogate(std::move(space));
        }
        if (objective == "table") {
            const json* table = find(obj, "table");
            if (!table || !table->is_string())
                config_error("table objective needs a \"table\" file path");
            std::filesystem::path path = table->get<std::string>();
            if (path.is_relative()) path = base_dir / path;
            return load_table(path, space);
        }
        config_error("unknown objective \"" + objective + "\"");
    }();

    if (const json* penalty = find(obj, "penalty")) {
        check_keys(*penalty, {"magnitude", "infeasible"}, "penalty");
        if (!find(*penalty, "magnitude") || !(*penalty)["magnitude"].is_number())
            config_error("penalty needs a numeric \"magnitude\"");
        PenaltyRule rule;
        rule.magnitude = (*penalty)["magnitude"].get<double>();
        const json* infeasible = find(*penalty, "infeasible");
        if (!infeasible || !infeasible->is_array())
            config_error("penalty needs an \"infeasible\" array of index vectors");
        IndexVector iv(spec.space().n_vars());
        for (const json& entry : *infeasible) {
            if (!entry.is_array() || static_cast<int>(entry.size()) != spec.space().n_vars())
                config_error("each infeasible entry must list one index per variable");
            for (int j = 0; j < spec.space().n_vars(); ++j) {
                if (!entry[static_cast<std::size_t>(j)].is_number_integer())
                    config_error("infeasible indices must be integers");
                iv(j) = entry[static_cast<std::size_t>(j)].get<int>();
            }
            rule.infeasible.insert(linear_index(iv, spec.space()));
        }
        spec.set_penalty(std::move(rule));
    }
    return spec;
}

ParameterGrid grid_from_json(Method method, const json& grid, const std::string& where) {
    if (grid.is_string()) {
        const std::string name = grid.get<std::string>();
        if (name == "stock") return stock_grid(method);
        if (name == "quick") return quick_grid(method);
        config_error("unknown grid \"" + name + "\" in " + where + " (use stock, quick or an object)");
    }
    if (!grid.is_object() || grid.empty())
        config_error("\"grid\" in " + where + " must be \"stock\", \"quick\" or a non-empty object");
    ParameterGrid out;
    out.method = method;
    for (const auto& [name, values] : grid.items()) {
        if (!values.is_array() || values.empty())
            config_error("grid parameter \"" + name + "\" in " + where +
                         " must list at least one value");
        GridParameter p;
        p.name = name;
        for (const json& v : values) p.values.push_back(param_value_from_json(v, where));
        out.parameters.push_back(std::move(p));
    }
    // reject unknown names and bad value types before any runs happen
    config_at(out, 0);
    return out;
}

CampaignConfig build_campaign(const json& root, const std::filesystem::path& base_dir) {
    if (!root.is_object()) config_error("config root must be an object");
    check_keys(root,
               {"problem", "budget", "runs", "intervals", "zl", "master_seed", "workers",
                "strategy", "validation_runs", "success_tol", "oracle_limit", "auto_oracle", "out",
                "run", "tune"},
               "config");
    if (!find(root, "problem")) config_error("config needs a \"problem\"");

    CampaignConfig c(problem_from_json(root["problem"], base_dir));
    c.budget = get_int(root, "budget", c.budget, 1, "config");
    c.runs = get_int(root, "runs", c.runs, 1, "config");
    c.intervals = get_int(root, "intervals", c.intervals, 1, "config");
    c.zl = get_double(root, "zl", c.zl, "config");
    if (!(c.zl >= 1.0)) config_error("\"zl\" must be >= 1");
    c.master_seed = get_u64(root, "master_seed", c.master_seed, "config");
    c.workers = get_int(root, "workers", c.workers, 1, "config");
    c.strategy = get_int(root, "strategy", c.strategy, 1, "config");
    if (c.strategy != 1 && c.strategy != 2) config_error("\"strategy\" must be 1 or 2");
    c.validation_runs = get_int(root, "validation_runs", c.validation_runs, 0, "config");
    c.success_tol = get_double(root, "success_tol", c.success_tol, "config");
    if (!(c.success_tol >= 0.0)) config_error("\"success_tol\" must be >= 0");
    c.oracle_limit = get_u64(root, "oracle_limit", c.oracle_limit, "config");
    if (const json* auto_oracle = find(root, "auto_oracle")) {
        if (!auto_oracle->is_boolean()) config_error("\"auto_oracle\" must be a boolean");
        c.auto_oracle = auto_oracle->get<bool>();
    }
    if (c.budget % c.intervals != 0)
        config_error("\"budget\" must be divisible by \"intervals\"");
    if (const json* out = find(root, "out")) {
        if (!out->is_string()) config_error("\"out\" must be a path string");
        std::filesystem::path p = out->get<std::string>();
        c.out_dir = p.is_relative() ? base_dir / p : p;
    }

    if (const json* run = find(root, "run")) {
        check_keys(*run, {"method", "params"}, "run");
        if (!find(*run, "method") || !(*run)["method"].is_string())
            config_error("\"run\" needs a \"method\"");
        const Method method = method_from_name((*run)["method"].get<std::string>());
        std::vector<std::pair<std::string, ParamValue>> params;
        if (const json* p = find(*run, "params")) params = params_from_json(*p, "run");
        OptimizerConfig config = make_config(method, params);
        validate_config(config);
        c.run_config = std::move(config);
    }

    if (const json* tune = find(root, "tune")) {
        if (!tune->is_array() || tune->empty())
            config_error("\"tune\" must be a non-empty array");
        for (std::size_t i = 0; i < tune->size(); ++i) {
            const json& entry = (*tune)[i];
            const std::string where = "tune[" + std::to_string(i) + "]";
            if (!entry.is_object()) config_error(where + " must be an object");
            check_keys(entry, {"method", "grid"}, where);
            if (!find(entry, "method") || !entry["method"].is_string())
                config_error(where + " needs a \"method\"");
            const Method method = method_from_name(entry["method"].get<std::string>());
            const json* grid = find(entry, "grid");
            c.tune_grids.push_back(grid ? grid_from_json(method, *grid, where) : stock_grid(method));
        }
    }
    return c;
}

}  // namespace

CampaignConfig load_campaign(const std::filesystem::path& config_path) {
    std::ifstream in(config_path);
    if (!in) config_error("cannot open config file " + config_path.string());
    json root;
    try {
        root = json::parse(in);
    } catch (const json::exception& e) {
        config_error(config_path.string() + ": " + e.what());
    }
    const std::filesystem::path base_dir =
        config_path.has_parent_path() ? config_path.parent_path() : std::filesystem::path(".");
    try {
        return build_campaign(root, base_dir);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        config_error(e.what());
    } catch (const json::exception& e) {
        config_error(config_path.string() + ": " + e.what());
    }
}

namespace {

json param_value_json(const ParamValue& v) {
    if (const auto* s = std::get_if<std::string>(&v)) return *s;
    const double d = std::get<double>(v);
    if (d == std::nearbyint(d) && std::abs(d) < 9.0e15) return static_cast<std::int64_t>(d);
    return d;
}

json params_json(const OptimizerConfig& config) {
    json obj = json::object();
    for (const auto& [name, value] : config_params(config)) obj[name] = param_value_json(value);
    return obj;
}

json five_json(const FiveNumber& f) {
    return json{{"min", f.min}, {"q25", f.q25}, {"median", f.median}, {"q75", f.q75}, {"max", f.max}};
}

json array_json(const Eigen::ArrayXd& a) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < a.size(); ++i) arr.push_back(a(i));
    return arr;
}

json grid_json(const ParameterGrid& grid) {
    json arr = json::array();
    for (const GridParameter& p : grid.parameters) {
        json values = json::array();
        for (const ParamValue& v : p.values) values.push_back(param_value_json(v));
        arr.push_back(json{{"name", p.name}, {"values", values}});
    }
    return arr;
}

json influence_json(const std::vector<ParamInfluence>& influence) {
    json arr = json::array();
    for (const ParamInfluence& inf : influence) {
        json means = json::array();
        for (const auto& [value, mean] : inf.group_means)
            means.push_back(json{{"value", param_value_json(value)}, {"mean_fc", mean}});
        arr.push_back(json{{"name", inf.name}, {"influence", inf.influence}, {"group_means", means}});
    }
    return arr;
}

const ConfigResult& phase_best(const PhaseReport& phase) {
    const ConfigResult* best = nullptr;
    for (const ConfigResult& r : phase.results)
        if (!best || r.utility.fc < best->utility.fc) best = &r;
    return *best;
}

FiveNumber phase_fc_summary(const PhaseReport& phase) {
    std::vector<double> fc;
    fc.reserve(phase.results.size());
    for (const ConfigResult& r : phase.results) fc.push_back(r.utility.fc);
    return five_number(fc);
}

json validation_json(const ValidationReport& v) {
    json obj{{"runs", v.n_runs},
             {"summary", five_json(v.summary)},
             {"fc", v.fc},
             {"success_tol", v.success_tol}};
    if (v.optimum) {
        obj["optimum"] = *v.optimum;
        obj["success_rate"] = *v.success_rate;
    }
    json finals = json::array();
    for (const double f : v.finals) finals.push_back(f);
    obj["finals"] = finals;
    obj["apc"] = array_json(v.apc.mean_best);
    return obj;
}

json tuning_report_json(const TuningReport& rep) {
    json out{{"method", method_name(rep.method)},
             {"strategy", rep.strategy},
             {"assessment", json{{"runs", rep.assessment.n_runs},
                                 {"budget", rep.assessment.budget},
                                 {"intervals", rep.assessment.intervals},
                                 {"zl", rep.assessment.zl},
                                 {"master_seed", rep.assessment.master_seed},
                                 {"workers", rep.assessment.workers}}}};
    json phases = json::array();
    for (const PhaseReport& phase : rep.phases) {
        const ConfigResult& best = phase_best(phase);
        json results = json::array();
        for (const ConfigResult& r : phase.results) {
            json seeds = json::array();
            for (const std::uint64_t s : r.seeds) seeds.push_back(s);
            results.push_back(json{{"config_index", r.config_index},
                                   {"params", params_json(r.config)},
                                   {"fa", r.utility.fa},
                                   {"fb", r.utility.fb},
                                   {"fc", r.utility.fc},
                                   {"final_summary", five_json(five_number(r.finals))},
                                   {"seeds", seeds}});
        }
        json fixes = json::array();
        for (const FixDecision& fix : phase.fixes)
            fixes.push_back(json{{"name", fix.name},
                                 {"value", param_value_json(fix.value)},
                                 {"influence", fix.influence}});
        json drops = json::array();
        for (const DropDecision& drop : phase.drops) {
            json kept = json::array(), dropped = json::array();
            for (const ParamValue& v : drop.kept) kept.push_back(param_value_json(v));
            for (const ParamValue& v : drop.dropped) dropped.push_back(param_value_json(v));
            drops.push_back(json{{"name", drop.name}, {"kept", kept}, {"dropped", dropped}});
        }
        phases.push_back(json{{"phase", phase.phase},
                              {"grid", grid_json(phase.grid)},
                              {"fc_summary", five_json(phase_fc_summary(phase))},
                              {"influence", influence_json(phase.influence)},
                              {"fixes", fixes},
                              {"drops", drops},
                              {"best", json{{"config_index", best.config_index},
                                            {"params", params_json(best.config)},
                                            {"fa", best.utility.fa},
                                            {"fb", best.utility.fb},
                                            {"fc", best.utility.fc},
                                            {"apc", array_json(best.apc.mean_best)}}},
                              {"results", results}});
    }
    out["phases"] = phases;
    out["best"] = json{{"phase", rep.best_phase},
                       {"config_index", rep.best_config_index},
                       {"params", params_json(rep.best_config)},
                       {"fc", rep.best_fc}};
    if (rep.validation) out["validation"] = validation_json(*rep.validation);
    out["runs_executed"] = rep.runs_executed;
    return out;
}

std::string tuning_report_csv(const TuningReport& rep) {
    std::ostringstream csv;
    csv << "phase,config_index";
    std::vector<std::string> names;
    for (const GridParameter& p : rep.phases.front().grid.parameters) {
        names.push_back(p.name);
        csv << ',' << p.name;
    }
    csv << ",fc,fa,fb\n";
    for (const PhaseReport& phase : rep.phases) {
        for (const ConfigResult& r : phase.results) {
            csv << phase.phase << ',' << r.config_index;
            const auto params = config_params(r.config);
            for (const std::string& name : names) {
                csv << ',';
                for (const auto& [pname, value] : params) {
                    if (pname == name) {
                        csv << param_value_text(value);
                        break;
                    }
                }
            }
            csv << ',' << format_double(r.utility.fc) << ',' << format_double(r.utility.fa) << ','
                << format_double(r.utility.fb) << '\n';
        }
    }
    return csv.str();
}

void write_tuning_outputs(const TuningReport& rep, const CampaignConfig& campaign) {
    const std::string method = method_name(rep.method);
    const std::filesystem::path dir = campaign.out_dir;

    write_file_atomic(dir / (method + "_report.json"), tuning_report_json(rep).dump(2) + "\n");
    write_file_atomic(dir / (method + "_report.csv"), tuning_report_csv(rep));

    std::vector<SvgBox> boxes;
    for (const PhaseReport& phase : rep.phases)
        boxes.push_back({"phase " + std::to_string(phase.phase), phase_fc_summary(phase)});
    write_file_atomic(dir / (method + "_fc_box.svg"),
                      render_box_chart("utility by phase (" + method + ")", "F_C", boxes));

    std::vector<SvgSeries> series;
    for (const PhaseReport& phase : rep.phases)
        series.push_back({"phase " + std::to_string(phase.phase) + " best",
                          phase_best(phase).apc.mean_best});
    if (rep.validation) series.push_back({"validation", rep.validation->apc.mean_best});
    write_file_atomic(dir / (method + "_best_apc.svg"),
                      render_line_chart("mean best fitness (" + method + ")", "iteration",
                                        "mean best fitness", series));
}

}  // namespace

void cmd_run(const CampaignConfig& campaign) {
    if (!campaign.run_config) config_error("config has no \"run\" entry");
    const std::string method = method_name(method_of(*campaign.run_config));

    // One config, campaign.runs seeded runs; the same seeds a tuning phase 0
    // would hand its configuration 0.
    std::vector<RunTrace> traces;
    std::vector<std::uint64_t> seeds;
    traces.reserve(static_cast<std::size_t>(campaign.runs));
    for (int r = 0; r < campaign.runs; ++r) {
        seeds.push_back(derive_seed(campaign.master_seed, 0, 0, static_cast<std::uint64_t>(r)));
        traces.push_back(run(*campaign.run_config, campaign.problem, campaign.budget,
                             seeds.back()));
    }

    std::ostringstream csv;
    csv << "config_index,run_index,iteration,best_fitness\n";
    for (std::size_t r = 0; r < traces.size(); ++r)
        for (Eigen::Index t = 0; t < traces[r].best.size(); ++t)
            csv << "0," << r << ',' << t << ',' << format_double(traces[r].best(t)) << '\n';
    write_file_atomic(campaign.out_dir / "run_trace.csv", csv.str());

    const Apc apc = compute_apc(traces);
    const UtilityReport utility = utility_fc(apc, campaign.intervals, campaign.zl);
    std::vector<double> finals;
    std::size_t best_run = 0;
    std::uint64_t evaluations = 0;
    for (std::size_t r = 0; r < traces.size(); ++r) {
        finals.push_back(traces[r].best(campaign.budget));
        evaluations += traces[r].evaluations;
        if (finals[r] < finals[best_run]) best_run = r;  // ties keep the earlier run
    }
    const RunTrace& best = traces[best_run];

    const Evaluation final_eval = evaluate(campaign.problem, best.best_solution);
    const Eigen::ArrayXd values = decode(best.best_solution, campaign.problem.space());
    json solution = json::array(), decoded = json::array(), finals_json = json::array(),
         seeds_json = json::array();
    for (Eigen::Index j = 0; j < best.best_solution.size(); ++j) {
        solution.push_back(best.best_solution(j));
        decoded.push_back(values(j));
    }
    for (const double f : finals) finals_json.push_back(f);
    for (const std::uint64_t s : seeds) seeds_json.push_back(s);
    const json report{{"method", method},
                      {"params", params_json(*campaign.run_config)},
                      {"budget", campaign.budget},
                      {"runs", campaign.runs},
                      {"master_seed", campaign.master_seed},
                      {"seeds", seeds_json},
                      {"evaluations", evaluations},
                      {"finals", finals_json},
                      {"final_summary", five_json(five_number(finals))},
                      {"best_run", best_run},
                      {"best_fitness", finals[best_run]},
                      {"best_solution", solution},
                      {"best_values", decoded},
                      {"feasible", final_eval.feasible},
                      {"utility", json{{"fa", utility.fa},
                                       {"fb", utility.fb},
                                       {"fc", utility.fc},
                                       {"intervals", utility.intervals},
                                       {"zl", utility.zl}}},
                      {"apc", array_json(apc.mean_best)}};
    write_file_atomic(campaign.out_dir / "run_report.json", report.dump(2) + "\n");

    write_file_atomic(campaign.out_dir / "run_apc.svg",
                      render_line_chart("mean best fitness (" + method + ")", "iteration",
                                        "mean best fitness", {{"mean best", apc.mean_best}}));
}

void cmd_tune(const CampaignConfig& campaign) {
    if (campaign.tune_grids.empty()) config_error("config has no \"tune\" entries");
    std::optional<double> optimum;
    if (campaign.auto_oracle)
        optimum = brute_force_optimum(campaign.problem, campaign.oracle_limit).minimum;

    for (const ParameterGrid& grid : campaign.tune_grids) {
        TuneOptions options;
        options.strategy = campaign.strategy;
        options.assessment = {campaign.runs,        campaign.budget,  campaign.intervals,
                              campaign.zl,          campaign.master_seed,
                              campaign.workers};
        options.validation_runs = campaign.validation_runs;
        options.success_tol = campaign.success_tol;
        options.optimum = optimum;
        const TuningReport report = tune(grid, campaign.problem, options);
        write_tuning_outputs(report, campaign);
    }
}

void cmd_oracle(const CampaignConfig& campaign) {
    const OracleResult oracle = brute_force_optimum(campaign.problem, campaign.oracle_limit);
    json indices = json::array();
    for (Eigen::Index j = 0; j < oracle.minimizer.size(); ++j) indices.push_back(oracle.minimizer(j));
    const json report{{"indices", indices},
                      {"fitness", oracle.minimum},
                      {"cardinality", oracle.cardinality},
                      {"wall_time", oracle.wall_seconds}};
    write_file_atomic(campaign.out_dir / "oracle.json", report.dump(2) + "\n");
}

void cmd_report(const CampaignConfig& campaign) {
    if (campaign.tune_grids.empty()) config_error("config has no \"tune\" entries");
    std::vector<SvgBox> boxes;
    std::vector<SvgSeries> series;
    for (const ParameterGrid& grid : campaign.tune_grids) {
        const std::string method = method_name(grid.method);
        const std::filesystem::path path = campaign.out_dir / (method + "_report.json");
        std::ifstream in(path);
        if (!in)
            throw std::runtime_error("no tuning report at " + path.string() +
                                     "; run the tune command first");
        json rep;
        try {
            rep = json::parse(in);
        } catch (const json::exception& e) {
            throw std::runtime_error(path.string() + ": " + e.what());
        }

        const auto five_from = [](const json& f) {
            return FiveNumber{f.at("min").get<double>(), f.at("q25").get<double>(),
                              f.at("median").get<double>(), f.at("q75").get<double>(),
                              f.at("max").get<double>()};
        };
        const auto curve_from = [](const json& arr) {
            Eigen::ArrayXd y(arr.size());
            for (std::size_t i = 0; i < arr.size(); ++i)
                y(static_cast<Eigen::Index>(i)) = arr[i].get<double>();
            return y;
        };
        try {
            if (rep.contains("validation")) {
                boxes.push_back({method, five_from(rep["validation"]["summary"])});
                series.push_back({method, curve_from(rep["validation"]["apc"])});
            } else {
                boxes.push_back({method, five_from(rep["phases"].back()["fc_summary"])});
                series.push_back({method, curve_from(rep["phases"].back()["best"]["apc"])});
            }
            std::vector<SvgBar> bars;
            for (const json& phase : rep.at("phases"))
                for (const json& inf : phase.at("influence"))
                    bars.push_back({inf.at("name").get<std::string>() + " (phase " +
                                        std::to_string(phase.at("phase").get<int>()) + ")",
                                    inf.at("influence").get<double>()});
            write_file_atomic(campaign.out_dir / (method + "_influence.svg"),
                              render_bar_chart("parameter influence by phase (" + method + ")",
                                               "utility spread", bars));
        } catch (const json::exception& e) {
            throw std::runtime_error(path.string() + ": unexpected report shape: " + e.what());
        }
    }
    write_file_atomic(campaign.out_dir / "compare_fc_box.svg",
                      render_box_chart("final best fitness by method", "best fitness", boxes));
    write_file_atomic(campaign.out_dir / "compare_apc.svg",
                      render_line_chart("mean best fitness by method", "iteration",
                                        "mean best fitness", series));
}

}  // namespace tunelab
