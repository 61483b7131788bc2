#include "doctest.h"

#include "tunelab/objectives.hpp"
#include "tunelab/optimizers.hpp"
#include "tunelab/rng.hpp"
#include "tunelab/space.hpp"
#include "tunelab/tuner.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

using namespace tunelab;

namespace {

std::string message_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const std::exception& e) {
        return e.what();
    }
    return "";
}

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

ObjectiveSpec small_ackley() {
    std::vector<ValueGrid> grids;
    grids.push_back(ValueGrid::linear(-2.0, 2.0, 5));
    grids.push_back(ValueGrid::linear(-2.0, 2.0, 5));
    return ObjectiveSpec::ackley_surrogate(DiscreteSpace(std::move(grids)));
}

ObjectiveSpec constant_objective(double value) {
    std::vector<ValueGrid> grids;
    grids.push_back(ValueGrid::linear(0.0, 2.0, 3));
    grids.push_back(ValueGrid::linear(0.0, 3.0, 4));
    DiscreteSpace space(std::move(grids));
    std::unordered_map<std::uint64_t, double> table;
    for (std::uint64_t r = 0; r < 12; ++r) table[r] = value;
    return ObjectiveSpec::table_surrogate(std::move(space), std::move(table));
}

ParameterGrid tiny_pso_grid() {
    ParameterGrid grid;
    grid.method = Method::pso;
    grid.parameters = {num_axis("SwarmSize", {3, 5}), num_axis("SelfAdj", {0.5, 1.49})};
    return grid;
}

AssessmentParams tiny_params() {
    AssessmentParams p;
    p.n_runs = 3;
    p.budget = 14;
    p.intervals = 7;
    p.zl = 4.0;
    p.master_seed = 11;
    p.workers = 1;
    return p;
}

/// Synthetic sweep results carrying only what influence analysis reads.
std::vector<ConfigResult> fake_results(const ParameterGrid& grid,
                                       const std::function<double(std::uint64_t)>& fc_of) {
    std::vector<ConfigResult> results;
    for (std::uint64_t c = 0; c < grid_size(grid); ++c) {
        ConfigResult r;
        r.config_index = c;
        r.utility.fc = fc_of(c);
        results.push_back(std::move(r));
    }
    return results;
}

}  // namespace

TEST_SUITE("tuner") {

TEST_CASE("stock grids have the advertised sizes") {
    CHECK(grid_size(stock_grid(Method::ga_elitist)) == 1920);
    CHECK(grid_size(stock_grid(Method::ga_ypea)) == 3072);
    CHECK(grid_size(stock_grid(Method::pso)) == 256);
    CHECK(grid_size(stock_grid(Method::bbo)) == 720);
}

TEST_CASE("quick grids keep every other value") {
    CHECK(grid_size(quick_grid(Method::ga_elitist)) == 72);
    CHECK(grid_size(quick_grid(Method::ga_ypea)) == 64);
    CHECK(grid_size(quick_grid(Method::pso)) == 16);
    CHECK(grid_size(quick_grid(Method::bbo)) == 48);

    const ParameterGrid q = quick_grid(Method::bbo);
    REQUIRE(q.parameters.size() == 5);
    CHECK(q.parameters[0].name == "PopSize");
    REQUIRE(q.parameters[0].values.size() == 3);
    CHECK(std::get<double>(q.parameters[0].values[0]) == 50.0);
    CHECK(std::get<double>(q.parameters[0].values[1]) == 100.0);
    CHECK(std::get<double>(q.parameters[0].values[2]) == 140.0);
    CHECK(std::get<double>(q.parameters[1].values[0]) == 0.90);
    CHECK(std::get<double>(q.parameters[1].values[1]) == 0.99);
}

TEST_CASE("the last grid parameter varies fastest") {
    ParameterGrid grid;
    grid.method = Method::pso;
    grid.parameters = {num_axis("SwarmSize", {3, 5}), text_axis("kind", {"x", "y"})};
    // "kind" is not a real parameter; assignment_at never validates names.
    REQUIRE(grid_size(grid) == 4);
    const auto expect = std::vector<std::pair<double, std::string>>{
        {3, "x"}, {3, "y"}, {5, "x"}, {5, "y"}};
    for (std::uint64_t c = 0; c < 4; ++c) {
        const std::vector<ParamValue> a = assignment_at(grid, c);
        CHECK(std::get<double>(a[0]) == expect[c].first);
        CHECK(std::get<std::string>(a[1]) == expect[c].second);
    }
    CHECK_THROWS_AS((void)assignment_at(grid, 4), std::invalid_argument);
}

TEST_CASE("grid configs agree with their assignments") {
    const ParameterGrid grid = stock_grid(Method::bbo);
    for (const std::uint64_t index : {0ULL, 1ULL, 17ULL, 359ULL, 719ULL}) {
        const std::vector<ParamValue> a = assignment_at(grid, index);
        const OptimizerConfig cfg = config_at(grid, index);
        const auto params = config_params(cfg);
        for (std::size_t p = 0; p < grid.parameters.size(); ++p) {
            bool found = false;
            for (const auto& [name, value] : params) {
                if (name != grid.parameters[p].name) continue;
                CHECK(param_value_equal(value, a[p]));
                found = true;
            }
            CHECK(found);
        }
        // KeepRate is not swept; it stays at its default.
        CHECK(std::get<BboConfig>(cfg).keep_rate == 0.2);
    }
}

TEST_CASE("configs are buildable from name-value lists") {
    const std::vector<std::pair<std::string, ParamValue>> params{
        {"SwarmSize", ParamValue{7.0}}, {"SelfAdj", ParamValue{1.2}}};
    const OptimizerConfig cfg = make_config(Method::pso, params);
    CHECK(std::get<PsoConfig>(cfg).swarm_size == 7);
    CHECK(std::get<PsoConfig>(cfg).self_adj == 1.2);
    CHECK(std::get<PsoConfig>(cfg).social_adj == 1.49);  // untouched default

    const std::vector<std::pair<std::string, ParamValue>> ga{
        {"SelFn", ParamValue{std::string("tournament")}}};
    CHECK(std::get<GaElitistConfig>(make_config(Method::ga_elitist, ga)).sel_fn ==
          SelFn::tournament);
}

TEST_CASE("bad parameter names and types are reported") {
    using Params = std::vector<std::pair<std::string, ParamValue>>;
    const auto msg = [](Method m, Params p) {
        return message_of([&] { (void)make_config(m, p); });
    };
    CHECK(msg(Method::pso, {{"Gamma", ParamValue{1.0}}}).find("unknown parameter 'Gamma'") !=
          std::string::npos);
    CHECK(msg(Method::pso, {{"SwarmSize", ParamValue{std::string("big")}}})
              .find("numeric") != std::string::npos);
    CHECK(msg(Method::pso, {{"SwarmSize", ParamValue{2.5}}}).find("integer") !=
          std::string::npos);
    CHECK(msg(Method::ga_elitist, {{"SelFn", ParamValue{3.0}}}).find("text") !=
          std::string::npos);
    CHECK(msg(Method::ga_elitist, {{"SelFn", ParamValue{std::string("rank")}}})
              .find("rank") != std::string::npos);
}

TEST_CASE("parameter values print compactly and compare by content") {
    CHECK(param_value_text(ParamValue{50.0}) == "50");
    CHECK(param_value_text(ParamValue{0.1}) == "0.1");
    CHECK(param_value_text(ParamValue{std::string("roulette")}) == "roulette");
    CHECK(param_value_equal(ParamValue{0.5}, ParamValue{0.5}));
    CHECK_FALSE(param_value_equal(ParamValue{0.5}, ParamValue{0.25}));
    CHECK_FALSE(param_value_equal(ParamValue{0.5}, ParamValue{std::string("0.5")}));
    CHECK(param_value_equal(ParamValue{std::string("a")}, ParamValue{std::string("a")}));
}

TEST_CASE("population axes are recognized by name") {
    CHECK(is_population_parameter("PopSize"));
    CHECK(is_population_parameter("SwarmSize"));
    CHECK_FALSE(is_population_parameter("Alpha"));
    CHECK_FALSE(is_population_parameter("MinFractNeigh"));
}

TEST_CASE("grid sizes reject empty axes") {
    ParameterGrid grid = tiny_pso_grid();
    grid.parameters.push_back(GridParameter{"SocialAdj", {}});
    const std::string what = message_of([&] { (void)grid_size(grid); });
    CHECK(what.find("SocialAdj") != std::string::npos);
}

TEST_CASE("grid assessment is deterministic and worker-count invariant") {
    const ObjectiveSpec spec = small_ackley();
    const ParameterGrid grid = tiny_pso_grid();
    AssessmentParams params = tiny_params();

    const std::vector<ConfigResult> a = assess_grid(grid, spec, params, 0);
    const std::vector<ConfigResult> b = assess_grid(grid, spec, params, 0);
    params.workers = 4;
    const std::vector<ConfigResult> c = assess_grid(grid, spec, params, 0);

    REQUIRE(a.size() == 4);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].config_index == i);
        CHECK(a[i].utility.fc == b[i].utility.fc);
        CHECK(a[i].utility.fc == c[i].utility.fc);
        CHECK(a[i].finals == b[i].finals);
        CHECK(a[i].finals == c[i].finals);
        CHECK(a[i].seeds == c[i].seeds);
        CHECK((a[i].apc.mean_best == c[i].apc.mean_best).all());
    }
}

TEST_CASE("assessment seeds derive from phase, config and run") {
    const ObjectiveSpec spec = small_ackley();
    const ParameterGrid grid = tiny_pso_grid();
    const AssessmentParams params = tiny_params();
    std::uint64_t counter = 5;
    const std::vector<ConfigResult> results = assess_grid(grid, spec, params, 2, &counter);
    CHECK(counter == 5 + 4 * 3);
    for (std::uint64_t c = 0; c < 4; ++c) {
        REQUIRE(results[c].seeds.size() == 3);
        for (std::uint64_t r = 0; r < 3; ++r)
            CHECK(results[c].seeds[r] == derive_seed(params.master_seed, 2, c, r));
    }

    // One run per config: the curve must equal the bare seeded run, which
    // pins the whole seed plumbing end to end.
    AssessmentParams single = params;
    single.n_runs = 1;
    const std::vector<ConfigResult> one = assess_grid(grid, spec, single, 2);
    for (std::uint64_t c = 0; c < 4; ++c) {
        const RunTrace t =
            run(config_at(grid, c), spec, single.budget, derive_seed(single.master_seed, 2, c, 0));
        CHECK((one[c].apc.mean_best == t.best).all());
        CHECK(one[c].finals[0] == t.best(single.budget));
    }
}

TEST_CASE("a constant objective scores the constant exactly") {
    const ObjectiveSpec spec = constant_objective(7.0);
    const ParameterGrid grid = tiny_pso_grid();
    const std::vector<ConfigResult> results = assess_grid(grid, spec, tiny_params(), 0);
    for (const ConfigResult& r : results) {
        CHECK(r.utility.fa == 7.0);
        CHECK(r.utility.fb == 7.0);
        CHECK(r.utility.fc == 7.0);
        for (const double f : r.finals) CHECK(f == 7.0);
    }
}

TEST_CASE("assessment rejects bad settings before spending runs") {
    const ObjectiveSpec spec = small_ackley();
    const ParameterGrid grid = tiny_pso_grid();
    AssessmentParams params = tiny_params();
    params.intervals = 9;  // 14 % 9 != 0
    const std::string what =
        message_of([&] { (void)assess_grid(grid, spec, params, 0); });
    CHECK(what.find("divisible") != std::string::npos);

    params = tiny_params();
    params.workers = 0;
    CHECK_THROWS_AS((void)assess_grid(grid, spec, params, 0), std::invalid_argument);
    params = tiny_params();
    params.n_runs = 0;
    CHECK_THROWS_AS((void)assess_grid(grid, spec, params, 0), std::invalid_argument);

    ParameterGrid bad = tiny_pso_grid();
    bad.parameters[0] = num_axis("SwarmSize", {3, 1});  // 1 is illegal
    CHECK_THROWS_AS((void)assess_grid(bad, spec, tiny_params(), 0), std::invalid_argument);
}

TEST_CASE("failed runs carry their configuration and run labels") {
    // A table with only one cell filled in: the very first runs step on a
    // missing entry and the error must name the job that died.
    std::vector<ValueGrid> grids;
    grids.push_back(ValueGrid::linear(0.0, 2.0, 3));
    grids.push_back(ValueGrid::linear(0.0, 3.0, 4));
    DiscreteSpace space(std::move(grids));
    std::unordered_map<std::uint64_t, double> table{{0, 1.0}};
    const ObjectiveSpec spec = ObjectiveSpec::table_surrogate(std::move(space), std::move(table));

    const std::string what =
        message_of([&] { (void)assess_grid(tiny_pso_grid(), spec, tiny_params(), 0); });
    CHECK(what.find("configuration") != std::string::npos);
    CHECK(what.find("run") != std::string::npos);
    CHECK(what.find("no entry") != std::string::npos);
}

TEST_CASE("influence splits utilities by parameter value") {
    ParameterGrid grid;
    grid.method = Method::pso;
    grid.parameters = {num_axis("MinFractNeigh", {0.1, 0.2}), num_axis("SelfAdj", {0.5, 1.0})};
    const std::vector<ConfigResult> results = fake_results(grid, [](std::uint64_t c) {
        return 1.0 + 2.0 * static_cast<double>(c);  // fc: 1, 3, 5, 7
    });
    const std::vector<ParamInfluence> inf = influences(grid, results);
    REQUIRE(inf.size() == 2);
    CHECK(inf[0].name == "MinFractNeigh");
    CHECK(inf[0].group_means[0].second == 2.0);
    CHECK(inf[0].group_means[1].second == 6.0);
    CHECK(inf[0].influence == 4.0);
    CHECK(inf[1].group_means[0].second == 3.0);
    CHECK(inf[1].group_means[1].second == 5.0);
    CHECK(inf[1].influence == 2.0);
}

TEST_CASE("influence requires every value to be covered") {
    ParameterGrid grid;
    grid.method = Method::pso;
    grid.parameters = {num_axis("SelfAdj", {0.5, 1.0, 1.49})};
    std::vector<ConfigResult> results = fake_results(grid, [](std::uint64_t c) {
        return static_cast<double>(c);
    });
    results.pop_back();  // value 1.49 now has no result
    const std::string what = message_of([&] { (void)influences(grid, results); });
    CHECK(what.find("cover") != std::string::npos);
}

TEST_CASE("fixes pin the most influential non-population parameters") {
    ParameterGrid grid;
    grid.method = Method::pso;
    grid.parameters = {num_axis("SwarmSize", {3, 5}), num_axis("MinFractNeigh", {0.2, 0.4}),
                       num_axis("SelfAdj", {0.5, 1.0}), num_axis("SocialAdj", {1.25})};
    // digits: SwarmSize = c/4, MinFractNeigh = (c/2)%2, SelfAdj = c%2
    const std::vector<ConfigResult> results = fake_results(grid, [](std::uint64_t c) {
        const double swarm = static_cast<double>(c / 4);
        const double neigh = static_cast<double>((c / 2) % 2);
        const double self_adj = static_cast<double>(c % 2);
        return 100.0 * swarm + 1.0 * neigh + 10.0 * self_adj;
    });

    const std::vector<FixDecision> fixes = decide_fixes(grid, results);
    REQUIRE(fixes.size() == 2);
    // SwarmSize has influence 100 but is a population axis; SocialAdj has one
    // value; the rest rank SelfAdj (10) above MinFractNeigh (1).
    CHECK(fixes[0].name == "SelfAdj");
    CHECK(fixes[0].influence == 10.0);
    CHECK(std::get<double>(fixes[0].value) == 0.5);  // argmin group mean
    CHECK(fixes[1].name == "MinFractNeigh");
    CHECK(fixes[1].influence == 1.0);
    CHECK(std::get<double>(fixes[1].value) == 0.2);

    const ParameterGrid fixed = apply_fixes(grid, fixes);
    CHECK(grid_size(fixed) == 2);  // only SwarmSize still varies
    CHECK(fixed.parameters[1].values.size() == 1);
    CHECK(fixed.parameters[2].values.size() == 1);
    CHECK(std::get<double>(fixed.parameters[2].values[0]) == 0.5);
}

TEST_CASE("fix ties keep grid order and constant sweeps pin first values") {
    ParameterGrid grid;
    grid.method = Method::bbo;
    grid.parameters = {num_axis("Alpha", {0.9, 0.95}), num_axis("MutProb", {0.3, 0.4}),
                       num_axis("MutStepSize", {0.025, 0.05})};
    const std::vector<ConfigResult> flat = fake_results(grid, [](std::uint64_t) { return 2.0; });
    const std::vector<FixDecision> fixes = decide_fixes(grid, flat);
    REQUIRE(fixes.size() == 2);
    CHECK(fixes[0].name == "Alpha");
    CHECK(std::get<double>(fixes[0].value) == 0.9);
    CHECK(fixes[1].name == "MutProb");
    CHECK(std::get<double>(fixes[1].value) == 0.3);
    CHECK(fixes[0].influence == 0.0);

    std::vector<FixDecision> unknown(1);
    unknown[0].name = "Gamma";
    unknown[0].value = ParamValue{1.0};
    CHECK_THROWS_AS((void)apply_fixes(grid, unknown), std::invalid_argument);
}

TEST_CASE("single-candidate fixes cap below the limit") {
    ParameterGrid grid;
    grid.method = Method::pso;
    grid.parameters = {num_axis("SwarmSize", {3, 5}), num_axis("SelfAdj", {0.5, 1.0})};
    const std::vector<ConfigResult> results = fake_results(grid, [](std::uint64_t c) {
        return static_cast<double>(c % 2);
    });
    const std::vector<FixDecision> fixes = decide_fixes(grid, results);
    REQUIRE(fixes.size() == 1);  // only SelfAdj is eligible
    CHECK(fixes[0].name == "SelfAdj");
}

TEST_CASE("drops discard values far above the best group mean") {
    ParameterGrid grid;
    grid.method = Method::pso;
    grid.parameters = {num_axis("MinFractNeigh", {0.1, 0.2, 0.3, 0.4})};
    // group means 0, 10, 2.4, 2.6; threshold 0 + 0.25 * 10 = 2.5
    const std::vector<double> means{0.0, 10.0, 2.4, 2.6};
    const std::vector<ConfigResult> results = fake_results(grid, [&](std::uint64_t c) {
        return means[static_cast<std::size_t>(c)];
    });
    const std::vector<DropDecision> drops = decide_drops(grid, results);
    REQUIRE(drops.size() == 1);
    CHECK(drops[0].name == "MinFractNeigh");
    REQUIRE(drops[0].kept.size() == 2);
    CHECK(std::get<double>(drops[0].kept[0]) == 0.1);
    CHECK(std::get<double>(drops[0].kept[1]) == 0.3);
    REQUIRE(drops[0].dropped.size() == 2);
    CHECK(std::get<double>(drops[0].dropped[0]) == 0.2);
    CHECK(std::get<double>(drops[0].dropped[1]) == 0.4);

    const ParameterGrid reduced = apply_drops(grid, drops);
    REQUIRE(reduced.parameters[0].values.size() == 2);
    CHECK(std::get<double>(reduced.parameters[0].values[0]) == 0.1);
    CHECK(std::get<double>(reduced.parameters[0].values[1]) == 0.3);
}

TEST_CASE("the best two values always survive a drop") {
    ParameterGrid grid;
    grid.method = Method::pso;
    grid.parameters = {num_axis("SelfAdj", {0.5, 1.0, 1.49, 1.99})};
    const std::vector<double> means{0.0, 10.0, 10.0, 10.0};
    const std::vector<ConfigResult> results = fake_results(grid, [&](std::uint64_t c) {
        return means[static_cast<std::size_t>(c)];
    });
    const std::vector<DropDecision> drops = decide_drops(grid, results);
    REQUIRE(drops.size() == 1);
    REQUIRE(drops[0].kept.size() == 2);
    CHECK(std::get<double>(drops[0].kept[0]) == 0.5);
    CHECK(std::get<double>(drops[0].kept[1]) == 1.0);  // first of the tied worst
}

TEST_CASE("two-value axes and flat results never drop") {
    ParameterGrid pair;
    pair.method = Method::pso;
    pair.parameters = {num_axis("SelfAdj", {0.5, 1.99})};
    const std::vector<ConfigResult> lopsided =
        fake_results(pair, [](std::uint64_t c) { return c == 0 ? 0.0 : 1e9; });
    CHECK(decide_drops(pair, lopsided).empty());

    ParameterGrid wide;
    wide.method = Method::pso;
    wide.parameters = {num_axis("SelfAdj", {0.5, 1.0, 1.49, 1.99})};
    const std::vector<ConfigResult> flat =
        fake_results(wide, [](std::uint64_t) { return 5.0; });
    CHECK(decide_drops(wide, flat).empty());

    // The cut is relative to the spread, so a uniformly spaced slope keeps
    // exactly the best two values no matter how small the differences are.
    const std::vector<ConfigResult> sloped = fake_results(wide, [](std::uint64_t c) {
        return 5.0 + 0.01 * static_cast<double>(c);
    });
    const std::vector<DropDecision> slope_drops = decide_drops(wide, sloped);
    REQUIRE(slope_drops.size() == 1);
    CHECK(slope_drops[0].kept.size() == 2);
    CHECK(std::get<double>(slope_drops[0].kept[0]) == 0.5);
    CHECK(std::get<double>(slope_drops[0].kept[1]) == 1.0);

    std::vector<DropDecision> bad(1);
    bad[0].name = "SelfAdj";
    bad[0].kept = {ParamValue{123.0}};  // matches nothing
    CHECK_THROWS_AS((void)apply_drops(wide, bad), std::invalid_argument);
    bad[0].name = "Gamma";
    CHECK_THROWS_AS((void)apply_drops(wide, bad), std::invalid_argument);
}

TEST_CASE("validation repeats one config on the reserved seed stream") {
    const ObjectiveSpec spec = small_ackley();
    PsoConfig cfg;
    cfg.swarm_size = 3;
    const AssessmentParams params = tiny_params();
    const ValidationReport rep = validate(cfg, spec, params, 4, 1e-9, std::nullopt);
    CHECK(rep.n_runs == 4);
    REQUIRE(rep.finals.size() == 4);
    CHECK_FALSE(rep.optimum.has_value());
    CHECK_FALSE(rep.success_rate.has_value());

    for (int r = 0; r < 4; ++r) {
        const RunTrace t = run(OptimizerConfig{cfg}, spec, params.budget,
                               derive_seed(params.master_seed, kValidationPhase, 0,
                                           static_cast<std::uint64_t>(r)));
        CHECK(rep.finals[static_cast<std::size_t>(r)] == t.best(params.budget));
    }
}

TEST_CASE("validation scores success against a known optimum") {
    const ObjectiveSpec spec = constant_objective(7.0);
    PsoConfig cfg;
    cfg.swarm_size = 3;
    const AssessmentParams params = tiny_params();

    ValidationReport rep = validate(cfg, spec, params, 5, 0.0, 7.0);
    CHECK(rep.fc == 7.0);
    CHECK(rep.summary.min == 7.0);
    CHECK(rep.summary.max == 7.0);
    REQUIRE(rep.success_rate.has_value());
    CHECK(*rep.success_rate == 1.0);

    rep = validate(cfg, spec, params, 5, 0.5, 6.0);
    CHECK(*rep.success_rate == 0.0);

    rep = validate(cfg, spec, params, 1, 1e-9, 7.0);  // degenerate single run
    CHECK(rep.summary.median == 7.0);
    CHECK(*rep.success_rate == 1.0);

    CHECK_THROWS_AS((void)validate(cfg, spec, params, 0, 1e-9, 7.0), std::invalid_argument);
    CHECK_THROWS_AS((void)validate(cfg, spec, params, 5, -1.0, 7.0), std::invalid_argument);
}

TEST_CASE("single-sweep tuning picks the exact utility minimum") {
    const ObjectiveSpec spec = small_ackley();
    const ParameterGrid grid = tiny_pso_grid();
    TuneOptions options;
    options.strategy = 1;
    options.assessment = tiny_params();
    options.validation_runs = 4;

    const TuningReport report = tune(grid, spec, options);
    CHECK(report.strategy == 1);
    CHECK(report.method == Method::pso);
    REQUIRE(report.phases.size() == 1);
    CHECK(report.phases[0].phase == 0);
    REQUIRE(report.phases[0].results.size() == 4);

    double lowest = report.phases[0].results[0].utility.fc;
    std::uint64_t at = 0;
    for (const ConfigResult& r : report.phases[0].results) {
        if (r.utility.fc < lowest) {
            lowest = r.utility.fc;
            at = r.config_index;
        }
    }
    CHECK(report.best_fc == lowest);
    CHECK(report.best_config_index == at);
    CHECK(report.best_phase == 0);

    REQUIRE(report.validation.has_value());
    CHECK(report.validation->n_runs == 4);
    CHECK(report.runs_executed == 4 * 3 + 4);

    // Reported seeds are the canonical phase-0 stream.
    for (std::uint64_t c = 0; c < 4; ++c)
        for (std::uint64_t r = 0; r < 3; ++r)
            CHECK(report.phases[0].results[c].seeds[r] ==
                  derive_seed(options.assessment.master_seed, 0, c, r));
}

TEST_CASE("tie-breaking keeps the lowest configuration index") {
    const ObjectiveSpec spec = constant_objective(3.0);
    const ParameterGrid grid = tiny_pso_grid();
    TuneOptions options;
    options.strategy = 1;
    options.assessment = tiny_params();
    options.validation_runs = 0;

    const TuningReport report = tune(grid, spec, options);
    CHECK(report.best_config_index == 0);  // every config scores exactly 3
    CHECK(report.best_fc == 3.0);
    CHECK_FALSE(report.validation.has_value());
    CHECK(report.runs_executed == 4 * 3);
}

TEST_CASE("two-phase tuning fixes, drops and reassesses") {
    const ObjectiveSpec spec = small_ackley();
    ParameterGrid grid;
    grid.method = Method::pso;
    grid.parameters = {num_axis("SwarmSize", {3, 5}),
                       num_axis("MinFractNeigh", {0.25, 0.5, 0.75, 1.0}),
                       num_axis("SelfAdj", {0.5, 1.0, 1.49}), num_axis("SocialAdj", {1.25})};
    TuneOptions options;
    options.strategy = 2;
    options.assessment = tiny_params();
    options.assessment.n_runs = 2;
    options.validation_runs = 3;
    options.optimum = 0.0;

    const TuningReport report = tune(grid, spec, options);
    REQUIRE(report.phases.size() == 3);
    CHECK(report.phases[0].phase == 0);
    CHECK(report.phases[1].phase == 1);
    CHECK(report.phases[2].phase == 2);
    CHECK(report.best_phase == 2);

    // Phase 0 decides at most two non-population fixes.
    const std::vector<FixDecision>& fixes = report.phases[0].fixes;
    CHECK(fixes.size() <= 2);
    for (const FixDecision& fix : fixes) {
        CHECK_FALSE(is_population_parameter(fix.name));
        for (const GridParameter& p : report.phases[1].grid.parameters)
            if (p.name == fix.name) CHECK(p.values.size() == 1);
    }
    CHECK(report.phases[1].fixes.empty());
    CHECK(report.phases[2].drops.empty());

    // Grids only ever shrink, value by value.
    for (std::size_t k = 1; k < 3; ++k) {
        const ParameterGrid& prev = report.phases[k - 1].grid;
        const ParameterGrid& cur = report.phases[k].grid;
        REQUIRE(cur.parameters.size() == prev.parameters.size());
        for (std::size_t p = 0; p < cur.parameters.size(); ++p) {
            for (const ParamValue& v : cur.parameters[p].values) {
                const bool subset =
                    std::any_of(prev.parameters[p].values.begin(), prev.parameters[p].values.end(),
                                [&](const ParamValue& w) { return param_value_equal(v, w); });
                CHECK(subset);
            }
        }
    }

    std::uint64_t expected = 0;
    for (const PhaseReport& ph : report.phases)
        expected += grid_size(ph.grid) * 2;
    CHECK(report.runs_executed == expected + 3);
    REQUIRE(report.validation.has_value());
    CHECK(report.validation->success_rate.has_value());
}

TEST_CASE("a singleton grid degenerates to repeated assessment") {
    const ObjectiveSpec spec = small_ackley();
    ParameterGrid grid;
    grid.method = Method::pso;
    grid.parameters = {num_axis("SwarmSize", {3}), num_axis("SelfAdj", {1.0})};
    TuneOptions options;
    options.strategy = 2;
    options.assessment = tiny_params();
    options.validation_runs = 0;

    const TuningReport two = tune(grid, spec, options);
    REQUIRE(two.phases.size() == 3);
    CHECK(two.phases[0].fixes.empty());
    CHECK(two.phases[1].drops.empty());
    CHECK(two.runs_executed == 3 * 3);

    options.strategy = 1;
    const TuningReport one = tune(grid, spec, options);
    // Both strategies can only pick the single config.
    CHECK(std::get<PsoConfig>(two.best_config).swarm_size ==
          std::get<PsoConfig>(one.best_config).swarm_size);
    CHECK(std::get<PsoConfig>(two.best_config).self_adj ==
          std::get<PsoConfig>(one.best_config).self_adj);
    CHECK(two.best_config_index == 0);
    CHECK(one.best_config_index == 0);
}

TEST_CASE("two-value axes cannot shrink below two in phase two") {
    const ObjectiveSpec spec = small_ackley();
    ParameterGrid grid;
    grid.method = Method::pso;
    grid.parameters = {num_axis("SwarmSize", {3, 5}), num_axis("MinFractNeigh", {0.5, 1.0}),
                       num_axis("SelfAdj", {0.5, 1.49}), num_axis("SocialAdj", {0.5, 1.49})};
    TuneOptions options;
    options.strategy = 2;
    options.assessment = tiny_params();
    options.assessment.n_runs = 2;
    options.validation_runs = 0;

    const TuningReport report = tune(grid, spec, options);
    CHECK(report.phases[0].fixes.size() == 2);
    CHECK(report.phases[1].drops.empty());  // nothing left with > 2 values
    const std::uint64_t expected = 16 * 2 + 4 * 2 + 4 * 2;
    CHECK(report.runs_executed == expected);
}

TEST_CASE("tune validates its strategy and still propagates run failures") {
    const ObjectiveSpec spec = small_ackley();
    TuneOptions options;
    options.strategy = 3;
    CHECK_THROWS_AS((void)tune(tiny_pso_grid(), spec, options), std::invalid_argument);
}

}  // TEST_SUITE
