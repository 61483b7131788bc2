#include "CLI11.hpp"

#include "tunelab/campaign.hpp"
#include "tunelab/text.hpp"

#include <cstdint>
#include <iostream>
#include <string>

namespace {

struct CommonArgs {
    std::string config;
    std::uint64_t seed = 0;
    int workers = 0;
    int strategy = 0;
    std::string out;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* workers_opt = nullptr;
    CLI::Option* strategy_opt = nullptr;
    CLI::Option* out_opt = nullptr;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool tuning) {
    cmd->add_option("--config", args.config, "campaign config file (JSON)")->required();
    args.seed_opt = cmd->add_option("--seed", args.seed, "override the master seed");
    args.workers_opt = cmd->add_option("--workers", args.workers, "override the worker count");
    args.out_opt = cmd->add_option("--out", args.out, "override the output directory");
    if (tuning)
        args.strategy_opt = cmd->add_option("--strategy", args.strategy, "tuning strategy (1 or 2)");
}

void apply_overrides(tunelab::CampaignConfig& campaign, const CommonArgs& args) {
    if (args.seed_opt && args.seed_opt->count() > 0) campaign.master_seed = args.seed;
    if (args.workers_opt && args.workers_opt->count() > 0) {
        if (args.workers < 1) throw tunelab::ConfigError("--workers must be >= 1");
        campaign.workers = args.workers;
    }
    if (args.strategy_opt && args.strategy_opt->count() > 0) {
        if (args.strategy != 1 && args.strategy != 2)
            throw tunelab::ConfigError("--strategy must be 1 or 2");
        campaign.strategy = args.strategy;
    }
    if (args.out_opt && args.out_opt->count() > 0) campaign.out_dir = args.out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tunelab: discrete-space metaheuristic parameter tuning"};
    app.require_subcommand(1);

    CLI::App* cmd_run = app.add_subcommand("run", "one optimizer run, trace and report");
    CLI::App* cmd_tune = app.add_subcommand("tune", "sweep parameter grids and pick winners");
    CLI::App* cmd_oracle = app.add_subcommand("oracle", "exhaustive optimum of the problem");
    CLI::App* cmd_report = app.add_subcommand("report", "cross-method charts from tuning reports");
    CommonArgs run_args, tune_args, oracle_args, report_args;
    add_common(cmd_run, run_args, false);
    add_common(cmd_tune, tune_args, true);
    add_common(cmd_oracle, oracle_args, false);
    add_common(cmd_report, report_args, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    const CommonArgs& args = cmd_run->parsed()      ? run_args
                             : cmd_tune->parsed()   ? tune_args
                             : cmd_oracle->parsed() ? oracle_args
                                                    : report_args;
    try {
        tunelab::CampaignConfig campaign = tunelab::load_campaign(args.config);
        apply_overrides(campaign, args);

        if (cmd_run->parsed()) {
            tunelab::cmd_run(campaign);
            std::cout << "run: wrote run_trace.csv, run_report.json, run_apc.svg to "
                      << campaign.out_dir.string() << "\n";
        } else if (cmd_tune->parsed()) {
            tunelab::cmd_tune(campaign);
            std::cout << "tune: wrote reports for " << campaign.tune_grids.size()
                      << " method(s) to " << campaign.out_dir.string() << "\n";
        } else if (cmd_oracle->parsed()) {
            tunelab::cmd_oracle(campaign);
            std::cout << "oracle: wrote oracle.json to " << campaign.out_dir.string() << "\n";
        } else if (cmd_report->parsed()) {
            tunelab::cmd_report(campaign);
            std::cout << "report: wrote compare_fc_box.svg, compare_apc.svg to "
                      << campaign.out_dir.string() << "\n";
        }
        return 0;
    } catch (const tunelab::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
