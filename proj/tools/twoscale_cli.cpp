#include <CLI11.hpp>

#include <iostream>

#include "twoscale/oracle/complexity.hpp"
#include "twoscale/pipeline/pipeline.hpp"

using namespace twoscale;

int main(int argc, char** argv) {
    CLI::App app{"Two-time-scale battery management: bounds, policies and oracles"};
    app.require_subcommand(1);

    std::string config_path, out = "runs/default", mode;
    std::uint64_t seed = 0;
    int threads = -1, scenarios = 0;
    bool force = false, trajectories = false;
    long D = 7300, M = 48, I = 4;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON run configuration (defaults when omitted)");
        sub->add_option("--out", out, "output directory")->capture_default_str();
        sub->add_option("--seed", seed, "master seed (overrides the config)");
        sub->add_option("--threads", threads, "OpenMP threads (0: default)");
        sub->add_option("--mode", mode, "price, resource or both")->check(CLI::IsMember({"price", "resource", "both"}));
        sub->add_option("--scenarios", scenarios, "number of simulated scenarios")->check(CLI::PositiveNumber);
        sub->add_flag("--force", force, "accept artifacts produced under another config hash");
        sub->add_flag("--trajectories", trajectories, "dump per-day trajectories in simulate");
    };

    std::vector<std::pair<CLI::App*, std::string>> subs;
    for (const char* name : {"fit", "intraday", "bellman", "simulate", "report", "verify", "run"}) {
        auto* sub = app.add_subcommand(name, std::string(name) == "run" ? "all stages from fit to report"
                                                                          : std::string("pipeline stage ") + name);
        add_common(sub);
        subs.emplace_back(sub, name);
    }
    auto* cx = app.add_subcommand("complexity", "operation counts and relevance ratios");
    cx->add_option("--D", D, "number of days")->check(CLI::PositiveNumber);
    cx->add_option("--M", M, "fast steps per day")->check(CLI::PositiveNumber);
    cx->add_option("--I", I, "periodicity classes")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (cx->parsed()) {
        try {
            const auto e = oracle::complexity_estimate(D, M, I);
            std::cout << "D = " << D << ", M = " << M << ", I = " << I << "\n"
                      << "flat DP ops        " << e.flat_ops << "\n"
                      << "resource ops       " << e.resource_ops << "\n"
                      << "price ops          " << e.price_ops << "\n"
                      << "R^R = I/D + 1/M    " << e.ratio_R << "  (1/" << 1.0 / e.ratio_R << ")\n"
                      << "R^P = I/D + 10/M   " << e.ratio_P << "  (1/" << 1.0 / e.ratio_P << ")\n"
                      << "resource/flat ops  " << e.exact_ratio_R << "\n"
                      << "price/flat ops     " << e.exact_ratio_P << "\n";
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 2;
        }
        return 0;
    }

    try {
        pipeline::RunConfig cfg = config_path.empty() ? pipeline::RunConfig{} : pipeline::load_run_config(config_path);
        if (seed != 0) cfg.seed = seed;
        if (threads >= 0) cfg.threads = threads;
        if (!mode.empty()) cfg.mode = mode;
        if (scenarios > 0) cfg.scenarios = scenarios;
        if (trajectories) cfg.dump_trajectories = true;
        cfg.validate();
        pipeline::Options opt;
        opt.out = out;
        opt.force = force;
        for (const auto& [sub, name] : subs) {
            if (!sub->parsed()) continue;
            if (name == "run")
                pipeline::run_all(cfg, opt);
            else
                pipeline::run_stage(pipeline::stage_from_string(name), cfg, opt);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return pipeline::exit_code_for(e);
    }
    return 0;
}
