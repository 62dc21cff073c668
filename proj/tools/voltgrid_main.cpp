#include "voltgrid/errors.hpp"
#include "voltgrid/harness.hpp"
#include "voltgrid/plot.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"voltgrid - volt-var control experiments with a hybrid rules/SAC agent"};
    app.require_subcommand(1);

    // run
    auto* run_cmd = app.add_subcommand("run", "execute one seeded experiment");
    std::string mode = "hybrid";
    long steps = 5760;
    std::uint64_t seed = 1;
    std::string grid_config, agent_config, out_dir;
    long eval_after = -1;
    run_cmd->add_option("--mode", mode, "pure_sac | hybrid | rules_only")->capture_default_str();
    run_cmd->add_option("--steps", steps, "number of simulation steps")->capture_default_str();
    run_cmd->add_option("--seed", seed, "run seed")->capture_default_str();
    run_cmd->add_option("--grid-config", grid_config, "grid config file (key = value)");
    run_cmd->add_option("--agent-config", agent_config, "agent config file (key = value)");
    run_cmd->add_option("--out", out_dir, "output directory for run.csv and summary.txt")->required();
    run_cmd->add_option("--eval-after", eval_after,
                        "freeze learning after this step (default: steps/2 for pure_sac, never otherwise)");

    // plot
    auto* plot_cmd = app.add_subcommand("plot", "render performance and voltage panels from a run CSV");
    std::string csv_path, plot_out;
    plot_cmd->add_option("--csv", csv_path, "run.csv produced by 'run'")->required();
    plot_cmd->add_option("--out", plot_out, "output directory for the SVG files")->required();

    // compare
    auto* compare_cmd = app.add_subcommand("compare", "tabulate a baseline run against a hybrid run");
    std::string baseline_dir, hybrid_dir;
    compare_cmd->add_option("--baseline", baseline_dir, "output directory of the baseline run")->required();
    compare_cmd->add_option("--hybrid", hybrid_dir, "output directory of the hybrid run")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (run_cmd->parsed()) {
            voltgrid::RunConfig rc;
            rc.mode = voltgrid::parse_run_mode(mode);
            rc.steps = steps;
            rc.seed = seed;
            rc.grid_config_path = grid_config;
            rc.agent_config_path = agent_config;
            rc.out_dir = out_dir;
            if (eval_after >= 0) rc.eval_after = eval_after;
            const voltgrid::RunResult result = voltgrid::run(rc);
            const auto& s = result.summary;
            std::printf("mode=%s steps=%ld seed=%llu\n", voltgrid::to_string(s.mode).c_str(), s.steps,
                        static_cast<unsigned long long>(s.seed));
            std::printf("mean_performance=%.6f final_performance=%.6f\n", s.mean_performance,
                        s.final_performance);
            std::printf("violations=%ld solver_failures=%ld train_updates=%ld\n", s.violations,
                        s.solver_failures, s.train_updates);
            if (s.mode == voltgrid::RunMode::hybrid)
                std::printf("first_adaptive_step=%ld adaptive_steps=%ld tracked_rules=%.4f tracked_adaptive=%.4f\n",
                            s.first_adaptive_step, s.adaptive_steps, s.tracked_rules_final,
                            s.tracked_adaptive_final);
            std::printf("wrote %s/run.csv and %s/summary.txt\n", out_dir.c_str(), out_dir.c_str());
        } else if (plot_cmd->parsed()) {
            const auto files = voltgrid::emit_plots(csv_path, plot_out);
            for (const auto& f : files) std::printf("wrote %s\n", f.c_str());
        } else if (compare_cmd->parsed()) {
            const auto baseline = voltgrid::load_summary(baseline_dir);
            const auto hybrid = voltgrid::load_summary(hybrid_dir);
            std::cout << voltgrid::compare(baseline, hybrid).to_text();
        }
    } catch (const voltgrid::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
