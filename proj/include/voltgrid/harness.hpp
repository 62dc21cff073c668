#pragma once

#include "voltgrid/discriminator.hpp"
#include "voltgrid/grid.hpp"
#include "voltgrid/sac.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace voltgrid {

enum class RunMode { pure_sac, hybrid, rules_only };

RunMode parse_run_mode(const std::string& name); // throws ConfigError
std::string to_string(RunMode mode);
std::string to_string(PolicyChoice choice);

struct AgentConfig {
    SacConfig sac;
    double droop_step = 0.1;
    double tracker_time_constant = 10.0;
    bool tracker_running_mean = false;

    static AgentConfig from_file(const std::string& path);
    static AgentConfig from_config(const KeyValueConfig& kv);
};

struct RunConfig {
    RunMode mode = RunMode::hybrid;
    long steps = 5760;
    std::uint64_t seed = 1;
    std::string grid_config_path; // empty = built-in defaults
    std::string agent_config_path;
    std::string out_dir; // empty = keep results in memory only
    // Step after which learning freezes and actions turn deterministic.
    // Unset: steps/2 for pure_sac, never for the other modes.
    std::optional<long> eval_after;
};

struct RunRecord {
    long step = 0;
    PolicyChoice chosen = PolicyChoice::rules;
    // NaN in modes without a discriminator.
    double projected_rules = 0.0, projected_adaptive = 0.0;
    double tracked_rules = 0.0, tracked_adaptive = 0.0;
    double actual_performance = 0.0;
    std::vector<double> voltages;
    std::vector<int> newly_disconnected;
    long cumulative_violations = 0;
};

struct RunSummary {
    RunMode mode = RunMode::hybrid;
    long steps = 0;
    std::uint64_t seed = 0;
    double mean_performance = 0.0;
    double final_performance = 0.0;
    long violations = 0;
    long solver_failures = 0;
    long first_adaptive_step = -1; // -1 = never chosen
    long adaptive_steps = 0;
    double tracked_rules_final = 0.0;
    double tracked_adaptive_final = 0.0;
    long train_updates = 0;
    std::string out_dir;
};

struct RunResult {
    RunSummary summary;
    std::vector<RunRecord> records; // one per step, 1..steps
};

// Executes one seeded experiment. With a non-empty out_dir also writes
// run.csv and summary.txt (byte-deterministic for fixed config and seed).
RunResult run(const RunConfig& config);

void write_csv(const std::string& path, const RunConfig& config, const GridConfig& grid_config,
               const std::vector<RunRecord>& records);
void write_summary(const std::string& path, const RunSummary& summary);
RunSummary load_summary(const std::string& dir); // reads <dir>/summary.txt

struct ComparisonReport {
    RunSummary baseline;
    RunSummary hybrid;
    std::string to_text() const;
};

ComparisonReport compare(const RunSummary& baseline, const RunSummary& hybrid);

} // namespace voltgrid
