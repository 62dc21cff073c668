#include "voltgrid/harness.hpp"

#include "voltgrid/codec.hpp"
#include "voltgrid/csv.hpp"
#include "voltgrid/environment.hpp"
#include "voltgrid/errors.hpp"
#include "voltgrid/rng.hpp"
#include "voltgrid/rules_policy.hpp"
#include "voltgrid/world_model.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace voltgrid {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

const std::set<std::string> kAgentConfigKeys = {
    "sac_hidden_dims", "sac_learning_rate", "sac_warmup_steps", "sac_train_every",
    "sac_discount", "sac_batch_size", "sac_buffer_capacity", "sac_target_smoothing",
    "sac_entropy_temperature", "sac_momentum", "sac_actor_momentum", "sac_init_scale", "sac_log_std_init",
    "sac_log_std_min", "sac_log_std_max", "sac_reward_baseline",
    "droop_step", "tracker_time_constant", "tracker_running_mean",
};

class RulesPort final : public PolicyPort {
public:
    explicit RulesPort(const Grid& grid, double step_size) : policy_(grid, step_size) {}

    SetpointProposal propose(const DecisionContext& ctx) override { return policy_.propose(ctx.state); }
    void on_applied(const SetpointProposal& applied) override { policy_.commit(applied); }

private:
    RulesBenchmarkPolicy policy_;
};

class SacPort final : public PolicyPort {
public:
    SacPort(SacAgent& agent, const ObsCodec& obs, const ActionCodec& act)
        : agent_(agent), obs_(obs), act_(act) {}

    SetpointProposal propose(const DecisionContext& ctx) override {
        const auto features = obs_.encode(ctx.state, ctx.base_p, ctx.base_q);
        return act_.decode(agent_.propose(features, stochastic_));
    }

    void set_stochastic(bool on) { stochastic_ = on; }

private:
    SacAgent& agent_;
    const ObsCodec& obs_;
    const ActionCodec& act_;
    bool stochastic_ = true;
};

class SacSink final : public ExperienceSink {
public:
    SacSink(SacAgent& agent, const ObsCodec& obs, const ActionCodec& act)
        : agent_(agent), obs_(obs), act_(act) {}

    void record(const DecisionContext& ctx, const SetpointProposal& action, double reward,
                const GridState& next_state, std::span<const double> next_base_p,
                std::span<const double> next_base_q, bool done) override {
        Experience e;
        e.state = obs_.encode(ctx.state, ctx.base_p, ctx.base_q);
        e.action = act_.encode(action);
        e.reward = reward;
        e.next_state = obs_.encode(next_state, next_base_p, next_base_q);
        e.done = done;
        agent_.record(std::move(e));
    }

private:
    SacAgent& agent_;
    const ObsCodec& obs_;
    const ActionCodec& act_;
};

GridConfig load_grid_config(const RunConfig& rc) {
    if (rc.grid_config_path.empty()) return GridConfig{};
    return GridConfig::from_file(rc.grid_config_path);
}

AgentConfig load_agent_config(const RunConfig& rc) {
    if (rc.agent_config_path.empty()) return AgentConfig{};
    return AgentConfig::from_file(rc.agent_config_path);
}

void finish_summary(RunSummary& summary, const std::vector<RunRecord>& records,
                    const Environment& env) {
    double sum = 0.0;
    for (const RunRecord& r : records) sum += r.actual_performance;
    summary.steps = static_cast<long>(records.size());
    summary.mean_performance = records.empty() ? 0.0 : sum / static_cast<double>(records.size());
    summary.final_performance = records.empty() ? 0.0 : records.back().actual_performance;
    summary.violations = env.violations_total();
    summary.solver_failures = env.solver_failures();
}

} // namespace

RunMode parse_run_mode(const std::string& name) {
    if (name == "pure_sac") return RunMode::pure_sac;
    if (name == "hybrid") return RunMode::hybrid;
    if (name == "rules_only") return RunMode::rules_only;
    throw ConfigError("unknown run mode '" + name + "' (expected pure_sac, hybrid or rules_only)");
}

std::string to_string(RunMode mode) {
    switch (mode) {
    case RunMode::pure_sac: return "pure_sac";
    case RunMode::hybrid: return "hybrid";
    case RunMode::rules_only: return "rules_only";
    }
    return "?";
}

std::string to_string(PolicyChoice choice) {
    return choice == PolicyChoice::adaptive ? "adaptive" : "rules";
}

AgentConfig AgentConfig::from_file(const std::string& path) {
    return from_config(KeyValueConfig::from_file(path));
}

AgentConfig AgentConfig::from_config(const KeyValueConfig& kv) {
    kv.require_known(kAgentConfigKeys);
    AgentConfig c;
    if (kv.has("sac_hidden_dims")) {
        c.sac.hidden_dims.clear();
        std::istringstream in(kv.get_string("sac_hidden_dims", ""));
        int d = 0;
        while (in >> d) {
            if (d < 1) throw ConfigError("sac_hidden_dims entries must be positive");
            c.sac.hidden_dims.push_back(d);
        }
        if (c.sac.hidden_dims.empty()) throw ConfigError("sac_hidden_dims must list at least one layer");
    }
    c.sac.learning_rate = kv.get_double("sac_learning_rate", c.sac.learning_rate);
    c.sac.warmup_steps = kv.get_long("sac_warmup_steps", c.sac.warmup_steps);
    c.sac.train_every = kv.get_long("sac_train_every", c.sac.train_every);
    c.sac.discount = kv.get_double("sac_discount", c.sac.discount);
    c.sac.batch_size = static_cast<int>(kv.get_long("sac_batch_size", c.sac.batch_size));
    c.sac.buffer_capacity = static_cast<std::size_t>(kv.get_long("sac_buffer_capacity",
                                                                 static_cast<long>(c.sac.buffer_capacity)));
    c.sac.target_smoothing = kv.get_double("sac_target_smoothing", c.sac.target_smoothing);
    c.sac.entropy_temperature = kv.get_double("sac_entropy_temperature", c.sac.entropy_temperature);
    c.sac.momentum = kv.get_double("sac_momentum", c.sac.momentum);
    c.sac.actor_momentum = kv.get_double("sac_actor_momentum", c.sac.actor_momentum);
    c.sac.init_scale = kv.get_double("sac_init_scale", c.sac.init_scale);
    c.sac.log_std_init = kv.get_double("sac_log_std_init", c.sac.log_std_init);
    c.sac.log_std_min = kv.get_double("sac_log_std_min", c.sac.log_std_min);
    c.sac.log_std_max = kv.get_double("sac_log_std_max", c.sac.log_std_max);
    if (c.sac.log_std_min > c.sac.log_std_max) throw ConfigError("sac_log_std bounds inverted");
    c.sac.reward_baseline = kv.get_double("sac_reward_baseline", c.sac.reward_baseline);
    c.droop_step = kv.get_double("droop_step", c.droop_step);
    c.tracker_time_constant = kv.get_double("tracker_time_constant", c.tracker_time_constant);
    c.tracker_running_mean = kv.get_bool("tracker_running_mean", c.tracker_running_mean);
    if (c.droop_step <= 0.0) throw ConfigError("droop_step must be positive");
    if (c.tracker_time_constant < 1.0) throw ConfigError("tracker_time_constant must be >= 1");
    return c;
}

RunResult run(const RunConfig& rc) {
    if (rc.steps < 1) throw ConfigError("steps must be positive");
    const GridConfig grid_config = load_grid_config(rc);
    AgentConfig agent_config = load_agent_config(rc);
    agent_config.sac.seed = mix_seed(rc.seed, 2);

    RunResult result;
    result.summary.mode = rc.mode;
    result.summary.seed = rc.seed;
    result.summary.out_dir = rc.out_dir;
    result.summary.tracked_rules_final = kNan;
    result.summary.tracked_adaptive_final = kNan;
    result.records.reserve(static_cast<std::size_t>(rc.steps));

    Environment env(grid_config, mix_seed(rc.seed, 1));

    auto base_record = [&](long step, double performance, const ApplyResult& applied) {
        RunRecord rec;
        rec.step = step;
        rec.actual_performance = performance;
        rec.voltages = applied.state.voltages;
        rec.newly_disconnected = applied.newly_disconnected;
        rec.cumulative_violations = env.violations_total();
        rec.projected_rules = kNan;
        rec.projected_adaptive = kNan;
        rec.tracked_rules = kNan;
        rec.tracked_adaptive = kNan;
        return rec;
    };

    if (rc.mode == RunMode::rules_only) {
        RulesBenchmarkPolicy rules(env.grid(), agent_config.droop_step);
        for (long t = 1; t <= rc.steps; ++t) {
            const SetpointProposal proposal = rules.propose(env.state());
            const ApplyResult applied = env.apply(proposal);
            rules.commit(proposal);
            RunRecord rec = base_record(t, applied.performance, applied);
            rec.chosen = PolicyChoice::rules;
            result.records.push_back(std::move(rec));
        }
    } else if (rc.mode == RunMode::pure_sac) {
        const ObsCodec obs_codec(grid_config.node_count, env.profile().peak_p(), env.profile().peak_q());
        const ActionCodec act_codec(env.grid());
        SacAgent agent(obs_codec.dim(), act_codec.dim(), agent_config.sac);
        const long eval_after = rc.eval_after.value_or(rc.steps / 2);
        for (long t = 1; t <= rc.steps; ++t) {
            const bool learning = t <= eval_after;
            const auto obs = obs_codec.encode(env.state(), env.base_p(), env.base_q());
            const auto action = agent.propose(obs, learning);
            const ApplyResult applied = env.apply(act_codec.decode(action));
            Experience e;
            e.state = obs;
            e.action = action;
            e.reward = applied.performance;
            e.next_state = obs_codec.encode(applied.state, applied.base_p, applied.base_q);
            e.done = t == rc.steps;
            agent.record(std::move(e));
            if (learning && agent.train_step(t)) ++result.summary.train_updates;
            RunRecord rec = base_record(t, applied.performance, applied);
            rec.chosen = PolicyChoice::adaptive;
            result.records.push_back(std::move(rec));
        }
    } else {
        const ObsCodec obs_codec(grid_config.node_count, env.profile().peak_p(), env.profile().peak_q());
        const ActionCodec act_codec(env.grid());
        SacAgent agent(obs_codec.dim(), act_codec.dim(), agent_config.sac);
        WorldModel world(grid_config, env.weights());
        RulesPort rules(env.grid(), agent_config.droop_step);
        SacPort adaptive(agent, obs_codec, act_codec);
        SacSink sink(agent, obs_codec, act_codec);
        Discriminator::Config dc;
        dc.time_constant = agent_config.tracker_time_constant;
        dc.running_mean = agent_config.tracker_running_mean;
        Discriminator discriminator(dc, rules, adaptive, world);

        const long eval_after = rc.eval_after.value_or(rc.steps + 1); // hybrid keeps learning
        world.synchronize(env.state(), env.base_p(), env.base_q());
        for (long t = 1; t <= rc.steps; ++t) {
            const bool learning = t <= eval_after;
            adaptive.set_stochastic(learning);
            const DecisionContext ctx = env.context(t == rc.steps);
            const StepOutcome outcome = discriminator.step(ctx, env, &sink);
            if (learning && agent.train_step(t)) ++result.summary.train_updates;
            world.synchronize(env.state(), env.base_p(), env.base_q());

            if (outcome.chosen == PolicyChoice::adaptive) {
                ++result.summary.adaptive_steps;
                if (result.summary.first_adaptive_step < 0) result.summary.first_adaptive_step = t;
            }
            RunRecord rec;
            rec.step = t;
            rec.chosen = outcome.chosen;
            rec.projected_rules = outcome.projected_perf_rules;
            rec.projected_adaptive = outcome.projected_perf_adaptive;
            rec.tracked_rules = outcome.tracked_rules;
            rec.tracked_adaptive = outcome.tracked_adaptive;
            rec.actual_performance = outcome.actual_performance;
            rec.voltages = env.state().voltages;
            rec.newly_disconnected = outcome.violations;
            rec.cumulative_violations = env.violations_total();
            result.records.push_back(std::move(rec));
        }
        result.summary.tracked_rules_final = discriminator.tracked_rules().value;
        result.summary.tracked_adaptive_final = discriminator.tracked_adaptive().value;
    }

    finish_summary(result.summary, result.records, env);

    if (!rc.out_dir.empty()) {
        std::filesystem::create_directories(rc.out_dir);
        const auto dir = std::filesystem::path(rc.out_dir);
        write_csv((dir / "run.csv").string(), rc, grid_config, result.records);
        write_summary((dir / "summary.txt").string(), result.summary);
    }
    return result;
}

void write_csv(const std::string& path, const RunConfig& config, const GridConfig& grid_config,
               const std::vector<RunRecord>& records) {
    std::ofstream out(path, std::ios::binary); // '\n' endings on every platform
    if (!out) throw std::runtime_error("cannot write CSV: " + path);
    const bool hybrid = config.mode == RunMode::hybrid;
    const std::size_t buses = records.empty() ? static_cast<std::size_t>(grid_config.node_count)
                                              : records.front().voltages.size();
    out << "# voltgrid-run-v1 mode=" << to_string(config.mode) << " steps=" << config.steps
        << " seed=" << config.seed << " buses=" << buses << " band=" << format_double(grid_config.band_lo)
        << ':' << format_double(grid_config.band_hi) << "\n";
    out << "step,chosen_policy";
    if (hybrid) out << ",projected_perf_rules,projected_perf_adaptive,tracked_rules,tracked_adaptive";
    out << ",actual_performance";
    for (std::size_t b = 0; b < buses; ++b) out << ",v_bus" << b;
    out << ",newly_disconnected,cumulative_violations\n";
    for (const RunRecord& r : records) {
        out << r.step << ',' << to_string(r.chosen);
        if (hybrid) {
            out << ',' << format_double(r.projected_rules) << ',' << format_double(r.projected_adaptive)
                << ',' << format_double(r.tracked_rules) << ',' << format_double(r.tracked_adaptive);
        }
        out << ',' << format_double(r.actual_performance);
        for (double v : r.voltages) out << ',' << format_double(v);
        out << ',';
        for (std::size_t i = 0; i < r.newly_disconnected.size(); ++i) {
            if (i > 0) out << ';';
            out << r.newly_disconnected[i];
        }
        out << ',' << r.cumulative_violations << "\n";
    }
    if (!out) throw std::runtime_error("CSV write failed: " + path);
}

void write_summary(const std::string& path, const RunSummary& s) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write summary: " + path);
    out << "schema = voltgrid-summary-v1\n";
    out << "mode = " << to_string(s.mode) << "\n";
    out << "steps = " << s.steps << "\n";
    out << "seed = " << s.seed << "\n";
    out << "mean_performance = " << format_double(s.mean_performance) << "\n";
    out << "final_performance = " << format_double(s.final_performance) << "\n";
    out << "violations = " << s.violations << "\n";
    out << "solver_failures = " << s.solver_failures << "\n";
    out << "first_adaptive_step = " << s.first_adaptive_step << "\n";
    out << "adaptive_steps = " << s.adaptive_steps << "\n";
    out << "tracked_rules_final = " << format_double(s.tracked_rules_final) << "\n";
    out << "tracked_adaptive_final = " << format_double(s.tracked_adaptive_final) << "\n";
    out << "train_updates = " << s.train_updates << "\n";
}

RunSummary load_summary(const std::string& dir) {
    const auto path = (std::filesystem::path(dir) / "summary.txt").string();
    KeyValueConfig kv = KeyValueConfig::from_file(path);
    if (kv.get_string("schema", "") != "voltgrid-summary-v1")
        throw ConfigError(path + ": not a voltgrid summary file");
    RunSummary s;
    s.mode = parse_run_mode(kv.get_string("mode", "hybrid"));
    s.steps = kv.get_long("steps", 0);
    s.seed = static_cast<std::uint64_t>(kv.get_long("seed", 0));
    s.mean_performance = kv.get_double("mean_performance", 0.0);
    s.final_performance = kv.get_double("final_performance", 0.0);
    s.violations = kv.get_long("violations", 0);
    s.solver_failures = kv.get_long("solver_failures", 0);
    s.first_adaptive_step = kv.get_long("first_adaptive_step", -1);
    s.adaptive_steps = kv.get_long("adaptive_steps", 0);
    s.tracked_rules_final = kv.get_double("tracked_rules_final", kNan);
    s.tracked_adaptive_final = kv.get_double("tracked_adaptive_final", kNan);
    s.train_updates = kv.get_long("train_updates", 0);
    s.out_dir = dir;
    return s;
}

std::string ComparisonReport::to_text() const {
    std::ostringstream out;
    auto row = [&out](const std::string& label, const std::string& a, const std::string& b) {
        out << label;
        for (std::size_t i = label.size(); i < 28; ++i) out << ' ';
        out << a;
        for (std::size_t i = a.size(); i < 16; ++i) out << ' ';
        out << b << "\n";
    };
    row("metric", to_string(baseline.mode), to_string(hybrid.mode));
    row("steps", std::to_string(baseline.steps), std::to_string(hybrid.steps));
    row("seed", std::to_string(baseline.seed), std::to_string(hybrid.seed));
    row("violations", std::to_string(baseline.violations), std::to_string(hybrid.violations));
    row("mean_performance", format_double(baseline.mean_performance), format_double(hybrid.mean_performance));
    row("final_performance", format_double(baseline.final_performance), format_double(hybrid.final_performance));
    row("solver_failures", std::to_string(baseline.solver_failures), std::to_string(hybrid.solver_failures));
    row("first_adaptive_step", "-", std::to_string(hybrid.first_adaptive_step));
    row("adaptive_steps", "-", std::to_string(hybrid.adaptive_steps));
    return out.str();
}

ComparisonReport compare(const RunSummary& baseline, const RunSummary& hybrid) {
    return ComparisonReport{baseline, hybrid};
}

} // namespace voltgrid
