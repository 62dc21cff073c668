#pragma once

#include "voltgrid/grid.hpp"
#include "voltgrid/world_model.hpp"

#include <optional>
#include <span>
#include <vector>

namespace voltgrid {

// First-order lag tracker for a policy's performance estimate:
//   value <- u                       on the first update,
//   value <- value + (u - value)/T   afterwards.
// The alternative running-mean reading (T = number of samples) sits behind
// the `running_mean` switch and is off by default.
struct TrackedEstimate {
    double value = 0.0;
    long update_count = 0;
    double time_constant = 10.0;
    bool running_mean = false;
};

TrackedEstimate pt1_update(TrackedEstimate est, double u);

// Number of updates a tracker fed the constant u needs before it exceeds a
// competitor frozen at u - delta + gap, i.e. the smallest n with
// delta * (1 - (1 - 1/T)^n) > gap. Empty when it can never happen.
std::optional<long> switch_latency_bound(double delta, double time_constant, double gap = 0.0,
                                         long max_updates = 1000000);

enum class PolicyChoice { rules, adaptive };

// Everything a policy needs to decide: the last published grid state and
// the demand that produced it. Owns copies so it stays valid after the
// environment moves on.
struct DecisionContext {
    GridState state;
    std::vector<double> base_p;
    std::vector<double> base_q;
    bool done = false;
};

class PolicyPort {
public:
    virtual ~PolicyPort() = default;
    virtual SetpointProposal propose(const DecisionContext& ctx) = 0;
    // Called once per step with whatever was actually applied.
    virtual void on_applied(const SetpointProposal& applied) { (void)applied; }
};

struct ApplyResult {
    GridState state;
    double performance = 0.0;
    std::vector<int> newly_disconnected;
    bool solver_failed = false;
    std::vector<double> base_p; // demand in force for this state
    std::vector<double> base_q;
};

class EnvironmentPort {
public:
    virtual ~EnvironmentPort() = default;
    virtual ApplyResult apply(const SetpointProposal& proposal) = 0;
};

// Receives the per-step experience fan-out; implementations encode the raw
// quantities into whatever the learner consumes.
class ExperienceSink {
public:
    virtual ~ExperienceSink() = default;
    virtual void record(const DecisionContext& ctx, const SetpointProposal& action, double reward,
                        const GridState& next_state, std::span<const double> next_base_p,
                        std::span<const double> next_base_q, bool done) = 0;
};

struct StepOutcome {
    PolicyChoice chosen = PolicyChoice::rules;
    SetpointProposal proposal_rules;
    SetpointProposal proposal_adaptive;
    double projected_perf_rules = 0.0;
    double projected_perf_adaptive = 0.0;
    double tracked_rules = 0.0;
    double tracked_adaptive = 0.0;
    double actual_performance = 0.0;
    std::vector<int> violations; // newly disconnected node ids
    bool solver_failed = false;
};

// Per-step arbiter between the rules policy and the adaptive policy.
// Queries both, scores both proposals through the world model, smooths the
// scores with a pt1 tracker each, applies the leader (rules wins ties) and
// fans out three experiences: both projections plus the realized outcome.
class Discriminator {
public:
    struct Config {
        double time_constant = 10.0;
        bool running_mean = false;
    };

    Discriminator(Config config, PolicyPort& rules, PolicyPort& adaptive, const ProposalScorer& scorer);

    StepOutcome step(const DecisionContext& ctx, EnvironmentPort& env, ExperienceSink* sink);

    const TrackedEstimate& tracked_rules() const { return tracked_rules_; }
    const TrackedEstimate& tracked_adaptive() const { return tracked_adaptive_; }

private:
    PolicyPort& rules_;
    PolicyPort& adaptive_;
    const ProposalScorer& scorer_;
    TrackedEstimate tracked_rules_;
    TrackedEstimate tracked_adaptive_;
};

} // namespace voltgrid
