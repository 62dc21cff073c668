#include "voltgrid/discriminator.hpp"

#include <cmath>
#include <stdexcept>

namespace voltgrid {

TrackedEstimate pt1_update(TrackedEstimate est, double u) {
    if (!std::isfinite(u)) throw std::invalid_argument("pt1_update: input must be finite");
    if (est.update_count == 0) {
        est.value = u;
    } else {
        const double t = est.running_mean ? static_cast<double>(est.update_count + 1) : est.time_constant;
        est.value += (u - est.value) / t;
    }
    ++est.update_count;
    return est;
}

std::optional<long> switch_latency_bound(double delta, double time_constant, double gap,
                                         long max_updates) {
    if (time_constant < 1.0) throw std::invalid_argument("time constant must be >= 1");
    // Seeded past its first update so the lag branch applies throughout.
    TrackedEstimate chaser{0.0, 1, time_constant, false};
    for (long n = 1; n <= max_updates; ++n) {
        chaser = pt1_update(chaser, delta);
        if (chaser.value > gap) return n;
    }
    return std::nullopt;
}

Discriminator::Discriminator(Config config, PolicyPort& rules, PolicyPort& adaptive,
                             const ProposalScorer& scorer)
    : rules_(rules), adaptive_(adaptive), scorer_(scorer) {
    tracked_rules_.time_constant = config.time_constant;
    tracked_rules_.running_mean = config.running_mean;
    tracked_adaptive_.time_constant = config.time_constant;
    tracked_adaptive_.running_mean = config.running_mean;
}

StepOutcome Discriminator::step(const DecisionContext& ctx, EnvironmentPort& env, ExperienceSink* sink) {
    StepOutcome out;
    out.proposal_rules = rules_.propose(ctx);
    out.proposal_adaptive = adaptive_.propose(ctx);
    if (out.proposal_rules.size() != out.proposal_adaptive.size())
        throw std::invalid_argument("policy proposals disagree on actuator count");

    const Projection proj_rules = scorer_.project(out.proposal_rules);
    const Projection proj_adaptive = scorer_.project(out.proposal_adaptive);
    out.projected_perf_rules = proj_rules.performance;
    out.projected_perf_adaptive = proj_adaptive.performance;

    tracked_rules_ = pt1_update(tracked_rules_, proj_rules.performance);
    tracked_adaptive_ = pt1_update(tracked_adaptive_, proj_adaptive.performance);
    out.tracked_rules = tracked_rules_.value;
    out.tracked_adaptive = tracked_adaptive_.value;

    // Strictly greater: ties fall back to the controller.
    out.chosen = tracked_adaptive_.value > tracked_rules_.value ? PolicyChoice::adaptive
                                                                : PolicyChoice::rules;
    const SetpointProposal& chosen_proposal =
        out.chosen == PolicyChoice::adaptive ? out.proposal_adaptive : out.proposal_rules;

    ApplyResult applied = env.apply(chosen_proposal);
    out.actual_performance = applied.performance;
    out.violations = applied.newly_disconnected;
    out.solver_failed = applied.solver_failed;

    if (sink != nullptr) {
        // Fixed fan-out order: rules projection, adaptive projection, then
        // the realized transition. Projected samples carry the context's
        // demand (the replica knew nothing newer); the realized sample
        // carries the demand that actually produced the next state.
        sink->record(ctx, out.proposal_rules, proj_rules.performance, proj_rules.state,
                     ctx.base_p, ctx.base_q, ctx.done);
        sink->record(ctx, out.proposal_adaptive, proj_adaptive.performance, proj_adaptive.state,
                     ctx.base_p, ctx.base_q, ctx.done);
        sink->record(ctx, chosen_proposal, applied.performance, applied.state, applied.base_p,
                     applied.base_q, ctx.done);
    }

    rules_.on_applied(chosen_proposal);
    adaptive_.on_applied(chosen_proposal);
    return out;
}

} // namespace voltgrid
