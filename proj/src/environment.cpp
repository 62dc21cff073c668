#include "voltgrid/environment.hpp"

#include "voltgrid/power_flow.hpp"

namespace voltgrid {

Environment::Environment(const GridConfig& config, std::uint64_t scenario_seed,
                         PerformanceWeights weights)
    : grid_(Grid::build_benchmark(config)),
      profile_(config.scenario, config.node_count - 1, scenario_seed),
      weights_(weights) {
    reset();
}

void Environment::reset() {
    step_ = 0;
    violations_total_ = 0;
    solver_failures_ = 0;
    grid_.clear_grid_code_state();
    SetpointProposal zeros;
    zeros.p.assign(static_cast<std::size_t>(grid_.actuator_count()), 0.0);
    zeros.q.assign(static_cast<std::size_t>(grid_.actuator_count()), 0.0);
    profile_.demand_at(0, base_p_, base_q_);
    grid_.set_base_demand(base_p_, base_q_);
    ApplyResult initial = publish(zeros);
    last_state_ = initial.state;
    last_state_.step = 0;
}

ApplyResult Environment::publish(const SetpointProposal& proposal) {
    ApplyResult out;
    grid_.commit_setpoints(proposal);
    PowerFlowResult flow = grid_.solve();
    if (!flow.converged) {
        ++solver_failures_;
        out.solver_failed = true;
        out.state.voltages.assign(static_cast<std::size_t>(grid_.bus_count()), 0.0);
        out.state.in_service_flags = grid_.node_service_flags();
        out.performance = 0.0;
    } else {
        EnforcementResult enforced = grid_.enforce_grid_code(flow.state, step_);
        if (!enforced.newly_disconnected.empty()) {
            violations_total_ += static_cast<long>(enforced.newly_disconnected.size());
            out.newly_disconnected = enforced.newly_disconnected;
            PowerFlowResult after = grid_.solve();
            if (!after.converged) {
                ++solver_failures_;
                out.solver_failed = true;
                out.state.voltages.assign(static_cast<std::size_t>(grid_.bus_count()), 0.0);
                out.state.in_service_flags = grid_.node_service_flags();
                out.performance = 0.0;
            } else {
                out.state = std::move(after.state);
            }
        } else {
            out.state = std::move(enforced.state);
        }
        if (!out.solver_failed)
            out.performance = performance(out.state, observe_all(out.state), weights_);
    }
    out.state.step = step_;
    out.base_p = base_p_;
    out.base_q = base_q_;
    return out;
}

ApplyResult Environment::apply(const SetpointProposal& proposal) {
    ++step_;
    grid_.update_cooldowns(step_);
    profile_.demand_at(step_, base_p_, base_q_);
    grid_.set_base_demand(base_p_, base_q_);
    ApplyResult out = publish(proposal);
    last_state_ = out.state;
    return out;
}

DecisionContext Environment::context(bool done) const {
    DecisionContext ctx;
    ctx.state = last_state_;
    ctx.base_p.assign(base_p_.begin(), base_p_.end());
    ctx.base_q.assign(base_q_.begin(), base_q_.end());
    ctx.done = done;
    return ctx;
}

} // namespace voltgrid
