#include "voltgrid/rules_policy.hpp"

#include <algorithm>
#include <stdexcept>

namespace voltgrid {

DroopController::DroopController(std::vector<double> step_sizes, std::vector<double> q_min,
                                 std::vector<double> q_max)
    : q_prev_(step_sizes.size(), 0.0),
      step_(std::move(step_sizes)),
      q_min_(std::move(q_min)),
      q_max_(std::move(q_max)) {
    if (step_.empty()) throw std::invalid_argument("droop controller needs at least one channel");
    if (q_min_.size() != step_.size() || q_max_.size() != step_.size())
        throw std::invalid_argument("droop bound dimensions mismatch");
    for (std::size_t i = 0; i < step_.size(); ++i) {
        if (step_[i] <= 0.0) throw std::invalid_argument("droop step sizes must be positive");
        if (q_min_[i] > q_max_[i]) throw std::invalid_argument("droop channel bounds inverted");
    }
}

DroopController DroopController::uniform(std::size_t channels, double step_size, double q_min, double q_max) {
    return DroopController(std::vector<double>(channels, step_size),
                           std::vector<double>(channels, q_min),
                           std::vector<double>(channels, q_max));
}

std::vector<double> DroopController::propose(std::span<const double> voltages,
                                             const std::vector<bool>& in_service) const {
    if (voltages.size() != q_prev_.size())
        throw std::invalid_argument("droop voltage vector dimension mismatch");
    if (!in_service.empty() && in_service.size() != q_prev_.size())
        throw std::invalid_argument("droop service mask dimension mismatch");
    std::vector<double> q(q_prev_.size());
    for (std::size_t i = 0; i < q_prev_.size(); ++i) {
        if (!in_service.empty() && !in_service[i]) {
            q[i] = q_prev_[i];
            continue;
        }
        const double raw = q_prev_[i] - step_[i] * (voltages[i] - 1.0);
        q[i] = std::clamp(raw, q_min_[i], q_max_[i]);
    }
    return q;
}

void DroopController::commit(std::span<const double> applied) {
    if (applied.size() != q_prev_.size())
        throw std::invalid_argument("droop commit dimension mismatch");
    std::copy(applied.begin(), applied.end(), q_prev_.begin());
}

RulesBenchmarkPolicy::RulesBenchmarkPolicy(const Grid& grid, double step_size)
    : droop_(DroopController::uniform(static_cast<std::size_t>(grid.node_count()), step_size, 0.0, 0.0)),
      p_hold_(static_cast<std::size_t>(grid.actuator_count()), 0.0),
      node_count_(grid.node_count()),
      actuator_count_(grid.actuator_count()) {
    // Net nodal injection range: generator q minus load q.
    std::vector<double> lo, hi, step;
    lo.reserve(static_cast<std::size_t>(node_count_));
    for (int node = 0; node < node_count_; ++node) {
        const int bus = node + 1;
        double gen_lo = 0.0, gen_hi = 0.0, load_lo = 0.0, load_hi = 0.0;
        for (const Actuator& a : grid.actuators()) {
            if (a.bus_id != bus) continue;
            if (a.kind == ActuatorKind::generator) {
                gen_lo = a.q_min;
                gen_hi = a.q_max;
            } else {
                load_lo = a.q_min;
                load_hi = a.q_max;
            }
        }
        lo.push_back(gen_lo - load_hi);
        hi.push_back(gen_hi - load_lo);
        step.push_back(step_size);
    }
    droop_ = DroopController(std::move(step), std::move(lo), std::move(hi));
}

SetpointProposal RulesBenchmarkPolicy::propose(const GridState& state) const {
    if (state.voltages.size() != static_cast<std::size_t>(node_count_ + 1))
        throw std::invalid_argument("rules policy: state bus count mismatch");
    std::vector<double> v(state.voltages.begin() + 1, state.voltages.end());
    std::vector<double> q_net = droop_.propose(v, state.in_service_flags);

    SetpointProposal sp;
    sp.p = p_hold_;
    sp.q.assign(static_cast<std::size_t>(actuator_count_), 0.0);
    // Actuator layout from build_benchmark: load 2*node, generator 2*node+1.
    for (int node = 0; node < node_count_; ++node) {
        const double half = q_net[static_cast<std::size_t>(node)] / 2.0;
        sp.q[static_cast<std::size_t>(2 * node)] = -half;   // load consumes the negative half
        sp.q[static_cast<std::size_t>(2 * node + 1)] = half; // generator injects the positive half
    }
    return sp;
}

void RulesBenchmarkPolicy::commit(const SetpointProposal& applied) {
    if (applied.p.size() != p_hold_.size() || applied.q.size() != p_hold_.size())
        throw std::invalid_argument("rules policy: commit dimension mismatch");
    p_hold_ = applied.p;
    std::vector<double> q_net(static_cast<std::size_t>(node_count_));
    for (int node = 0; node < node_count_; ++node) {
        const double load_q = applied.q[static_cast<std::size_t>(2 * node)];
        const double gen_q = applied.q[static_cast<std::size_t>(2 * node + 1)];
        q_net[static_cast<std::size_t>(node)] = gen_q - load_q;
    }
    droop_.commit(q_net);
}

} // namespace voltgrid
