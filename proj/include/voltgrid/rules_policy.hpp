#pragma once

#include "voltgrid/grid.hpp"

#include <span>
#include <vector>

namespace voltgrid {

// Incremental var controller: one reactive channel per controlled quantity,
//   q(t+1) = clamp(q(t) - D * (V(t) - 1), [q_min, q_max]).
// propose() is pure; the internal state only moves on commit(), and commit
// takes the setpoints that were actually applied (which may come from the
// other policy).
class DroopController {
public:
    DroopController(std::vector<double> step_sizes, std::vector<double> q_min, std::vector<double> q_max);
    static DroopController uniform(std::size_t channels, double step_size, double q_min, double q_max);

    std::size_t channels() const { return q_prev_.size(); }
    std::span<const double> last_committed() const { return q_prev_; }

    // `in_service` masks channels whose correction is frozen (empty = all on).
    std::vector<double> propose(std::span<const double> voltages,
                                const std::vector<bool>& in_service = {}) const;
    void commit(std::span<const double> applied);

private:
    std::vector<double> q_prev_;
    std::vector<double> step_;
    std::vector<double> q_min_, q_max_;
};

// Maps the droop controller onto the benchmark grid: one channel per
// controlled node commanding the net nodal reactive injection, realized by
// an equal split between the node's generator (+q/2) and load (-q/2).
// Real-power entries hold the last applied values (initially zero).
class RulesBenchmarkPolicy {
public:
    explicit RulesBenchmarkPolicy(const Grid& grid, double step_size = 0.1);

    SetpointProposal propose(const GridState& state) const;
    void commit(const SetpointProposal& applied);

    const DroopController& droop() const { return droop_; }

private:
    DroopController droop_;      // per controlled node, net injection
    std::vector<double> p_hold_; // per actuator
    int node_count_;
    int actuator_count_;
};

} // namespace voltgrid
