#pragma once

#include "voltgrid/discriminator.hpp"
#include "voltgrid/grid.hpp"
#include "voltgrid/reward.hpp"
#include "voltgrid/scenario.hpp"

#include <cstdint>

namespace voltgrid {

// The real grid plus its exogenous demand: applies one proposal per step,
// solves, enforces the grid code (one pass, then a re-solve if anything
// tripped) and publishes the resulting state and utility. One instance per
// run; instances are independent.
class Environment : public EnvironmentPort {
public:
    Environment(const GridConfig& config, std::uint64_t scenario_seed,
                PerformanceWeights weights = {});

    // Computes step 0: demand at step 0, all setpoints zero.
    void reset();

    ApplyResult apply(const SetpointProposal& proposal) override;

    DecisionContext context(bool done = false) const;

    const Grid& grid() const { return grid_; }
    const LoadProfile& profile() const { return profile_; }
    const GridState& state() const { return last_state_; }
    std::span<const double> base_p() const { return base_p_; }
    std::span<const double> base_q() const { return base_q_; }
    long step_index() const { return step_; }
    long violations_total() const { return violations_total_; }
    long solver_failures() const { return solver_failures_; }
    const PerformanceWeights& weights() const { return weights_; }

private:
    ApplyResult publish(const SetpointProposal& proposal);

    Grid grid_;
    LoadProfile profile_;
    PerformanceWeights weights_;
    GridState last_state_;
    std::vector<double> base_p_, base_q_;
    long step_ = 0;
    long violations_total_ = 0;
    long solver_failures_ = 0;
};

} // namespace voltgrid
