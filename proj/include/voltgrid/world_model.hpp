#pragma once

#include "voltgrid/grid.hpp"
#include "voltgrid/reward.hpp"

#include <span>
#include <vector>

namespace voltgrid {

// A proposal scored against the agent's internal model: predicted state
// plus the utility it would earn there.
struct Projection {
    GridState state;
    double performance = 0.0;
    bool converged = true;
};

// Anything able to score a proposal before it touches the environment.
class ProposalScorer {
public:
    virtual ~ProposalScorer() = default;
    virtual Projection project(const SetpointProposal& proposal) const = 0;
};

// Internal replica of the power grid. Shares the solver with the real
// environment but holds its own state and deliberately knows nothing about
// grid-code enforcement: every controlled node is always in service here,
// which is exactly where the model's reward overestimation comes from.
class WorldModel : public ProposalScorer {
public:
    WorldModel(const GridConfig& config, PerformanceWeights weights = {});

    // Copies the environment's last published observation (demand included);
    // grid-code flags are intentionally not taken over.
    void synchronize(const GridState& env_state, std::span<const double> base_p,
                     std::span<const double> base_q);

    // Solves the replica with the proposal (no enforcement) and evaluates
    // the utility with all controlled nodes counted in service. A solver
    // failure projects worst-case performance 0.
    Projection project(const SetpointProposal& proposal) const override;

    const GridState& last_observation() const { return last_observation_; }
    std::span<const double> base_p() const { return replica_.base_demand_p(); }
    std::span<const double> base_q() const { return replica_.base_demand_q(); }
    const Grid& replica() const { return replica_; }

private:
    Grid replica_;
    PerformanceWeights weights_;
    GridState last_observation_;
};

} // namespace voltgrid
