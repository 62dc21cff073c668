#include "voltgrid/world_model.hpp"

#include "voltgrid/power_flow.hpp"

namespace voltgrid {

WorldModel::WorldModel(const GridConfig& config, PerformanceWeights weights)
    : replica_(Grid::build_benchmark(config)), weights_(weights) {
    last_observation_.voltages.assign(static_cast<std::size_t>(replica_.bus_count()), 1.0);
    last_observation_.in_service_flags.assign(static_cast<std::size_t>(replica_.node_count()), true);
}

void WorldModel::synchronize(const GridState& env_state, std::span<const double> base_p,
                             std::span<const double> base_q) {
    last_observation_ = env_state;
    replica_.set_base_demand(base_p, base_q);
    // The replica never mirrors disconnections; any actuator the
    // environment switched off is still live in here.
    replica_.clear_grid_code_state();
}

Projection WorldModel::project(const SetpointProposal& proposal) const {
    Projection projection;
    PowerFlowResult result = replica_.solve(proposal);
    projection.converged = result.converged;
    if (!result.converged) {
        projection.state.voltages.assign(static_cast<std::size_t>(replica_.bus_count()), 0.0);
        projection.state.in_service_flags.assign(static_cast<std::size_t>(replica_.node_count()), true);
        projection.performance = 0.0;
        return projection;
    }
    projection.state = std::move(result.state);
    projection.performance = performance(projection.state, observe_all(projection.state), weights_);
    return projection;
}

} // namespace voltgrid
