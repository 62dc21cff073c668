#pragma once

#include "voltgrid/grid.hpp"

#include <vector>

namespace voltgrid {

// Outcome of one Newton-Raphson solve. On convergence `state` holds the
// published voltage vector: solved magnitudes for live buses, exactly 0.0
// for buses that are out of service, unreachable from the slack, or
// grid-code disconnected. Non-convergence is reported through the flag
// (with the last mismatch norm), not an exception; callers score such
// proposals as worst-case.
struct PowerFlowResult {
    bool converged = false;
    int iterations = 0;
    double max_mismatch = 0.0; // pu, max per-bus |dP|,|dQ|
    GridState state;
    std::vector<double> angles; // rad per bus, 0.0 where not solved
};

PowerFlowResult solve_power_flow(const Grid& grid, const SetpointProposal& proposal);

} // namespace voltgrid
