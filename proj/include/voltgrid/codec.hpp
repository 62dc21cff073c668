#pragma once

#include "voltgrid/grid.hpp"

#include <span>
#include <vector>

namespace voltgrid {

// Affine map between normalized actions in [-1, 1]^(2A) and physical
// setpoints within actuator bounds. Layout: [p_0, q_0, p_1, q_1, ...] by
// actuator id; a zero action decodes to the midpoint of each bound.
class ActionCodec {
public:
    explicit ActionCodec(const Grid& grid);

    int dim() const { return static_cast<int>(lo_.size()); }

    SetpointProposal decode(std::span<const double> action) const;
    std::vector<double> encode(const SetpointProposal& proposal) const;

private:
    std::vector<double> lo_, hi_; // interleaved p/q bounds
};

// Feature vector for the learner: per-bus voltage deviations scaled to
// O(1), then per-node demand scaled into [-1, 1] by the profile peak.
class ObsCodec {
public:
    ObsCodec(int bus_count, double peak_p, double peak_q);

    int dim() const { return bus_count_ + 2 * (bus_count_ - 1); }

    std::vector<double> encode(const GridState& state, std::span<const double> base_p,
                               std::span<const double> base_q) const;

private:
    int bus_count_;
    double peak_p_, peak_q_;
};

} // namespace voltgrid
