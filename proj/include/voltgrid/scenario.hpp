#pragma once

#include "voltgrid/grid.hpp"

#include <cstdint>
#include <vector>

namespace voltgrid {

// Seeded per-node demand excitation: each controlled node gets a base level
// and phase drawn once from the seed, then follows a slow sinusoid with
// optional hash-based jitter. demand_at is a pure function of the step, so
// a run's demand trace depends only on (config, seed).
class LoadProfile {
public:
    LoadProfile(const ScenarioConfig& config, int node_count, std::uint64_t seed);

    int node_count() const { return static_cast<int>(level_.size()); }
    double peak_p() const { return peak_p_; } // upper bound of any p value
    double peak_q() const { return peak_q_; }

    void demand_at(long step, std::vector<double>& p_out, std::vector<double>& q_out) const;

private:
    ScenarioConfig config_;
    std::uint64_t seed_;
    std::vector<double> level_; // per-node base consumption, pu
    std::vector<double> phase_; // per-node sinusoid phase, rad
    double peak_p_ = 0.0;
    double peak_q_ = 0.0;
};

} // namespace voltgrid
