#include "voltgrid/codec.hpp"

#include <algorithm>
#include <stdexcept>

namespace voltgrid {

ActionCodec::ActionCodec(const Grid& grid) {
    lo_.reserve(static_cast<std::size_t>(2 * grid.actuator_count()));
    for (const Actuator& a : grid.actuators()) {
        lo_.push_back(a.p_min);
        hi_.push_back(a.p_max);
        lo_.push_back(a.q_min);
        hi_.push_back(a.q_max);
    }
}

SetpointProposal ActionCodec::decode(std::span<const double> action) const {
    if (action.size() != lo_.size()) throw std::invalid_argument("action dimension mismatch");
    SetpointProposal sp;
    const std::size_t acts = lo_.size() / 2;
    sp.p.resize(acts);
    sp.q.resize(acts);
    for (std::size_t i = 0; i < lo_.size(); ++i) {
        const double a = std::clamp(action[i], -1.0, 1.0);
        const double v = lo_[i] + (a + 1.0) * 0.5 * (hi_[i] - lo_[i]);
        if (i % 2 == 0)
            sp.p[i / 2] = v;
        else
            sp.q[i / 2] = v;
    }
    return sp;
}

std::vector<double> ActionCodec::encode(const SetpointProposal& proposal) const {
    if (2 * proposal.size() != lo_.size()) throw std::invalid_argument("proposal dimension mismatch");
    std::vector<double> a(lo_.size(), 0.0);
    for (std::size_t i = 0; i < lo_.size(); ++i) {
        const double v = (i % 2 == 0) ? proposal.p[i / 2] : proposal.q[i / 2];
        const double span = hi_[i] - lo_[i];
        if (span <= 0.0) continue; // degenerate bound encodes as 0
        a[i] = std::clamp(2.0 * (v - lo_[i]) / span - 1.0, -1.0, 1.0);
    }
    return a;
}

ObsCodec::ObsCodec(int bus_count, double peak_p, double peak_q)
    : bus_count_(bus_count), peak_p_(peak_p > 0.0 ? peak_p : 1.0), peak_q_(peak_q > 0.0 ? peak_q : 1.0) {
    if (bus_count < 2) throw std::invalid_argument("ObsCodec needs at least two buses");
}

std::vector<double> ObsCodec::encode(const GridState& state, std::span<const double> base_p,
                                     std::span<const double> base_q) const {
    const auto nodes = static_cast<std::size_t>(bus_count_ - 1);
    if (state.voltages.size() != static_cast<std::size_t>(bus_count_) || base_p.size() != nodes ||
        base_q.size() != nodes)
        throw std::invalid_argument("observation dimension mismatch");
    std::vector<double> f;
    f.reserve(static_cast<std::size_t>(dim()));
    // Voltage deviations: +-0.1 pu maps to +-1; a dead bus reads -10.
    for (double v : state.voltages) f.push_back((v - 1.0) * 10.0);
    for (std::size_t i = 0; i < nodes; ++i) f.push_back(2.0 * base_p[i] / peak_p_ - 1.0);
    for (std::size_t i = 0; i < nodes; ++i) f.push_back(2.0 * base_q[i] / peak_q_ - 1.0);
    return f;
}

} // namespace voltgrid
