#include "voltgrid/scenario.hpp"

#include "voltgrid/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace voltgrid {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Smooth value noise in [-1, 1]: cubic interpolation between hash knots.
double value_noise(std::uint64_t seed, double t, double knot_spacing) {
    const double u = t / knot_spacing;
    const double base = std::floor(u);
    const double frac = u - base;
    const auto k = static_cast<std::uint64_t>(static_cast<long long>(base) + (1LL << 40));
    const double a = hash_noise(seed, k, 0x0d41f7ULL);
    const double b = hash_noise(seed, k + 1, 0x0d41f7ULL);
    const double w = frac * frac * (3.0 - 2.0 * frac);
    return a + (b - a) * w;
}

} // namespace

LoadProfile::LoadProfile(const ScenarioConfig& config, int node_count, std::uint64_t seed)
    : config_(config), seed_(seed) {
    if (node_count < 1) throw std::invalid_argument("LoadProfile needs at least one node");
    Rng rng(mix_seed(seed, 0x10adULL));
    level_.resize(static_cast<std::size_t>(node_count));
    phase_.resize(static_cast<std::size_t>(node_count));
    const double run_phase = rng.uniform(0.0, kTwoPi);
    for (int i = 0; i < node_count; ++i) {
        level_[static_cast<std::size_t>(i)] = config_.mean * (1.0 + config_.spread * rng.uniform(-1.0, 1.0));
        phase_[static_cast<std::size_t>(i)] =
            run_phase + config_.phase_spread * rng.uniform(-1.0, 1.0);
    }
    peak_p_ = config_.mean * (1.0 + config_.spread) * (1.0 + config_.amplitude + config_.drift) +
              config_.jitter;
    peak_q_ = peak_p_ * config_.q_ratio;
}

void LoadProfile::demand_at(long step, std::vector<double>& p_out, std::vector<double>& q_out) const {
    const auto n = level_.size();
    p_out.resize(n);
    q_out.resize(n);
    const double t = static_cast<double>(step);
    // drift is shared across nodes: a slow unforecastable system-wide swing
    const double drift =
        config_.drift > 0.0 ? config_.drift * value_noise(seed_, t, config_.drift_period) : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double wave = std::sin(kTwoPi * t / config_.period + phase_[i]);
        double p = level_[i] * (1.0 + config_.amplitude * wave + drift);
        if (config_.jitter > 0.0)
            p += config_.jitter * hash_noise(seed_, static_cast<std::uint64_t>(step), i);
        p = std::max(p, 0.0);
        p_out[i] = p;
        q_out[i] = config_.q_ratio * p;
    }
}

} // namespace voltgrid
