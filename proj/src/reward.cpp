#include "voltgrid/reward.hpp"

#include <cmath>
#include <stdexcept>

namespace voltgrid {

PerformanceWeights::PerformanceWeights(double a, double b, double g) : alpha(a), beta(b), gamma(g) {
    if (a < 0.0 || b < 0.0 || g < 0.0)
        throw std::invalid_argument("performance weights must be non-negative");
    if (std::abs(a + b + g - 1.0) > 1e-12)
        throw std::invalid_argument("performance weights must sum to 1");
}

Observation observe_all(const GridState& state) {
    Observation obs;
    obs.observed_bus_ids.reserve(state.voltages.size());
    obs.values = state.voltages;
    for (std::size_t b = 0; b < state.voltages.size(); ++b)
        obs.observed_bus_ids.push_back(static_cast<int>(b));
    return obs;
}

Observation observe_subset(const GridState& state, std::span<const int> bus_ids) {
    if (bus_ids.empty()) throw std::invalid_argument("observation must cover at least one bus");
    Observation obs;
    for (int id : bus_ids) {
        if (id < 0 || static_cast<std::size_t>(id) >= state.voltages.size())
            throw std::invalid_argument("observed bus id out of range");
        obs.observed_bus_ids.push_back(id);
        obs.values.push_back(state.voltages[static_cast<std::size_t>(id)]);
    }
    return obs;
}

double gaussian_score(std::span<const double> x, double amplitude, double mu, double offset, double sigma) {
    if (x.empty()) throw std::invalid_argument("gaussian_score: empty input vector");
    if (sigma <= 0.0) throw std::invalid_argument("gaussian_score: sigma must be positive");
    const double inv_two_sigma_sq = 1.0 / (2.0 * sigma * sigma);
    double sum = 0.0;
    for (double v : x) {
        const double d = v - mu;
        sum += std::exp(-d * d * inv_two_sigma_sq - offset);
    }
    return amplitude * (sum / static_cast<double>(x.size()));
}

double g_omega(std::span<const double> x) {
    return gaussian_score(x, 1.0, 1.0, 0.0, 0.032);
}

double performance(const GridState& state, const Observation& obs, const PerformanceWeights& weights) {
    if (obs.values.empty()) throw std::invalid_argument("performance: empty observation");
    const double whole = g_omega(state.voltages);
    const double observed = g_omega(obs.values);
    double in_service = 1.0;
    if (!state.in_service_flags.empty()) {
        long up = 0;
        for (bool f : state.in_service_flags)
            if (f) ++up;
        in_service = static_cast<double>(up) / static_cast<double>(state.in_service_flags.size());
    }
    return weights.alpha * whole + weights.beta * observed + weights.gamma * in_service;
}

} // namespace voltgrid
