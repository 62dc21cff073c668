#pragma once

#include "voltgrid/grid.hpp"

#include <span>
#include <vector>

namespace voltgrid {

// Convex weights of the three performance terms; must sum to 1.
struct PerformanceWeights {
    double alpha = 1.0 / 3.0;
    double beta = 1.0 / 3.0;
    double gamma = 1.0 / 3.0;

    PerformanceWeights() = default;
    PerformanceWeights(double a, double b, double g); // throws std::invalid_argument
};

// Voltage readings at the subset of buses the agent can see.
struct Observation {
    std::vector<int> observed_bus_ids;
    std::vector<double> values; // pu, aligned with observed_bus_ids
};

Observation observe_all(const GridState& state);
Observation observe_subset(const GridState& state, std::span<const int> bus_ids);

// Mean of a Gaussian-bell map over the entries of x:
// (A/|x|) * sum_i exp(-(x_i - mu)^2 / (2 sigma^2) - C).
// Throws std::invalid_argument on an empty vector or sigma <= 0.
double gaussian_score(std::span<const double> x, double amplitude, double mu, double offset, double sigma);

// gaussian_score with the voltage-band shape: A=1, mu=1.0, C=0, sigma=0.032.
double g_omega(std::span<const double> x);

// Normalized utility in [0, 1]:
//   alpha * g_omega(all bus voltages)
// + beta  * g_omega(observed voltages)
// + gamma * (in-service controlled nodes / controlled nodes).
// Voltages of disconnected buses enter terms 1-2 as their published 0.0.
double performance(const GridState& state, const Observation& obs, const PerformanceWeights& weights);

} // namespace voltgrid
