#include "voltgrid/reward.hpp"

#include "voltgrid/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace voltgrid;

TEST_CASE("gaussian_score point values") {
    std::vector<double> at_mu{1.0};
    CHECK(gaussian_score(at_mu, 1.0, 1.0, 0.0, 0.032) == doctest::Approx(1.0).epsilon(1e-15));

    // one sigma off the mean: exp(-0.5)
    std::vector<double> one_sigma{1.032};
    CHECK(gaussian_score(one_sigma, 1.0, 1.0, 0.0, 0.032) ==
          doctest::Approx(0.6065306597126334).epsilon(1e-12));

    // far-tail entry contributes essentially nothing
    std::vector<double> split{1.0, 0.0};
    CHECK(std::abs(gaussian_score(split, 1.0, 1.0, 0.0, 0.032) - 0.5) < 1e-12);

    // amplitude and offset behave as written: A * exp(-C) scaling
    std::vector<double> x{1.0};
    CHECK(gaussian_score(x, 2.0, 1.0, 0.0, 0.032) == doctest::Approx(2.0));
    CHECK(gaussian_score(x, 1.0, 1.0, 1.0, 0.032) == doctest::Approx(std::exp(-1.0)));
}

TEST_CASE("gaussian_score input validation") {
    std::vector<double> empty;
    CHECK_THROWS_AS(gaussian_score(empty, 1.0, 1.0, 0.0, 0.032), std::invalid_argument);
    std::vector<double> x{1.0};
    CHECK_THROWS_AS(gaussian_score(x, 1.0, 1.0, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("g_omega point values") {
    std::vector<double> ones{1.0, 1.0, 1.0};
    CHECK(g_omega(ones) == 1.0);

    // exp(-488.28125) ~ 8.75e-213: deep tail, indistinguishable from zero
    // for scoring purposes but still positive
    std::vector<double> dead{0.0};
    const double tail = g_omega(dead);
    CHECK(tail > 0.0);
    CHECK(tail < 1e-212);

    // symmetric +-sigma pair averages to exp(-0.5)
    std::vector<double> sym{0.968, 1.032};
    CHECK(g_omega(sym) == doctest::Approx(0.6065306597126334).epsilon(1e-12));
}

TEST_CASE("g_omega is permutation invariant") {
    Rng rng(5);
    std::vector<double> x(9);
    for (auto& v : x) v = rng.uniform(0.0, 1.2);
    const double base = g_omega(x);
    for (int shuffle = 0; shuffle < 20; ++shuffle) {
        for (std::size_t i = x.size(); i > 1; --i)
            std::swap(x[i - 1], x[rng.uniform_index(i)]);
        CHECK(g_omega(x) == doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("performance: all-healthy state scores exactly alpha+beta+gamma") {
    GridState s;
    s.voltages.assign(15, 1.0);
    s.in_service_flags.assign(14, true);
    PerformanceWeights w;
    const double p = performance(s, observe_all(s), w);
    CHECK(p == w.alpha + w.beta + w.gamma);
    CHECK(std::abs(p - 1.0) <= 1e-12);
}

TEST_CASE("performance: third term drops to zero when every node is disconnected") {
    GridState s;
    s.voltages.assign(15, 1.0);
    s.in_service_flags.assign(14, false);
    for (std::size_t b = 1; b < s.voltages.size(); ++b) s.voltages[b] = 0.0;
    PerformanceWeights w;
    const Observation obs = observe_all(s);
    const double expected = w.alpha * g_omega(s.voltages) + w.beta * g_omega(obs.values);
    CHECK(performance(s, obs, w) == doctest::Approx(expected).epsilon(1e-15));
    // 1 healthy slack out of 15 buses contributes 1/15 to each voltage term
    CHECK(performance(s, obs, w) == doctest::Approx((w.alpha + w.beta) / 15.0).epsilon(1e-9));
}

TEST_CASE("performance: partial observability uses the observed subset") {
    GridState s;
    s.voltages.assign(4, 1.0);
    s.voltages[3] = 0.8;
    s.in_service_flags.assign(3, true);
    const std::vector<int> subset{0, 1};
    const Observation obs = observe_subset(s, subset);
    PerformanceWeights w;
    const double expected = w.alpha * g_omega(s.voltages) + w.beta * 1.0 + w.gamma * 1.0;
    CHECK(performance(s, obs, w) == doctest::Approx(expected).epsilon(1e-12));
    const std::vector<int> empty;
    CHECK_THROWS_AS(observe_subset(s, empty), std::invalid_argument);
    const std::vector<int> bad{9};
    CHECK_THROWS_AS(observe_subset(s, bad), std::invalid_argument);
}

TEST_CASE("performance stays in [0,1] over 10^4 fuzzed states") {
    Rng rng(123);
    for (int trial = 0; trial < 10000; ++trial) {
        const std::size_t buses = 2 + rng.uniform_index(20);
        GridState s;
        s.voltages.resize(buses);
        for (auto& v : s.voltages) v = rng.uniform() < 0.1 ? 0.0 : rng.uniform(0.0, 1.5);
        s.in_service_flags.resize(buses - 1);
        for (std::size_t n = 0; n + 1 < buses; ++n) s.in_service_flags[n] = rng.uniform() < 0.8;
        const double a = rng.uniform();
        const double b = rng.uniform() * (1.0 - a);
        PerformanceWeights w(a, b, 1.0 - a - b);
        const double p = performance(s, observe_all(s), w);
        REQUIRE(p >= 0.0);
        REQUIRE(p <= 1.0);
    }
}

TEST_CASE("monotone degradation: moving one bus away from 1.0 never helps") {
    Rng rng(321);
    PerformanceWeights w;
    for (int trial = 0; trial < 300; ++trial) {
        GridState s;
        s.voltages.resize(8);
        for (auto& v : s.voltages) v = rng.uniform(0.85, 1.15);
        s.in_service_flags.assign(7, true);
        const std::size_t pick = rng.uniform_index(8);
        const double before = performance(s, observe_all(s), w);
        // push the picked bus strictly farther from nominal
        const double dev = s.voltages[pick] - 1.0;
        s.voltages[pick] = 1.0 + (dev >= 0.0 ? dev + rng.uniform(0.0, 0.3) : dev - rng.uniform(0.0, 0.3));
        const double after = performance(s, observe_all(s), w);
        CHECK(after <= before + 1e-15);
    }
}

TEST_CASE("weights must be convex") {
    CHECK_THROWS_AS(PerformanceWeights(0.5, 0.5, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(PerformanceWeights(-0.1, 0.6, 0.5), std::invalid_argument);
    CHECK_NOTHROW(PerformanceWeights(0.2, 0.3, 0.5));
}
