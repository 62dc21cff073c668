#include "voltgrid/power_flow.hpp"

#include "oracles/gauss_seidel.hpp"
#include "voltgrid/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace voltgrid;
using voltgrid::testing::gauss_seidel_solve;
using voltgrid::testing::oracle_injections;

namespace {

SetpointProposal zeros_for(const Grid& g) {
    SetpointProposal sp;
    sp.p.assign(static_cast<std::size_t>(g.actuator_count()), 0.0);
    sp.q.assign(static_cast<std::size_t>(g.actuator_count()), 0.0);
    return sp;
}

} // namespace

TEST_CASE("flat no-load case: every in-service bus at 1.0 pu, angle 0") {
    Grid g = Grid::build_benchmark(GridConfig{});
    auto r = g.solve(zeros_for(g));
    REQUIRE(r.converged);
    CHECK(r.max_mismatch < 1e-8);
    for (double v : r.state.voltages) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
    for (double a : r.angles) CHECK(a == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("2-bus load case matches the Gauss-Seidel oracle") {
    GridConfig cfg;
    cfg.node_count = 2;
    cfg.feeder_count = 1;
    cfg.segment_r = 0.01;
    cfg.segment_x = 0.05;
    Grid g = Grid::build_benchmark(cfg);
    std::vector<double> p{0.5}, q{0.2};
    g.set_base_demand(p, q);

    auto nr = g.solve(zeros_for(g));
    REQUIRE(nr.converged);
    CHECK(nr.max_mismatch < 1e-8);

    std::vector<double> pi, qi;
    oracle_injections(g, zeros_for(g), pi, qi);
    auto gs = gauss_seidel_solve(2, 0, g.lines(), pi, qi);
    REQUIRE(gs.converged);

    // frozen from the oracle (cross-checked against an independent
    // nonlinear root find): |V2| = 0.984490759986540
    CHECK(std::abs(gs.v_mag[1] - 0.984490759986540) < 1e-9);
    CHECK(std::abs(nr.state.voltages[1] - gs.v_mag[1]) < 1e-6);
    CHECK(std::abs(nr.state.voltages[1] - 0.984490759986540) < 1e-6);
    CHECK(std::abs(nr.angles[1] - gs.v_ang[1]) < 1e-6);
}

TEST_CASE("out-of-service leaf bus reports 0.0 while the rest is solved") {
    GridConfig cfg;
    cfg.node_count = 3;
    cfg.feeder_count = 1; // chain slack-1-2
    Grid g = Grid::build_benchmark(cfg);
    std::vector<double> p{0.3, 0.0}, q{0.1, 0.0};
    g.set_base_demand(p, q);
    g.bus_at(2).in_service = false;
    auto r = g.solve(zeros_for(g));
    REQUIRE(r.converged);
    CHECK(r.state.voltages[2] == 0.0);
    CHECK(r.state.voltages[1] > 0.9);
    CHECK(r.state.voltages[1] < 1.0);
}

TEST_CASE("slack out of service violates the solve precondition") {
    Grid g = Grid::build_benchmark(GridConfig{});
    g.bus_at(0).in_service = false;
    CHECK_THROWS_AS(g.solve(zeros_for(g)), std::invalid_argument);
}

TEST_CASE("non-convergence is reported with the last mismatch, not thrown") {
    GridConfig cfg;
    cfg.node_count = 2;
    cfg.feeder_count = 1;
    cfg.segment_r = 0.1;
    cfg.segment_x = 0.5;
    Grid g = Grid::build_benchmark(cfg);
    std::vector<double> p{5.0}, q{2.0}; // far beyond the line's transfer limit
    g.set_base_demand(p, q);
    auto r = g.solve(zeros_for(g));
    CHECK_FALSE(r.converged);
    CHECK(r.max_mismatch > 0.0);
}

TEST_CASE("determinism: identical grid and setpoints give bit-identical states") {
    GridConfig cfg;
    Grid g = Grid::build_benchmark(cfg);
    std::vector<double> p(14), q(14);
    Rng rng(77);
    for (auto& v : p) v = rng.uniform(0.0, 0.15);
    for (auto& v : q) v = rng.uniform(0.0, 0.05);
    g.set_base_demand(p, q);
    auto a = g.solve(zeros_for(g));
    auto b = g.solve(zeros_for(g));
    REQUIRE(a.converged);
    REQUIRE(b.converged);
    CHECK(a.state.voltages == b.state.voltages);
    CHECK(a.angles == b.angles);
}

TEST_CASE("oracle equivalence: 1000 random 2-3 bus cases within 1e-6") {
    Rng rng(20260809);
    int checked = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        GridConfig cfg;
        cfg.node_count = 2 + static_cast<int>(rng.uniform_index(2)); // 2 or 3 buses
        cfg.feeder_count = cfg.node_count == 3 && rng.uniform() < 0.5 ? 2 : 1;
        cfg.segment_r = rng.uniform(0.002, 0.02);
        cfg.segment_x = rng.uniform(0.01, 0.06);
        Grid g = Grid::build_benchmark(cfg);

        // injections within the benchmark actuator bounds, mapped 1:1 to pu
        const int nodes = cfg.node_count - 1;
        std::vector<double> p(static_cast<std::size_t>(nodes)), q(static_cast<std::size_t>(nodes));
        for (auto& v : p) v = rng.uniform(-0.8, 0.8);
        for (auto& v : q) v = rng.uniform(-0.46, 0.46);
        g.set_base_demand(p, q); // negative demand injects

        auto sp = zeros_for(g);
        auto nr = g.solve(sp);
        std::vector<double> pi, qi;
        oracle_injections(g, sp, pi, qi);
        auto gs = gauss_seidel_solve(cfg.node_count, 0, g.lines(), pi, qi);
        REQUIRE_MESSAGE(nr.converged, "Newton-Raphson failed on trial ", trial);
        REQUIRE_MESSAGE(gs.converged, "Gauss-Seidel failed on trial ", trial);
        CHECK(nr.max_mismatch < 1e-8);
        for (int b = 0; b < cfg.node_count; ++b) {
            CHECK(std::abs(nr.state.voltages[static_cast<std::size_t>(b)] -
                           gs.v_mag[static_cast<std::size_t>(b)]) < 1e-6);
        }
        ++checked;
    }
    CHECK(checked == 1000);
}

TEST_CASE("mismatch residual below 1e-8 on randomized 15-bus feeder solves") {
    Rng rng(99);
    GridConfig cfg;
    Grid g = Grid::build_benchmark(cfg);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> p(14), q(14);
        for (auto& v : p) v = rng.uniform(0.0, 0.2);
        for (auto& v : q) v = rng.uniform(-0.05, 0.05);
        g.set_base_demand(p, q);
        auto r = g.solve(zeros_for(g));
        REQUIRE(r.converged);
        CHECK(r.max_mismatch < 1e-8);
    }
}
