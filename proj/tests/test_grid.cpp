#include "voltgrid/grid.hpp"

#include "voltgrid/errors.hpp"
#include "voltgrid/power_flow.hpp"

#include <doctest.h>

#include <set>

using namespace voltgrid;

TEST_CASE("benchmark defaults: 15 buses, 28 actuators, Table-style bounds") {
    Grid g = Grid::build_benchmark(GridConfig{});
    CHECK(g.bus_count() == 15);
    CHECK(g.actuator_count() == 28);
    CHECK(g.buses()[0].kind == BusKind::slack);
    CHECK(g.buses()[0].voltage_mag == 1.0);

    int loads = 0, gens = 0;
    for (const Actuator& a : g.actuators()) {
        if (a.kind == ActuatorKind::load) {
            ++loads;
            CHECK(a.p_min == 0.0);
            CHECK(a.p_max == doctest::Approx(1.4));
            CHECK(a.q_max == doctest::Approx(0.46));
            CHECK(a.q_min == doctest::Approx(-0.46));
        } else {
            ++gens;
            CHECK(a.p_max == doctest::Approx(0.8));
            CHECK(a.q_max == doctest::Approx(0.46));
        }
        CHECK(a.in_service);
        CHECK(a.p_set == 0.0);
        CHECK(a.q_set == 0.0);
    }
    CHECK(loads == 14);
    CHECK(gens == 14);
}

TEST_CASE("minimal grid: node_count=2 gives slack + one PQ bus, 2 actuators") {
    GridConfig cfg;
    cfg.node_count = 2;
    cfg.feeder_count = 1;
    Grid g = Grid::build_benchmark(cfg);
    CHECK(g.bus_count() == 2);
    CHECK(g.actuator_count() == 2);
    CHECK(g.buses()[1].kind == BusKind::pq);
    CHECK(g.lines().size() == 1);
}

TEST_CASE("benchmark topology is a radial tree rooted at the slack") {
    for (int feeders : {1, 2, 3, 5}) {
        GridConfig cfg;
        cfg.feeder_count = feeders;
        Grid g = Grid::build_benchmark(cfg);
        CHECK(static_cast<int>(g.lines().size()) == g.bus_count() - 1); // tree
        // every bus reachable: a zero-injection solve must publish 1.0 everywhere
        auto r = g.solve();
        REQUIRE(r.converged);
        for (double v : r.state.voltages) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("invalid bounds are a configuration error") {
    GridConfig cfg;
    cfg.load_q_max = -0.1; // min > max once mirrored
    CHECK_THROWS_AS(Grid::build_benchmark(cfg), ConfigError);
    GridConfig cfg2;
    cfg2.band_lo = 1.2; // empty band
    CHECK_THROWS_AS(Grid::build_benchmark(cfg2), ConfigError);
}

TEST_CASE("setpoint commit validates bounds and dimensions") {
    Grid g = Grid::build_benchmark(GridConfig{});
    SetpointProposal sp = g.current_setpoints();
    sp.q[1] = 0.47; // generator q beyond 0.46
    CHECK_THROWS_AS(g.commit_setpoints(sp), std::invalid_argument);
    sp.q.pop_back();
    CHECK_THROWS_AS(g.commit_setpoints(sp), std::invalid_argument);
}

TEST_CASE("grid config file round-trip with unknown-key rejection") {
    auto kv = KeyValueConfig::from_string("node_count = 5\nfeeder_count = 1\nband_lo = 0.92\n");
    GridConfig cfg = GridConfig::from_config(kv);
    CHECK(cfg.node_count == 5);
    CHECK(cfg.band_lo == doctest::Approx(0.92));
    auto bad = KeyValueConfig::from_string("node_cuont = 5\n");
    CHECK_THROWS_AS(GridConfig::from_config(bad), ConfigError);
}

TEST_CASE("grid code: in-band voltages leave everything connected") {
    Grid g = Grid::build_benchmark(GridConfig{});
    GridState s;
    s.voltages.assign(15, 1.02);
    s.in_service_flags.assign(14, true);
    auto res = g.enforce_grid_code(s, 1);
    CHECK(res.newly_disconnected.empty());
    CHECK(g.in_service_node_count() == 14);
}

TEST_CASE("grid code: excursion disconnects the node and the next solve reports 0.0") {
    Grid g = Grid::build_benchmark(GridConfig{});
    GridState s;
    s.voltages.assign(15, 1.0);
    s.in_service_flags.assign(14, true);
    s.voltages[3] = 1.15; // node 2
    auto res = g.enforce_grid_code(s, 7);
    REQUIRE(res.newly_disconnected == std::vector<int>{2});
    CHECK_FALSE(g.node_in_service(2));
    CHECK(res.state.voltages[3] == 0.0);
    CHECK_FALSE(res.state.in_service_flags[2]);
    for (const Actuator& a : g.actuators())
        if (a.bus_id == 3) CHECK_FALSE(a.in_service);

    auto flow = g.solve();
    REQUIRE(flow.converged);
    CHECK(flow.state.voltages[3] == 0.0);
    // the rest of the feeder is still solved
    CHECK(flow.state.voltages[1] > 0.9);
    CHECK(flow.state.voltages[14] > 0.9);
}

TEST_CASE("grid code: closed band edges stay in service") {
    Grid g = Grid::build_benchmark(GridConfig{});
    GridState s;
    s.voltages.assign(15, 1.0);
    s.in_service_flags.assign(14, true);
    s.voltages[1] = 0.90;  // exactly the lower edge
    s.voltages[2] = 1.10;  // exactly the upper edge
    auto res = g.enforce_grid_code(s, 1);
    CHECK(res.newly_disconnected.empty());
    CHECK(g.in_service_node_count() == 14);
}

TEST_CASE("grid code: monotone disconnection within a cooldown window") {
    Grid g = Grid::build_benchmark(GridConfig{});
    GridState s;
    s.voltages.assign(15, 1.0);
    s.in_service_flags.assign(14, true);
    int previous = g.in_service_node_count();
    for (int step = 1; step <= 5; ++step) {
        s.voltages[static_cast<std::size_t>(step)] = 1.2; // trip one more node each pass
        g.enforce_grid_code(s, step);
        const int now = g.in_service_node_count();
        CHECK(now <= previous);
        previous = now;
    }
    CHECK(previous == 9);
}

TEST_CASE("cooldown: default is permanent, finite value reconnects") {
    GridConfig cfg;
    Grid g = Grid::build_benchmark(cfg);
    GridState s;
    s.voltages.assign(15, 1.0);
    s.in_service_flags.assign(14, true);
    s.voltages[1] = 1.3;
    g.enforce_grid_code(s, 1);
    CHECK_FALSE(g.node_in_service(0));
    g.update_cooldowns(1000000);
    CHECK_FALSE(g.node_in_service(0)); // permanent

    GridConfig cfg2;
    cfg2.reconnect_after = 10;
    Grid g2 = Grid::build_benchmark(cfg2);
    g2.enforce_grid_code(s, 1);
    CHECK_FALSE(g2.node_in_service(0));
    g2.update_cooldowns(5);
    CHECK_FALSE(g2.node_in_service(0));
    auto back = g2.update_cooldowns(11);
    CHECK(back == std::vector<int>{0});
    CHECK(g2.node_in_service(0));
}

TEST_CASE("disconnected node is zero-injection: demand there stops counting") {
    GridConfig cfg;
    Grid g = Grid::build_benchmark(cfg);
    std::vector<double> p(14, 0.2), q(14, 0.05);
    g.set_base_demand(p, q);
    auto before = g.solve();
    REQUIRE(before.converged);

    GridState trip;
    trip.voltages.assign(15, 1.0);
    trip.in_service_flags.assign(14, true);
    trip.voltages[14] = 1.5;
    g.enforce_grid_code(trip, 1);
    auto after = g.solve();
    REQUIRE(after.converged);
    CHECK(after.state.voltages[14] == 0.0);
    // shedding the far node's demand raises the voltage of its neighbours
    CHECK(after.state.voltages[12] > before.state.voltages[12]);
}
