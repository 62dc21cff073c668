#include "voltgrid/grid.hpp"

#include "voltgrid/errors.hpp"
#include "voltgrid/power_flow.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace voltgrid {

namespace {

const std::set<std::string> kGridConfigKeys = {
    "node_count", "feeder_count", "segment_r", "segment_x",
    "load_p_max", "load_q_max", "gen_p_max", "gen_q_max",
    "band_lo", "band_hi", "reconnect_after",
    "solver_tolerance", "solver_max_iterations",
    "profile_mean", "profile_spread", "profile_amplitude",
    "profile_period", "profile_phase_spread", "profile_drift",
    "profile_drift_period", "profile_q_ratio", "profile_jitter",
};

} // namespace

GridConfig GridConfig::from_file(const std::string& path) {
    return from_config(KeyValueConfig::from_file(path));
}

GridConfig GridConfig::from_config(const KeyValueConfig& kv) {
    kv.require_known(kGridConfigKeys);
    GridConfig c;
    c.node_count = static_cast<int>(kv.get_long("node_count", c.node_count));
    c.feeder_count = static_cast<int>(kv.get_long("feeder_count", c.feeder_count));
    c.segment_r = kv.get_double("segment_r", c.segment_r);
    c.segment_x = kv.get_double("segment_x", c.segment_x);
    c.load_p_max = kv.get_double("load_p_max", c.load_p_max);
    c.load_q_max = kv.get_double("load_q_max", c.load_q_max);
    c.gen_p_max = kv.get_double("gen_p_max", c.gen_p_max);
    c.gen_q_max = kv.get_double("gen_q_max", c.gen_q_max);
    c.band_lo = kv.get_double("band_lo", c.band_lo);
    c.band_hi = kv.get_double("band_hi", c.band_hi);
    c.reconnect_after = kv.get_long("reconnect_after", c.reconnect_after);
    c.solver_tolerance = kv.get_double("solver_tolerance", c.solver_tolerance);
    c.solver_max_iterations = static_cast<int>(kv.get_long("solver_max_iterations", c.solver_max_iterations));
    c.scenario.mean = kv.get_double("profile_mean", c.scenario.mean);
    c.scenario.spread = kv.get_double("profile_spread", c.scenario.spread);
    c.scenario.amplitude = kv.get_double("profile_amplitude", c.scenario.amplitude);
    c.scenario.period = kv.get_double("profile_period", c.scenario.period);
    c.scenario.phase_spread = kv.get_double("profile_phase_spread", c.scenario.phase_spread);
    c.scenario.drift = kv.get_double("profile_drift", c.scenario.drift);
    c.scenario.drift_period = kv.get_double("profile_drift_period", c.scenario.drift_period);
    c.scenario.q_ratio = kv.get_double("profile_q_ratio", c.scenario.q_ratio);
    c.scenario.jitter = kv.get_double("profile_jitter", c.scenario.jitter);
    c.validate();
    return c;
}

void GridConfig::validate() const {
    if (node_count < 2) throw ConfigError("node_count must be at least 2 (slack + 1 controlled node)");
    if (feeder_count < 1) throw ConfigError("feeder_count must be positive");
    if (feeder_count > node_count - 1) throw ConfigError("feeder_count exceeds controlled node count");
    if (segment_r < 0.0) throw ConfigError("segment_r must be >= 0");
    if (segment_x <= 0.0) throw ConfigError("segment_x must be > 0");
    if (load_p_max < 0.0 || gen_p_max < 0.0) throw ConfigError("real power bounds must be >= 0 (min > max)");
    if (load_q_max < 0.0 || gen_q_max < 0.0) throw ConfigError("reactive power bounds must be >= 0 (min > max)");
    if (band_lo >= band_hi) throw ConfigError("voltage band is empty (band_lo >= band_hi)");
    if (band_lo <= 0.0) throw ConfigError("band_lo must be positive");
    if (solver_tolerance <= 0.0) throw ConfigError("solver_tolerance must be positive");
    if (solver_max_iterations < 1) throw ConfigError("solver_max_iterations must be positive");
    if (scenario.mean < 0.0 || scenario.mean > load_p_max)
        throw ConfigError("profile_mean must lie within [0, load_p_max]");
    if (scenario.period <= 0.0) throw ConfigError("profile_period must be positive");
    if (scenario.drift < 0.0 || scenario.drift_period <= 0.0)
        throw ConfigError("profile drift parameters must be positive");
    if (scenario.mean * (1.0 + scenario.spread) * (1.0 + scenario.amplitude + scenario.drift) +
            scenario.jitter > load_p_max)
        throw ConfigError("demand profile peak exceeds load_p_max");
}

Grid Grid::build_benchmark(const GridConfig& config) {
    config.validate();
    Grid g;
    g.config_ = config;

    const int n = config.node_count;
    g.buses_.reserve(static_cast<std::size_t>(n));
    g.buses_.push_back(Bus{0, BusKind::slack, 1.0, 0.0, true});
    for (int i = 1; i < n; ++i)
        g.buses_.push_back(Bus{i, BusKind::pq, 1.0, 0.0, true});

    // Radial laterals: controlled buses are dealt round-robin onto
    // `feeder_count` chains anchored at the slack.
    std::vector<int> feeder_tail(static_cast<std::size_t>(config.feeder_count), 0);
    for (int i = 1; i < n; ++i) {
        int f = (i - 1) % config.feeder_count;
        g.lines_.push_back(Line{feeder_tail[static_cast<std::size_t>(f)], i, config.segment_r, config.segment_x});
        feeder_tail[static_cast<std::size_t>(f)] = i;
    }

    int next_id = 0;
    for (int i = 1; i < n; ++i) {
        Actuator load;
        load.id = next_id++;
        load.bus_id = i;
        load.kind = ActuatorKind::load;
        load.p_min = 0.0;
        load.p_max = config.load_p_max;
        load.q_min = -config.load_q_max;
        load.q_max = config.load_q_max;
        g.actuators_.push_back(load);

        Actuator gen;
        gen.id = next_id++;
        gen.bus_id = i;
        gen.kind = ActuatorKind::generator;
        gen.p_min = 0.0;
        gen.p_max = config.gen_p_max;
        gen.q_min = -config.gen_q_max;
        gen.q_max = config.gen_q_max;
        g.actuators_.push_back(gen);
    }

    g.node_connected_.assign(static_cast<std::size_t>(n - 1), true);
    g.disconnected_at_.assign(static_cast<std::size_t>(n - 1), -1);
    g.base_p_.assign(static_cast<std::size_t>(n - 1), 0.0);
    g.base_q_.assign(static_cast<std::size_t>(n - 1), 0.0);
    return g;
}

void Grid::set_base_demand(std::span<const double> p, std::span<const double> q) {
    if (p.size() != base_p_.size() || q.size() != base_q_.size())
        throw std::invalid_argument("base demand dimension mismatch");
    std::copy(p.begin(), p.end(), base_p_.begin());
    std::copy(q.begin(), q.end(), base_q_.begin());
}

void Grid::commit_setpoints(const SetpointProposal& proposal) {
    if (proposal.p.size() != actuators_.size() || proposal.q.size() != actuators_.size())
        throw std::invalid_argument("setpoint proposal dimension mismatch");
    constexpr double slack = 1e-9;
    for (std::size_t a = 0; a < actuators_.size(); ++a) {
        Actuator& act = actuators_[a];
        const double p = proposal.p[a];
        const double q = proposal.q[a];
        if (p < act.p_min - slack || p > act.p_max + slack || q < act.q_min - slack || q > act.q_max + slack)
            throw std::invalid_argument("setpoint outside actuator bounds for actuator " + std::to_string(act.id));
        act.p_set = std::clamp(p, act.p_min, act.p_max);
        act.q_set = std::clamp(q, act.q_min, act.q_max);
    }
}

SetpointProposal Grid::current_setpoints() const {
    SetpointProposal sp;
    sp.p.reserve(actuators_.size());
    sp.q.reserve(actuators_.size());
    for (const Actuator& a : actuators_) {
        sp.p.push_back(a.p_set);
        sp.q.push_back(a.q_set);
    }
    return sp;
}

void Grid::net_injections(std::vector<double>& p_out, std::vector<double>& q_out) const {
    p_out.assign(buses_.size(), 0.0);
    q_out.assign(buses_.size(), 0.0);
    for (const Actuator& a : actuators_) {
        if (!a.in_service) continue;
        const auto b = static_cast<std::size_t>(a.bus_id);
        const double sign = (a.kind == ActuatorKind::generator) ? 1.0 : -1.0;
        p_out[b] += sign * a.p_set;
        q_out[b] += sign * a.q_set;
    }
    for (std::size_t node = 0; node < base_p_.size(); ++node) {
        // A grid-code disconnected node is zero-injection: its base demand
        // drops out together with the inverters.
        if (!node_connected_[node]) continue;
        p_out[node + 1] -= base_p_[node];
        q_out[node + 1] -= base_q_[node];
    }
}

PowerFlowResult Grid::solve() const {
    return solve_power_flow(*this, current_setpoints());
}

PowerFlowResult Grid::solve(const SetpointProposal& proposal) const {
    return solve_power_flow(*this, proposal);
}

void Grid::set_node_service(int node, bool on, long step) {
    const auto idx = static_cast<std::size_t>(node);
    node_connected_[idx] = on;
    disconnected_at_[idx] = on ? -1 : step;
    const int bus = node + 1;
    for (Actuator& a : actuators_)
        if (a.bus_id == bus) a.in_service = on;
}

EnforcementResult Grid::enforce_grid_code(const GridState& state, long step) {
    if (state.voltages.size() != buses_.size())
        throw std::invalid_argument("state bus count mismatch");
    EnforcementResult result;
    result.state = state;
    for (int node = 0; node < node_count(); ++node) {
        const auto idx = static_cast<std::size_t>(node);
        if (!node_connected_[idx]) continue;
        const double v = state.voltages[idx + 1];
        // Band edges are closed: a violation requires strict excursion.
        if (v < config_.band_lo || v > config_.band_hi) {
            set_node_service(node, false, step);
            result.state.voltages[idx + 1] = 0.0;
            result.newly_disconnected.push_back(node);
        }
    }
    result.state.in_service_flags = node_connected_;
    return result;
}

EnforcementResult Grid::enforce_grid_code(const GridState& state) {
    return enforce_grid_code(state, 0);
}

std::vector<int> Grid::update_cooldowns(long step) {
    std::vector<int> reconnected;
    if (config_.reconnect_after < 0) return reconnected;
    for (int node = 0; node < node_count(); ++node) {
        const auto idx = static_cast<std::size_t>(node);
        if (node_connected_[idx]) continue;
        if (step - disconnected_at_[idx] >= config_.reconnect_after) {
            set_node_service(node, true, step);
            reconnected.push_back(node);
        }
    }
    return reconnected;
}

int Grid::in_service_node_count() const {
    return static_cast<int>(std::count(node_connected_.begin(), node_connected_.end(), true));
}

void Grid::clear_grid_code_state() {
    for (int node = 0; node < node_count(); ++node)
        set_node_service(node, true, 0);
    std::fill(disconnected_at_.begin(), disconnected_at_.end(), -1);
}

} // namespace voltgrid
