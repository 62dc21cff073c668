#pragma once

#include "voltgrid/config.hpp"

#include <span>
#include <string>
#include <vector>

namespace voltgrid {

enum class BusKind { slack, pq };

struct Bus {
    int id = 0;
    BusKind kind = BusKind::pq;
    double voltage_mag = 1.0; // pu
    double voltage_ang = 0.0; // rad
    bool in_service = true;
};

struct Line {
    int from_bus = 0;
    int to_bus = 0;
    double resistance = 0.0; // pu
    double reactance = 0.0;  // pu
};

enum class ActuatorKind { load, generator };

// Inverter-coupled unit at a bus. Sign convention: p_set/q_set are always
// non-negative-capable magnitudes in the unit's own orientation -- a
// generator injects its setpoints into the bus, a load withdraws them.
struct Actuator {
    int id = 0;
    int bus_id = 0;
    ActuatorKind kind = ActuatorKind::load;
    double p_set = 0.0; // MW (S_base = 1 MVA, so numerically equal to pu)
    double q_set = 0.0; // MVar
    double p_min = 0.0, p_max = 0.0;
    double q_min = 0.0, q_max = 0.0;
    bool in_service = true;
};

// Full actuator setpoint vector, ordered by actuator id.
struct SetpointProposal {
    std::vector<double> p; // MW per actuator
    std::vector<double> q; // MVar per actuator
    std::size_t size() const { return p.size(); }
};

// Published world state: per-bus voltage magnitudes (exactly 0.0 for
// buses out of service or disconnected by the grid code) plus the
// service flag of every controlled node.
struct GridState {
    std::vector<double> voltages;        // pu, one entry per bus
    std::vector<bool> in_service_flags;  // one entry per controlled (non-slack) node
    long step = 0;
};

// Exogenous demand-profile parameters; values in pu on the 1 MVA base.
// Per-node demand = level * (1 + amplitude*sin + drift) + jitter, where the
// sinusoid phases are coherent across nodes up to `phase_spread` and the
// drift is a shared smooth random walk (piecewise-cubic value noise).
struct ScenarioConfig {
    double mean = 0.10;         // average per-node real demand
    double spread = 0.3;        // relative spread of per-node base levels
    double amplitude = 0.45;    // relative sinusoid amplitude
    double period = 240.0;      // steps per full cycle
    double phase_spread = 3.14; // rad of per-node phase jitter around the run phase
    double drift = 0.0;         // relative amplitude of the shared smooth drift
    double drift_period = 32.0; // steps between drift knots
    double q_ratio = 0.25;      // reactive demand as a fraction of real demand
    double jitter = 0.0;        // uniform per-step noise, absolute pu
};

struct GridConfig {
    int node_count = 15;   // total buses including the slack
    int feeder_count = 2;  // radial laterals leaving the slack bus
    double segment_r = 0.01; // pu per feeder segment
    double segment_x = 0.03; // pu per feeder segment
    double load_p_max = 1.4; // MW
    double load_q_max = 0.46; // MVar, bounds are [-max, max]
    double gen_p_max = 0.8;   // MW
    double gen_q_max = 0.46;  // MVar, bounds are [-max, max]
    double band_lo = 0.90; // pu, inclusive
    double band_hi = 1.10; // pu, inclusive
    long reconnect_after = -1; // steps until a disconnected node returns; <0 = never
    double solver_tolerance = 1e-8; // pu mismatch
    int solver_max_iterations = 50;
    ScenarioConfig scenario;

    static GridConfig from_file(const std::string& path);
    static GridConfig from_config(const KeyValueConfig& kv);
    void validate() const; // throws ConfigError
};

struct EnforcementResult {
    GridState state;
    std::vector<int> newly_disconnected; // controlled node indices
};

struct PowerFlowResult; // power_flow.hpp

// Grid data model plus grid-code bookkeeping. Construction wires the
// benchmark topology: `feeder_count` radial laterals of uniform segment
// impedance, one load and one generator actuator on every non-slack bus.
// Node i (0-based, controlled) sits on bus i+1; bus 0 is the slack.
class Grid {
public:
    static Grid build_benchmark(const GridConfig& config);

    const GridConfig& config() const { return config_; }
    const std::vector<Bus>& buses() const { return buses_; }
    const std::vector<Line>& lines() const { return lines_; }
    const std::vector<Actuator>& actuators() const { return actuators_; }
    Bus& bus_at(int id) { return buses_.at(static_cast<std::size_t>(id)); }
    Actuator& actuator_at(int id) { return actuators_.at(static_cast<std::size_t>(id)); }
    int bus_count() const { return static_cast<int>(buses_.size()); }
    int node_count() const { return bus_count() - 1; } // controlled nodes
    int actuator_count() const { return static_cast<int>(actuators_.size()); }

    // Exogenous base demand per controlled node (consumption, pu).
    void set_base_demand(std::span<const double> p, std::span<const double> q);
    std::span<const double> base_demand_p() const { return base_p_; }
    std::span<const double> base_demand_q() const { return base_q_; }

    // Validates against bounds (1e-9 slack for clamping round-off) and
    // stores the setpoints on the actuators. Throws std::invalid_argument
    // on dimension mismatch or an out-of-bounds entry.
    void commit_setpoints(const SetpointProposal& proposal);
    SetpointProposal current_setpoints() const;

    // Steady-state AC solution with the committed setpoints and demand.
    // Does not mutate the grid; see power_flow.hpp for the result type.
    PowerFlowResult solve() const;
    PowerFlowResult solve(const SetpointProposal& proposal) const;

    // Net complex injection per bus from in-service actuators and base
    // demand; out-of-service nodes inject nothing.
    void net_injections(std::vector<double>& p_out, std::vector<double>& q_out) const;

    // Switches every in-service controlled node whose bus voltage lies
    // strictly outside the closed band out of service (actuators off,
    // voltage entry reported 0.0 from now on). `step` stamps the
    // disconnection for the reconnect cooldown.
    EnforcementResult enforce_grid_code(const GridState& state, long step);
    EnforcementResult enforce_grid_code(const GridState& state); // band from config, step 0

    // Reconnects nodes whose cooldown expired (no-op when permanent).
    std::vector<int> update_cooldowns(long step);

    bool node_in_service(int node) const { return node_connected_[static_cast<std::size_t>(node)]; }
    std::vector<bool> node_service_flags() const { return node_connected_; }
    int in_service_node_count() const;

    // Forces every actuator and node into service and wipes grid-code
    // bookkeeping; the world model replica runs in this mode.
    void clear_grid_code_state();

private:
    GridConfig config_;
    std::vector<Bus> buses_;
    std::vector<Line> lines_;
    std::vector<Actuator> actuators_;
    std::vector<bool> node_connected_;    // grid-code service flag per controlled node
    std::vector<long> disconnected_at_;   // step of disconnection, -1 if in service
    std::vector<double> base_p_, base_q_; // per controlled node

    void set_node_service(int node, bool on, long step);
};

} // namespace voltgrid
