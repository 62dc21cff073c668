#include "voltgrid/power_flow.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <queue>
#include <stdexcept>
#include <vector>

namespace voltgrid {

namespace {

// Per-bus scheduled injections under `proposal` (committed setpoints are
// ignored; the proposal is the whole actuator vector).
void scheduled_injections(const Grid& grid, const SetpointProposal& sp,
                          std::vector<double>& p, std::vector<double>& q) {
    const auto& acts = grid.actuators();
    if (sp.p.size() != acts.size() || sp.q.size() != acts.size())
        throw std::invalid_argument("setpoint proposal dimension mismatch");
    p.assign(grid.buses().size(), 0.0);
    q.assign(grid.buses().size(), 0.0);
    for (std::size_t a = 0; a < acts.size(); ++a) {
        const Actuator& act = acts[a];
        if (!act.in_service) continue;
        const double sign = (act.kind == ActuatorKind::generator) ? 1.0 : -1.0;
        p[static_cast<std::size_t>(act.bus_id)] += sign * std::clamp(sp.p[a], act.p_min, act.p_max);
        q[static_cast<std::size_t>(act.bus_id)] += sign * std::clamp(sp.q[a], act.q_min, act.q_max);
    }
    const auto base_p = grid.base_demand_p();
    const auto base_q = grid.base_demand_q();
    for (std::size_t node = 0; node < base_p.size(); ++node) {
        if (!grid.node_in_service(static_cast<int>(node))) continue;
        p[node + 1] -= base_p[node];
        q[node + 1] -= base_q[node];
    }
}

} // namespace

PowerFlowResult solve_power_flow(const Grid& grid, const SetpointProposal& proposal) {
    const auto& buses = grid.buses();
    const int nb = grid.bus_count();

    int slack = -1;
    for (const Bus& b : buses) {
        if (b.kind == BusKind::slack) {
            if (slack >= 0) throw std::invalid_argument("grid has more than one slack bus");
            slack = b.id;
        }
    }
    if (slack < 0) throw std::invalid_argument("grid has no slack bus");
    if (!buses[static_cast<std::size_t>(slack)].in_service)
        throw std::invalid_argument("slack bus is out of service");

    std::vector<double> pspec, qspec;
    scheduled_injections(grid, proposal, pspec, qspec);

    // Live subnetwork: in-service buses reachable from the slack over lines
    // whose endpoints are both in service. Everything else reports 0.0.
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(nb));
    for (const Line& l : grid.lines()) {
        if (!buses[static_cast<std::size_t>(l.from_bus)].in_service) continue;
        if (!buses[static_cast<std::size_t>(l.to_bus)].in_service) continue;
        adj[static_cast<std::size_t>(l.from_bus)].push_back(l.to_bus);
        adj[static_cast<std::size_t>(l.to_bus)].push_back(l.from_bus);
    }
    std::vector<char> live(static_cast<std::size_t>(nb), 0);
    std::queue<int> frontier;
    frontier.push(slack);
    live[static_cast<std::size_t>(slack)] = 1;
    while (!frontier.empty()) {
        int b = frontier.front();
        frontier.pop();
        for (int nbr : adj[static_cast<std::size_t>(b)]) {
            if (!live[static_cast<std::size_t>(nbr)]) {
                live[static_cast<std::size_t>(nbr)] = 1;
                frontier.push(nbr);
            }
        }
    }

    // Dense nodal admittance over live buses (series elements only).
    std::vector<int> live_ids;
    std::vector<int> live_index(static_cast<std::size_t>(nb), -1);
    for (int b = 0; b < nb; ++b) {
        if (live[static_cast<std::size_t>(b)]) {
            live_index[static_cast<std::size_t>(b)] = static_cast<int>(live_ids.size());
            live_ids.push_back(b);
        }
    }
    const int nl = static_cast<int>(live_ids.size());
    Eigen::MatrixXcd ybus = Eigen::MatrixXcd::Zero(nl, nl);
    for (const Line& l : grid.lines()) {
        const int fi = live_index[static_cast<std::size_t>(l.from_bus)];
        const int ti = live_index[static_cast<std::size_t>(l.to_bus)];
        if (fi < 0 || ti < 0) continue;
        const std::complex<double> y = 1.0 / std::complex<double>(l.resistance, l.reactance);
        ybus(fi, fi) += y;
        ybus(ti, ti) += y;
        ybus(fi, ti) -= y;
        ybus(ti, fi) -= y;
    }

    // Unknowns: angle and magnitude of live PQ buses.
    std::vector<int> pq; // live indices
    for (int k = 0; k < nl; ++k)
        if (live_ids[static_cast<std::size_t>(k)] != slack) pq.push_back(k);
    const int m = static_cast<int>(pq.size());

    Eigen::VectorXd vm = Eigen::VectorXd::Ones(nl);  // flat start
    Eigen::VectorXd va = Eigen::VectorXd::Zero(nl);
    vm(live_index[static_cast<std::size_t>(slack)]) =
        buses[static_cast<std::size_t>(slack)].voltage_mag;

    PowerFlowResult result;
    const double tol = grid.config().solver_tolerance;
    const int max_iter = grid.config().solver_max_iterations;

    Eigen::VectorXd pcalc(nl), qcalc(nl);
    auto compute_flows = [&]() {
        for (int i = 0; i < nl; ++i) {
            double pi = 0.0, qi = 0.0;
            for (int j = 0; j < nl; ++j) {
                const double g = ybus(i, j).real();
                const double b = ybus(i, j).imag();
                const double th = va(i) - va(j);
                pi += vm(j) * (g * std::cos(th) + b * std::sin(th));
                qi += vm(j) * (g * std::sin(th) - b * std::cos(th));
            }
            pcalc(i) = vm(i) * pi;
            qcalc(i) = vm(i) * qi;
        }
    };

    bool converged = false;
    bool blew_up = false;
    int iterations = 0;
    double max_mismatch = 0.0;
    for (int iter = 0; iter <= max_iter; ++iter) {
        compute_flows();
        max_mismatch = 0.0;
        Eigen::VectorXd rhs(2 * m);
        for (int k = 0; k < m; ++k) {
            const int i = pq[static_cast<std::size_t>(k)];
            const int bus = live_ids[static_cast<std::size_t>(i)];
            rhs(k) = pspec[static_cast<std::size_t>(bus)] - pcalc(i);
            rhs(m + k) = qspec[static_cast<std::size_t>(bus)] - qcalc(i);
            max_mismatch = std::max({max_mismatch, std::abs(rhs(k)), std::abs(rhs(m + k))});
        }
        if (!std::isfinite(max_mismatch)) {
            blew_up = true;
            break;
        }
        if (max_mismatch < tol) {
            converged = true;
            break;
        }
        if (iter == max_iter || m == 0) break;

        Eigen::MatrixXd jac(2 * m, 2 * m);
        for (int r = 0; r < m; ++r) {
            const int i = pq[static_cast<std::size_t>(r)];
            for (int c = 0; c < m; ++c) {
                const int j = pq[static_cast<std::size_t>(c)];
                const double g = ybus(i, j).real();
                const double b = ybus(i, j).imag();
                if (i == j) {
                    jac(r, c) = -qcalc(i) - b * vm(i) * vm(i);
                    jac(r, m + c) = pcalc(i) / vm(i) + g * vm(i);
                    jac(m + r, c) = pcalc(i) - g * vm(i) * vm(i);
                    jac(m + r, m + c) = qcalc(i) / vm(i) - b * vm(i);
                } else {
                    const double th = va(i) - va(j);
                    const double cs = std::cos(th), sn = std::sin(th);
                    jac(r, c) = vm(i) * vm(j) * (g * sn - b * cs);
                    jac(r, m + c) = vm(i) * (g * cs + b * sn);
                    jac(m + r, c) = -vm(i) * vm(j) * (g * cs + b * sn);
                    jac(m + r, m + c) = vm(i) * (g * sn - b * cs);
                }
            }
        }
        Eigen::VectorXd dx = jac.partialPivLu().solve(rhs);
        if (!dx.allFinite()) {
            blew_up = true;
            break;
        }
        for (int k = 0; k < m; ++k) {
            const int i = pq[static_cast<std::size_t>(k)];
            va(i) += dx(k);
            vm(i) += dx(m + k);
        }
        ++iterations;
        // A collapsing magnitude means the case has no physical solution.
        for (int k = 0; k < m; ++k) {
            if (vm(pq[static_cast<std::size_t>(k)]) < 0.05) {
                blew_up = true;
                break;
            }
        }
        if (blew_up) break;
    }

    result.converged = converged && !blew_up;
    result.iterations = iterations;
    result.max_mismatch = max_mismatch;
    result.state.voltages.assign(static_cast<std::size_t>(nb), 0.0);
    result.angles.assign(static_cast<std::size_t>(nb), 0.0);
    result.state.in_service_flags = grid.node_service_flags();
    if (result.converged) {
        for (int b = 0; b < nb; ++b) {
            const int i = live_index[static_cast<std::size_t>(b)];
            if (i < 0) continue; // dead bus stays at 0.0
            // Grid-code disconnected nodes stay electrically present as
            // passive junctions but are reported at exactly 0.0 pu.
            if (b != slack && !grid.node_in_service(b - 1)) continue;
            result.state.voltages[static_cast<std::size_t>(b)] = vm(i);
            result.angles[static_cast<std::size_t>(b)] = va(i);
        }
    }
    return result;
}

} // namespace voltgrid
