#pragma once

#include <map>
#include <string>

#include "co2net/carbon_network.hpp"
#include "co2net/config.hpp"
#include "co2net/digester.hpp"
#include "co2net/finite_time_control.hpp"
#include "co2net/microalgae.hpp"
#include "co2net/trace.hpp"

namespace co2net::sim {

struct DigesterSetup {
    digester::Params params;
    digester::Equilibrium equilibrium;
};
DigesterSetup load_digester(const ConfigFile& cfg);

/// Reads [controller]: t_max, preset (or explicit x0), settle_tol,
/// singularity_threshold.
control::ControllerConfig load_controller(const ConfigFile& cfg);

struct MonodSetup {
    algae::Params params;
    double i_ref;
    double x_alg_0;
    double s_0;
};
MonodSetup load_monod(const ConfigFile& cfg);

struct ClosedLoopConfig {
    double dt = 5e-5;
    double t_end = 0.0; // 0 means run to T_max
    int stride = 200;
    bool strict_feasibility = false; // abort on negative commanded dilution
};

struct ClosedLoopResult {
    SimulationTrace trace;        // translated states, m12/V/J, physical dilutions
    double t_max = 0.0;
    double settling_time = -1.0;  // first time below the settle threshold, -1 if never
    double settle_threshold = 0.0;
    double v0 = 0.0;              // V(x0)
    double j_end = 0.0;           // accumulated performance functional
    double final_state_max = 0.0; // max |x_tilde_i| at t_end
    double m12_end = 0.0;         // CO2 outflow at the final state
    long long infeasible_steps = 0;
    double first_infeasible_time = -1.0;
};

/// Integrates the translated digester under the initial-condition-dependent
/// feedback with the fixed-step solver, accumulating the performance
/// functional and logging dilution feasibility violations.
ClosedLoopResult run_digester_closed_loop(const DigesterSetup& setup,
                                          const control::ControllerConfig& controller,
                                          const ClosedLoopConfig& config);

struct MonodRunConfig {
    double dt = 5e-5;
    double t_end = 20.0;
    int stride = 200;
};

struct MonodRunResult {
    SimulationTrace trace;   // X_ALG, S states; m23 flow
    double x_alg_end = 0.0;
    double m23_end = 0.0;
    double m23_peak = 0.0;
    double m23_peak_time = 0.0;
    double x_settle_time = -1.0; // entry into +-5% of the final value, -1 if never
};

/// Constant-light cultivation run from the reference initial conditions.
MonodRunResult run_monod_open_loop(const MonodSetup& setup, const MonodRunConfig& config);

struct NetworkRunConfig {
    double dt = 5e-5;
    double t_end = 20.0;
    int stride = 200;
    double vd = 1.0;
    double vm = 1.0;
    double delta = 1.0; // circularity horizon [d]
};

struct NetworkRunResult {
    SimulationTrace trace; // X_ALG, S, m2; flows m12, m23, dm2dt
    ClosedLoopResult digester;
    MonodRunResult cultivation;
    double m12_ss = 0.0;
    double m23_ss = 0.0;
    double compensation_volume = 0.0; // Vm nulling the accumulation
    double volume_ratio = 0.0;        // compensation volume / Vd
    double lambda_a = 0.0;            // circularity without microalgae
    double lambda_b = 0.0;            // with microalgae at the configured Vm
    double lambda_b_at_compensation = 0.0;
    bool lambda_b_clamped = false;
    double uptake_emission_ratio = 0.0; // m23_ss / m12_ss
};

/// Coupled study: controlled digester, constant-light cultivation and the
/// atmospheric balance, plus the volume/circularity summary.
NetworkRunResult run_network(const DigesterSetup& digester_setup,
                             const control::ControllerConfig& controller,
                             const MonodSetup& monod_setup, const NetworkRunConfig& config);

/// Key-value summary blocks for the machine-readable outputs.
std::map<std::string, std::string> summarize(const ClosedLoopResult& r);
std::map<std::string, std::string> summarize(const NetworkRunResult& r);

} // namespace co2net::sim
