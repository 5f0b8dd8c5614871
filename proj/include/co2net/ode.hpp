#pragma once

#include <Eigen/Dense>
#include <functional>

#include "co2net/trace.hpp"

namespace co2net::ode {

/// Vector field dx = f(t, x).
using Field = std::function<void(double t, const Eigen::VectorXd& x, Eigen::VectorXd& dx)>;

enum class Method { fixed_first_order, adaptive_oracle };

struct IntegratorConfig {
    double dt = 5e-5;          // days
    double t_end = 0.0;        // days
    int stride = 200;          // record every stride-th step plus the final one
    Method method = Method::fixed_first_order;
    double abs_tol = 1e-10;    // oracle only
    double rel_tol = 1e-10;    // oracle only
    void validate() const;
};

/// One explicit first-order step x + dt*f(t, x).
Eigen::VectorXd step_fixed(const Eigen::VectorXd& x, const Field& field, double t, double dt);

/// Fixed-step integration over [0, t_end]. The horizon is rounded to a
/// whole number of steps; recorded times are exact multiples k*dt.
SimulationTrace integrate(const Eigen::VectorXd& x0, const Field& field, const IntegratorConfig& config);

/// Independent adaptive embedded-pair integrator (Cash-Karp 5(4) with
/// step-size control), sampled at the same record times integrate() would
/// use, so traces from the two paths compare row by row.
SimulationTrace oracle_integrate(const Eigen::VectorXd& x0, const Field& field, const IntegratorConfig& config);

/// Max over rows and state columns of |a - b| / max(|b|, denom_floor).
/// Both traces must share their time grids.
double max_rel_error(const SimulationTrace& a, const SimulationTrace& b, double denom_floor = 1e-6);

struct CalibrationConfig {
    double dt0 = 8e-4;         // ladder start; halved until the match holds
    double match_tol = 5e-5;   // max relative state error against the oracle
    double dt_floor = 1e-8;    // below this the calibration fails
    double t_end = 20.0;
    int stride = 200;
    double abs_tol = 1e-10;    // oracle tolerances
    double rel_tol = 1e-10;
};

/// Largest dt in {dt0, dt0/2, ...} whose fixed-step solution stays within
/// match_tol of the adaptive oracle over the horizon.
double calibrate_dt(const Eigen::VectorXd& x0, const Field& field, const CalibrationConfig& config);

} // namespace co2net::ode
