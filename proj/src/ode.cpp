#include "co2net/ode.hpp"

#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <vector>

#include "co2net/errors.hpp"

namespace co2net::ode {

namespace {

long long step_count(double t_end, double dt) {
    if (t_end <= 0.0) return 0;
    return std::llround(t_end / dt);
}

std::vector<double> record_times(double dt, long long n_steps, int stride) {
    std::vector<double> ts;
    ts.reserve(static_cast<std::size_t>(n_steps / stride) + 2);
    for (long long k = 0; k <= n_steps; k += stride) ts.push_back(static_cast<double>(k) * dt);
    if (n_steps % stride != 0) ts.push_back(static_cast<double>(n_steps) * dt);
    return ts;
}

std::vector<std::string> default_names(Eigen::Index dim) {
    std::vector<std::string> names;
    for (Eigen::Index i = 0; i < dim; ++i) names.push_back("x" + std::to_string(i + 1));
    return names;
}

} // namespace

void IntegratorConfig::validate() const {
    if (!(dt > 0.0)) throw ConfigError("integrator: dt must be positive");
    if (t_end < 0.0) throw ConfigError("integrator: t_end must be non-negative");
    if (stride < 1) throw ConfigError("integrator: stride must be >= 1");
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw ConfigError("integrator: tolerances must be positive");
}

Eigen::VectorXd step_fixed(const Eigen::VectorXd& x, const Field& field, double t, double dt) {
    if (!(dt > 0.0)) throw ConfigError("step_fixed: dt must be positive");
    Eigen::VectorXd dx(x.size());
    field(t, x, dx);
    if (!dx.allFinite()) {
        throw IntegrationError("non-finite vector field at t = " + std::to_string(t));
    }
    return x + dt * dx;
}

SimulationTrace integrate(const Eigen::VectorXd& x0, const Field& field, const IntegratorConfig& config) {
    config.validate();
    const long long n = step_count(config.t_end, config.dt);
    const auto ts = record_times(config.dt, n, config.stride);

    SimulationTrace trace;
    trace.times = ts;
    trace.states.resize(static_cast<Eigen::Index>(ts.size()), x0.size());
    trace.state_names = default_names(x0.size());

    Eigen::VectorXd x = x0;
    Eigen::VectorXd dx(x0.size());
    std::size_t rec = 0;
    for (long long k = 0; k <= n; ++k) {
        const double t = static_cast<double>(k) * config.dt;
        if (k % config.stride == 0 || k == n) {
            trace.states.row(static_cast<Eigen::Index>(rec)) = x.transpose();
            ++rec;
        }
        if (k == n) break;
        field(t, x, dx);
        if (!dx.allFinite()) {
            throw IntegrationError("non-finite vector field at t = " + std::to_string(t));
        }
        x += config.dt * dx;
        if (!x.allFinite()) {
            throw IntegrationError("non-finite state at t = " + std::to_string(t + config.dt));
        }
    }
    return trace;
}

SimulationTrace oracle_integrate(const Eigen::VectorXd& x0, const Field& field, const IntegratorConfig& config) {
    config.validate();
    namespace odeint = boost::numeric::odeint;
    using StdState = std::vector<double>;

    const long long n = step_count(config.t_end, config.dt);
    const auto ts = record_times(config.dt, n, config.stride);

    SimulationTrace trace;
    trace.times = ts;
    trace.states.resize(static_cast<Eigen::Index>(ts.size()), x0.size());
    trace.state_names = default_names(x0.size());

    const auto dim = x0.size();
    Eigen::VectorXd xe(dim), dxe(dim);
    auto sys = [&](const StdState& x, StdState& dxdt, double t) {
        for (Eigen::Index i = 0; i < dim; ++i) xe[i] = x[static_cast<std::size_t>(i)];
        field(t, xe, dxe);
        for (Eigen::Index i = 0; i < dim; ++i) dxdt[static_cast<std::size_t>(i)] = dxe[i];
    };

    StdState x(static_cast<std::size_t>(dim));
    for (Eigen::Index i = 0; i < dim; ++i) x[static_cast<std::size_t>(i)] = x0[i];

    std::size_t rec = 0;
    auto observer = [&](const StdState& s, double /*t*/) {
        for (Eigen::Index i = 0; i < dim; ++i) {
            const double v = s[static_cast<std::size_t>(i)];
            if (!std::isfinite(v)) throw StiffnessError("oracle produced a non-finite state");
            trace.states(static_cast<Eigen::Index>(rec), i) = v;
        }
        ++rec;
    };

    auto stepper = odeint::make_controlled<odeint::runge_kutta_cash_karp54<StdState>>(config.abs_tol, config.rel_tol);
    try {
        odeint::integrate_times(stepper, sys, x, ts.begin(), ts.end(), config.dt, observer);
    } catch (const std::overflow_error& e) {
        // odeint's failed-step checker: too many consecutive rejected steps
        throw StiffnessError(std::string("oracle step size underflow: ") + e.what());
    }
    return trace;
}

double max_rel_error(const SimulationTrace& a, const SimulationTrace& b, double denom_floor) {
    if (a.rows() != b.rows() || a.states.cols() != b.states.cols()) {
        throw Error("max_rel_error: trace shapes differ");
    }
    for (std::size_t i = 0; i < a.rows(); ++i) {
        if (a.times[i] != b.times[i]) throw Error("max_rel_error: trace time grids differ");
    }
    double worst = 0.0;
    for (Eigen::Index r = 0; r < static_cast<Eigen::Index>(a.rows()); ++r) {
        for (Eigen::Index c = 0; c < a.states.cols(); ++c) {
            const double denom = std::max(std::abs(b.states(r, c)), denom_floor);
            worst = std::max(worst, std::abs(a.states(r, c) - b.states(r, c)) / denom);
        }
    }
    return worst;
}

double calibrate_dt(const Eigen::VectorXd& x0, const Field& field, const CalibrationConfig& config) {
    if (!(config.dt0 > 0.0)) throw ConfigError("calibrate_dt: dt0 must be positive");
    double dt = config.dt0;
    while (dt >= config.dt_floor) {
        IntegratorConfig ic;
        ic.dt = dt;
        ic.t_end = config.t_end;
        ic.stride = config.stride;
        ic.abs_tol = config.abs_tol;
        ic.rel_tol = config.rel_tol;
        try {
            const auto fixed = integrate(x0, field, ic);
            const auto oracle = oracle_integrate(x0, field, ic);
            if (max_rel_error(fixed, oracle) <= config.match_tol) return dt;
        } catch (const StiffnessError&) {
            throw;
        } catch (const IntegrationError&) {
            // the coarse step blew up; treat as a mismatch and refine
        }
        dt *= 0.5;
    }
    throw CalibrationError("no step size above the floor matched the oracle");
}

} // namespace co2net::ode
