#include <doctest.h>

#include <cmath>

#include "co2net/errors.hpp"
#include "co2net/ode.hpp"
#include "oracles.hpp"

using namespace co2net;
using Eigen::VectorXd;

namespace {

const ode::Field decay = [](double, const VectorXd& x, VectorXd& dx) { dx = -x; };

VectorXd scalar(double v) {
    VectorXd x(1);
    x << v;
    return x;
}

} // namespace

TEST_CASE("step_fixed applies one explicit first-order step") {
    const ode::Field zero = [](double, const VectorXd& x, VectorXd& dx) { dx = VectorXd::Zero(x.size()); };
    CHECK(ode::step_fixed(scalar(3.7), zero, 0.0, 0.5)[0] == 3.7);
    CHECK(ode::step_fixed(scalar(1.0), decay, 0.0, 0.1)[0] == doctest::Approx(0.9).epsilon(1e-15));
    CHECK_THROWS_AS(ode::step_fixed(scalar(1.0), decay, 0.0, -0.1), ConfigError);

    const ode::Field bad = [](double, const VectorXd& x, VectorXd& dx) {
        dx = x;
        dx[0] = std::nan("");
    };
    CHECK_THROWS_AS(ode::step_fixed(scalar(1.0), bad, 0.0, 0.1), IntegrationError);
}

TEST_CASE("integrate records exact multiples of dt and keeps the final step") {
    ode::IntegratorConfig cfg;
    cfg.dt = 0.05;
    cfg.t_end = 1.0;
    cfg.stride = 7;
    const auto trace = ode::integrate(scalar(1.0), decay, cfg);
    REQUIRE(trace.rows() >= 2);
    for (std::size_t i = 0; i < trace.rows() - 1; ++i) {
        const double expected = static_cast<double>(i * 7) * cfg.dt;
        CHECK(trace.times[i] == expected); // multiplication, not accumulated addition
    }
    CHECK(trace.times.back() == 20.0 * cfg.dt);
}

TEST_CASE("integrate with a zero horizon returns a single row") {
    ode::IntegratorConfig cfg;
    cfg.dt = 0.1;
    cfg.t_end = 0.0;
    const auto trace = ode::integrate(scalar(2.5), decay, cfg);
    CHECK(trace.rows() == 1);
    CHECK(trace.states(0, 0) == 2.5);
}

TEST_CASE("integrate surfaces non-finite states with a time stamp") {
    const ode::Field blow = [](double, const VectorXd& x, VectorXd& dx) { dx = 1e155 * x; };
    ode::IntegratorConfig cfg;
    cfg.dt = 1.0;
    cfg.t_end = 10.0;
    CHECK_THROWS_AS(ode::integrate(scalar(1e155), blow, cfg), IntegrationError);
}

TEST_CASE("two half steps differ from one full step at second order") {
    // on dx/dt = -x from x = 1: full step gives 1 - dt, two half steps
    // give (1 - dt/2)^2, so the gap is exactly dt^2/4
    for (const double dt : {0.2, 0.1, 0.05}) {
        const auto full = ode::step_fixed(scalar(1.0), decay, 0.0, dt);
        const auto half = ode::step_fixed(ode::step_fixed(scalar(1.0), decay, 0.0, dt / 2.0),
                                          decay, dt / 2.0, dt / 2.0);
        CHECK(std::abs(half[0] - full[0]) == doctest::Approx(dt * dt / 4.0).epsilon(1e-12));
    }
}

TEST_CASE("fixed-step terminal error halves with dt") {
    // exact exponential oracle on dx/dt = -x
    ode::IntegratorConfig cfg;
    cfg.t_end = 1.0;
    cfg.stride = 1000000; // terminal value only
    const double exact = std::exp(-1.0);
    std::vector<double> errs;
    for (const double dt : {1e-3, 5e-4, 2.5e-4}) {
        cfg.dt = dt;
        const auto tr = ode::integrate(scalar(1.0), decay, cfg);
        errs.push_back(std::abs(tr.states(static_cast<Eigen::Index>(tr.rows()) - 1, 0) - exact));
    }
    for (std::size_t i = 1; i < errs.size(); ++i) {
        const double ratio = errs[i - 1] / errs[i];
        CHECK(ratio > 1.7);
        CHECK(ratio < 2.3);
    }
}

TEST_CASE("oracle reproduces the exponential to tight accuracy") {
    ode::IntegratorConfig cfg;
    cfg.dt = 0.01;
    cfg.t_end = 1.0;
    cfg.stride = 10;
    const auto tr = ode::oracle_integrate(scalar(1.0), decay, cfg);
    const double got = tr.states(static_cast<Eigen::Index>(tr.rows()) - 1, 0);
    CHECK(got == doctest::Approx(std::exp(-1.0)).epsilon(1e-8));
}

TEST_CASE("oracle conserves the oscillator energy over 100 periods") {
    const double omega = 2.0 * M_PI; // period 1
    const ode::Field osc = [omega](double, const VectorXd& x, VectorXd& dx) {
        dx.resize(2);
        dx << x[1], -omega * omega * x[0];
    };
    VectorXd x0(2);
    x0 << 1.0, 0.0;
    ode::IntegratorConfig cfg;
    cfg.dt = 0.25;
    cfg.t_end = 100.0;
    cfg.stride = 4;
    cfg.abs_tol = 1e-12;
    cfg.rel_tol = 1e-12;
    const auto tr = ode::oracle_integrate(x0, osc, cfg);
    const double e0 = 0.5 * omega * omega;
    for (Eigen::Index r = 0; r < static_cast<Eigen::Index>(tr.rows()); ++r) {
        const double e = 0.5 * tr.states(r, 1) * tr.states(r, 1) +
                         0.5 * omega * omega * tr.states(r, 0) * tr.states(r, 0);
        CHECK(std::abs(e - e0) / e0 < 1e-6);
    }
}

TEST_CASE("oracle is deterministic given the configuration") {
    const auto algae_p = oracles::reference_algae_params();
    const ode::Field field = [&](double, const VectorXd& x, VectorXd& dx) {
        double da, ds;
        algae::monod_field({x[0], x[1]}, 16.0, algae_p, da, ds);
        dx.resize(2);
        dx << da, ds;
    };
    VectorXd x0(2);
    x0 << 1.0, 106.0;
    ode::IntegratorConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 5.0;
    cfg.stride = 100;
    const auto a = ode::oracle_integrate(x0, field, cfg);
    const auto b = ode::oracle_integrate(x0, field, cfg);
    REQUIRE(a.rows() == b.rows());
    CHECK((a.states - b.states).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("fixed-step solution converges to the oracle on the growth model") {
    const auto algae_p = oracles::reference_algae_params();
    const ode::Field field = [&](double, const VectorXd& x, VectorXd& dx) {
        double da, ds;
        algae::monod_field({x[0], x[1]}, 16.0, algae_p, da, ds);
        dx.resize(2);
        dx << da, ds;
    };
    VectorXd x0(2);
    x0 << 1.0, 106.0;
    double prev_err = std::numeric_limits<double>::infinity();
    for (const double dt : {4e-3, 2e-3, 1e-3}) {
        ode::IntegratorConfig cfg;
        cfg.dt = dt;
        cfg.t_end = 5.0;
        cfg.stride = static_cast<int>(std::llround(0.1 / dt));
        const auto fixed = ode::integrate(x0, field, cfg);
        const auto oracle = ode::oracle_integrate(x0, field, cfg);
        const double err = ode::max_rel_error(fixed, oracle);
        CHECK(err < prev_err);
        prev_err = err;
    }
}

TEST_CASE("calibration accepts a loose tolerance at the initial step") {
    ode::CalibrationConfig cal;
    cal.dt0 = 0.01;
    cal.match_tol = 0.05;
    cal.t_end = 1.0;
    cal.stride = 10;
    CHECK(ode::calibrate_dt(scalar(1.0), decay, cal) == 0.01);
}

TEST_CASE("calibration refines the step on a fast system") {
    const ode::Field fast = [](double, const VectorXd& x, VectorXd& dx) { dx = -80.0 * x; };
    ode::CalibrationConfig cal;
    cal.dt0 = 0.05; // unstable for the explicit step at this rate
    cal.match_tol = 1e-3;
    cal.t_end = 0.5;
    cal.stride = 1;
    const double dt = ode::calibrate_dt(scalar(1.0), fast, cal);
    CHECK(dt < cal.dt0);
    CHECK(dt >= cal.dt_floor);
}

TEST_CASE("calibration fails cleanly when no step size can match") {
    ode::CalibrationConfig cal;
    cal.dt0 = 1e-3;
    cal.match_tol = 1e-18; // tighter than the method can reach
    cal.dt_floor = 1e-5;
    cal.t_end = 1.0;
    cal.stride = 10;
    CHECK_THROWS_AS(ode::calibrate_dt(scalar(1.0), decay, cal), CalibrationError);
}

TEST_CASE("trace shape mismatches are rejected") {
    ode::IntegratorConfig a;
    a.dt = 0.1;
    a.t_end = 1.0;
    ode::IntegratorConfig b = a;
    b.t_end = 2.0;
    const auto ta = ode::integrate(scalar(1.0), decay, a);
    const auto tb = ode::integrate(scalar(1.0), decay, b);
    CHECK_THROWS_AS(ode::max_rel_error(ta, tb), Error);
}
