#include <doctest.h>

#include <cmath>
#include <sstream>

#include "co2net/errors.hpp"
#include "co2net/sim.hpp"
#include "oracles.hpp"

using namespace co2net;

namespace {

sim::DigesterSetup reference_setup() {
    sim::DigesterSetup s;
    s.params = oracles::reference_digester_params();
    s.equilibrium = oracles::reference_equilibrium(s.params);
    return s;
}

sim::MonodSetup reference_monod() {
    sim::MonodSetup s;
    s.params = oracles::reference_algae_params();
    s.i_ref = 16.0;
    s.x_alg_0 = 1.0;
    s.s_0 = 106.0;
    return s;
}

} // namespace

TEST_CASE("closed-loop digester run settles inside the bound and pays the expected cost") {
    const auto setup = reference_setup();
    control::ControllerConfig cc;
    cc.t_max = 3.5;
    cc.x0 = control::preset_x0(1);

    sim::ClosedLoopConfig rc;
    rc.dt = 5e-5;
    const auto run = sim::run_digester_closed_loop(setup, cc, rc);

    CHECK(run.settling_time > 2.5);
    CHECK(run.settling_time <= 3.5);
    CHECK(run.final_state_max < 1e-2);
    CHECK(run.m12_end == doctest::Approx(175.336).epsilon(1e-3));
    // the value function is the optimal cost
    CHECK(std::abs(run.j_end - run.v0) / run.v0 < 0.01);
    // the aggressive transient demands physically infeasible dilutions; logged
    CHECK(run.infeasible_steps > 0);
    CHECK(run.first_infeasible_time >= 0.0);

    SUBCASE("strict feasibility mode aborts instead") {
        sim::ClosedLoopConfig strict = rc;
        strict.strict_feasibility = true;
        CHECK_THROWS_AS(sim::run_digester_closed_loop(setup, cc, strict), Error);
    }
}

TEST_CASE("closed-loop trace carries states, flow, value, cost and inputs") {
    const auto setup = reference_setup();
    control::ControllerConfig cc;
    cc.t_max = 2.0;
    cc.x0 = control::preset_x0(2);
    sim::ClosedLoopConfig rc;
    rc.dt = 1e-4;
    rc.stride = 1000;
    const auto run = sim::run_digester_closed_loop(setup, cc, rc);

    REQUIRE(run.trace.rows() > 5);
    CHECK(run.trace.state_names.size() == 6);
    CHECK(run.trace.flow_names == std::vector<std::string>{"m12", "V", "J"});
    CHECK(run.trace.input_names.size() == 6);
    CHECK(run.trace.times.front() == 0.0);
    CHECK(run.trace.times.back() == doctest::Approx(2.0).epsilon(1e-12));
    // V decays monotonically along the optimal trajectory
    for (Eigen::Index r = 1; r < run.trace.flows.rows(); ++r) {
        CHECK(run.trace.flows(r, 1) <= run.trace.flows(r - 1, 1) + 1e-12);
    }
    // J is non-decreasing
    for (Eigen::Index r = 1; r < run.trace.flows.rows(); ++r) {
        CHECK(run.trace.flows(r, 2) >= run.trace.flows(r - 1, 2) - 1e-12);
    }
    // the summary block mirrors the run
    const auto kv = sim::summarize(run);
    CHECK(kv.at("settled_before_t_max") == "1");
    CHECK(kv.at("infeasible_dilution_steps") != "0");
}

TEST_CASE("constant-light cultivation reproduces the reference trajectory bands") {
    const auto setup = reference_monod();
    sim::MonodRunConfig rc;
    rc.dt = 5e-5;
    rc.t_end = 20.0;
    const auto run = sim::run_monod_open_loop(setup, rc);

    CHECK(run.x_alg_end == doctest::Approx(50.0).epsilon(0.02));
    CHECK(run.m23_end == doctest::Approx(0.28).epsilon(0.01));
    CHECK(run.m23_peak > 0.47);
    CHECK(run.m23_peak < 0.57);
    CHECK(run.m23_peak_time < 1.0);
    CHECK(run.x_settle_time > 10.0);
    CHECK(run.x_settle_time < 14.0);
}

TEST_CASE("coupled network run: flows, compensation volume and circularity") {
    const auto dsetup = reference_setup();
    const auto msetup = reference_monod();
    control::ControllerConfig cc;
    cc.t_max = 3.5;
    cc.x0 = control::preset_x0(1);

    sim::NetworkRunConfig nc;
    nc.dt = 1e-4; // adequate for the summary quantities
    nc.t_end = 20.0;
    const auto run = sim::run_network(dsetup, cc, msetup, nc);

    CHECK(run.m12_ss == doctest::Approx(175.336).epsilon(1e-3));
    CHECK(run.m23_ss == doctest::Approx(0.28).epsilon(0.01));
    CHECK(run.volume_ratio == doctest::Approx(625.0).epsilon(0.05));
    CHECK(run.lambda_a == doctest::Approx(-run.m12_ss).epsilon(1e-12));
    // emitter dominates a unit-volume cultivation by orders of magnitude
    CHECK(run.lambda_b < 0.0);
    CHECK(run.lambda_b > run.lambda_a);
    CHECK(std::abs(run.lambda_b_at_compensation) < 1e-6);
    CHECK(run.uptake_emission_ratio < 5e-3);

    SUBCASE("the atmospheric stock is the time integral of the recorded rates") {
        const auto& tr = run.trace;
        double vd_integral = 0.0, vm_integral = 0.0;
        for (std::size_t r = 0; r + 1 < tr.rows(); ++r) {
            const double dt = tr.times[r + 1] - tr.times[r];
            vd_integral += dt * tr.flows(static_cast<Eigen::Index>(r), 0);
            vm_integral += dt * tr.flows(static_cast<Eigen::Index>(r), 1);
        }
        const double expected = nc.vd * vd_integral - nc.vm * vm_integral;
        const double got = tr.states(static_cast<Eigen::Index>(tr.rows()) - 1, 2);
        CHECK(got == doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("trace files use the comma-separated full-precision format") {
    SimulationTrace tr;
    tr.state_names = {"a", "b"};
    tr.flow_names = {"f"};
    tr.times = {0.0, 0.125};
    tr.states.resize(2, 2);
    tr.states << 1.0, 2.0, 3.0, 0.1;
    tr.flows.resize(2, 1);
    tr.flows << 10.0, 1.0 / 3.0;

    std::ostringstream os;
    tr.write_csv(os);
    const std::string text = os.str();
    CHECK(text.find("t,a,b,f\n") == 0);
    CHECK(text.find("0,1,2,10\n") != std::string::npos);
    // full precision survives the round trip
    CHECK(text.find("0.33333333333333331") != std::string::npos);
}

TEST_CASE("scenario loaders assemble the reference configuration") {
    const auto cfg = oracles::reference_config();
    const auto dsetup = sim::load_digester(cfg);
    CHECK(dsetup.params.fr == 0.15);
    const auto ctrl = sim::load_controller(cfg);
    CHECK(ctrl.t_max == 3.5);
    CHECK(ctrl.x0 == control::preset_x0(1));
    const auto msetup = sim::load_monod(cfg);
    CHECK(msetup.i_ref == 16.0);

    SUBCASE("explicit x0 overrides the preset") {
        auto cfg2 = oracles::reference_config();
        cfg2.override_value("controller.x0", "0.1, 0.2, 0.3, 0.4, 0.5, 0.6");
        const auto c2 = sim::load_controller(cfg2);
        CHECK(c2.x0[3] == 0.4);
    }
    SUBCASE("unknown preset and bad t_max are rejected") {
        auto cfg3 = oracles::reference_config();
        cfg3.override_value("controller.preset", "9");
        CHECK_THROWS_AS(sim::load_controller(cfg3), ConfigError);
        auto cfg4 = oracles::reference_config();
        cfg4.override_value("controller.t_max", "0.9");
        CHECK_THROWS_AS(sim::load_controller(cfg4), SettlingBoundError);
    }
}
