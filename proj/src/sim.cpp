#include "co2net/sim.hpp"

#include <cmath>
#include <sstream>

#include "co2net/errors.hpp"

namespace co2net::sim {

namespace {

std::string format(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

long long whole_steps(double t_end, double dt) {
    return t_end <= 0.0 ? 0 : std::llround(t_end / dt);
}

} // namespace

DigesterSetup load_digester(const ConfigFile& cfg) {
    DigesterSetup s;
    s.params = digester::Params::from_config(cfg);
    s.equilibrium = digester::Equilibrium::from_config(cfg, s.params);
    return s;
}

control::ControllerConfig load_controller(const ConfigFile& cfg) {
    cfg.require_only("controller", {"t_max", "preset", "x0", "settle_tol", "singularity_threshold"});
    control::ControllerConfig c;
    c.t_max = cfg.number_or("controller", "t_max", 3.5);
    if (cfg.has("controller", "x0")) {
        const auto v = cfg.numbers("controller", "x0", 6);
        c.x0.resize(6);
        for (int i = 0; i < 6; ++i) c.x0[i] = v[static_cast<std::size_t>(i)];
    } else {
        c.x0 = control::preset_x0(static_cast<int>(cfg.integer_or("controller", "preset", 1)));
    }
    c.settle_tol = cfg.number_or("controller", "settle_tol", 1e-4);
    c.singularity_threshold = cfg.number_or("controller", "singularity_threshold", 1e-6);
    c.validate();
    return c;
}

MonodSetup load_monod(const ConfigFile& cfg) {
    MonodSetup s;
    s.params = algae::Params::from_config(cfg);
    s.i_ref = cfg.number("microalgae", "i_ref");
    s.x_alg_0 = cfg.number("microalgae", "x_alg_0");
    s.s_0 = cfg.number("microalgae", "s_0");
    if (s.i_ref < 0.0 || s.x_alg_0 < 0.0 || s.s_0 < 0.0) {
        throw ConfigError("microalgae: i_ref, x_alg_0 and s_0 must be non-negative");
    }
    return s;
}

ClosedLoopResult run_digester_closed_loop(const DigesterSetup& setup,
                                          const control::ControllerConfig& controller,
                                          const ClosedLoopConfig& config) {
    if (!(config.dt > 0.0) || config.stride < 1) {
        throw ConfigError("closed loop: need dt > 0 and stride >= 1");
    }
    const digester::TranslatedModel model(setup.params, setup.equilibrium,
                                          controller.singularity_threshold);
    control::IcdController ctrl([&model](const auto& x) { return model.drift(x); },
                                [&model](const auto& x) { return model.input_gain(x); }, controller);

    const double t_end = config.t_end > 0.0 ? config.t_end : controller.t_max;
    const long long n = whole_steps(t_end, config.dt);

    ClosedLoopResult result;
    result.t_max = controller.t_max;
    result.settle_threshold = ctrl.settle_threshold();
    result.v0 = control::lyapunov_v(controller.x0, ctrl.pq());

    auto& trace = result.trace;
    trace.state_names = {"xt1", "xt2", "xt3", "xt4", "xt5", "xt6"};
    trace.flow_names = {"m12", "V", "J"};
    trace.input_names = {"u1", "u2", "u3", "u4", "u5", "u6"};
    const auto n_records = static_cast<Eigen::Index>(n / config.stride + 2);
    trace.states.resize(n_records, 6);
    trace.flows.resize(n_records, 3);
    trace.inputs.resize(n_records, 6);

    Eigen::VectorXd x = controller.x0;
    double j = 0.0;
    Eigen::Index rec = 0;
    for (long long k = 0; k <= n; ++k) {
        const double t = static_cast<double>(k) * config.dt;
        if (result.settling_time < 0.0 && x.norm() < ctrl.settle_threshold()) {
            result.settling_time = t;
        }
        const Eigen::VectorXd u = ctrl.action(x);
        const Eigen::VectorXd u_physical = setup.equilibrium.u_ss + u;
        if (u_physical.minCoeff() < 0.0) {
            ++result.infeasible_steps;
            if (result.first_infeasible_time < 0.0) result.first_infeasible_time = t;
            if (config.strict_feasibility) {
                throw Error("closed loop: negative commanded dilution at t = " + std::to_string(t));
            }
        }

        const digester::State physical = digester::State::from(model.physical_state(x));
        if (k % config.stride == 0 || k == n) {
            trace.times.push_back(t);
            trace.states.row(rec) = x.transpose();
            trace.flows(rec, 0) = digester::co2_outflow(physical, setup.params);
            trace.flows(rec, 1) = control::lyapunov_v(x, ctrl.pq());
            trace.flows(rec, 2) = j;
            trace.inputs.row(rec) = u_physical.transpose();
            ++rec;
        }
        if (k == n) break;

        const Eigen::VectorXd f = model.drift(x);
        const Eigen::VectorXd g = model.input_gain(x);
        j += control::cost_step(x, u, f, g, ctrl.pq(), config.dt);
        x += config.dt * (f + g.cwiseProduct(u));
        if (!x.allFinite()) {
            throw IntegrationError("closed loop: non-finite state at t = " + std::to_string(t + config.dt));
        }
    }
    trace.states.conservativeResize(rec, Eigen::NoChange);
    trace.flows.conservativeResize(rec, Eigen::NoChange);
    trace.inputs.conservativeResize(rec, Eigen::NoChange);

    result.j_end = j;
    result.final_state_max = x.cwiseAbs().maxCoeff();
    result.m12_end =
        digester::co2_outflow(digester::State::from(model.physical_state(x)), setup.params);
    return result;
}

MonodRunResult run_monod_open_loop(const MonodSetup& setup, const MonodRunConfig& config) {
    if (!(config.dt > 0.0) || config.stride < 1) {
        throw ConfigError("cultivation run: need dt > 0 and stride >= 1");
    }
    const long long n = whole_steps(config.t_end, config.dt);

    MonodRunResult result;
    auto& trace = result.trace;
    trace.state_names = {"x_alg", "s"};
    trace.flow_names = {"m23"};
    const auto n_records = static_cast<Eigen::Index>(n / config.stride + 2);
    trace.states.resize(n_records, 2);
    trace.flows.resize(n_records, 1);

    algae::State x{setup.x_alg_0, setup.s_0};
    Eigen::Index rec = 0;
    for (long long k = 0; k <= n; ++k) {
        const double t = static_cast<double>(k) * config.dt;
        const double m23 = algae::carbon_uptake(x.s, setup.i_ref, setup.params);
        if (m23 > result.m23_peak) {
            result.m23_peak = m23;
            result.m23_peak_time = t;
        }
        if (k % config.stride == 0 || k == n) {
            trace.times.push_back(t);
            trace.states(rec, 0) = x.x_alg;
            trace.states(rec, 1) = x.s;
            trace.flows(rec, 0) = m23;
            ++rec;
        }
        if (k == n) break;
        double dx, ds;
        algae::monod_field(x, setup.i_ref, setup.params, dx, ds);
        x.x_alg += config.dt * dx;
        x.s += config.dt * ds;
        if (x.x_alg < 0.0) {
            if (x.x_alg <= -1e-9) throw IntegrationError("cultivation: biomass went negative beyond tolerance");
            x.x_alg = 0.0;
        }
        if (x.s < 0.0) {
            if (x.s <= -1e-9) throw IntegrationError("cultivation: nutrient went negative beyond tolerance");
            x.s = 0.0;
        }
    }
    trace.states.conservativeResize(rec, Eigen::NoChange);
    trace.flows.conservativeResize(rec, Eigen::NoChange);

    result.x_alg_end = x.x_alg;
    result.m23_end = algae::carbon_uptake(x.s, setup.i_ref, setup.params);

    // entry time into the +-5% band around the final biomass, staying inside
    const double band = 0.05 * result.x_alg_end;
    for (Eigen::Index r = 0; r < rec; ++r) {
        if (std::abs(trace.states(r, 0) - result.x_alg_end) <= band) {
            bool stays = true;
            for (Eigen::Index r2 = r; r2 < rec; ++r2) {
                if (std::abs(trace.states(r2, 0) - result.x_alg_end) > band) {
                    stays = false;
                    break;
                }
            }
            if (stays) {
                result.x_settle_time = trace.times[static_cast<std::size_t>(r)];
                break;
            }
        }
    }
    return result;
}

NetworkRunResult run_network(const DigesterSetup& digester_setup,
                             const control::ControllerConfig& controller,
                             const MonodSetup& monod_setup, const NetworkRunConfig& config) {
    NetworkRunResult result;

    ClosedLoopConfig dcfg;
    dcfg.dt = config.dt;
    dcfg.t_end = config.t_end;
    dcfg.stride = config.stride;
    result.digester = run_digester_closed_loop(digester_setup, controller, dcfg);

    MonodRunConfig mcfg;
    mcfg.dt = config.dt;
    mcfg.t_end = config.t_end;
    mcfg.stride = config.stride;
    result.cultivation = run_monod_open_loop(monod_setup, mcfg);

    const auto& dtr = result.digester.trace;
    const auto& mtr = result.cultivation.trace;
    const auto rows = static_cast<Eigen::Index>(std::min(dtr.rows(), mtr.rows()));

    auto& trace = result.trace;
    trace.state_names = {"x_alg", "s", "m2"};
    trace.flow_names = {"m12", "m23", "dm2dt"};
    trace.states.resize(rows, 3);
    trace.flows.resize(rows, 3);

    // atmospheric stock integrated on the recorded grid
    double m2 = 0.0;
    for (Eigen::Index r = 0; r < rows; ++r) {
        const double m12 = dtr.flows(r, 0);
        const double m23 = mtr.flows(r, 0);
        const double rate = network::atmosphere_rate(m12, m23, config.vd, config.vm);
        trace.times.push_back(dtr.times[static_cast<std::size_t>(r)]);
        trace.states(r, 0) = mtr.states(r, 0);
        trace.states(r, 1) = mtr.states(r, 1);
        trace.states(r, 2) = m2;
        trace.flows(r, 0) = m12;
        trace.flows(r, 1) = m23;
        trace.flows(r, 2) = rate;
        if (r + 1 < rows) {
            const double dt_rec = dtr.times[static_cast<std::size_t>(r) + 1] - dtr.times[static_cast<std::size_t>(r)];
            m2 += dt_rec * rate;
        }
    }

    result.m12_ss = result.digester.m12_end;
    result.m23_ss = result.cultivation.m23_end;
    result.compensation_volume = network::compensation_volume(result.m12_ss, result.m23_ss, config.vd);
    result.volume_ratio = result.compensation_volume / config.vd;
    result.uptake_emission_ratio = result.m23_ss / result.m12_ss;

    result.lambda_a = network::circularity(result.m12_ss * config.vd, config.delta).lambda;
    result.lambda_b = network::circularity_clamped(
                          network::atmosphere_rate(result.m12_ss, result.m23_ss, config.vd, config.vm),
                          config.delta, &result.lambda_b_clamped)
                          .lambda;
    result.lambda_b_at_compensation =
        network::circularity_clamped(network::atmosphere_rate(result.m12_ss, result.m23_ss, config.vd,
                                                              result.compensation_volume),
                                     config.delta)
            .lambda;
    return result;
}

std::map<std::string, std::string> summarize(const ClosedLoopResult& r) {
    std::map<std::string, std::string> s;
    s["t_max"] = format(r.t_max);
    s["settling_time"] = format(r.settling_time);
    s["settle_threshold"] = format(r.settle_threshold);
    s["settled_before_t_max"] = (r.settling_time >= 0.0 && r.settling_time <= r.t_max) ? "1" : "0";
    s["v0"] = format(r.v0);
    s["j_end"] = format(r.j_end);
    s["cost_vs_v0_rel_error"] = format(std::abs(r.j_end - r.v0) / r.v0);
    s["final_state_max"] = format(r.final_state_max);
    s["m12_end"] = format(r.m12_end);
    s["infeasible_dilution_steps"] = std::to_string(r.infeasible_steps);
    s["first_infeasible_time"] = format(r.first_infeasible_time);
    return s;
}

std::map<std::string, std::string> summarize(const NetworkRunResult& r) {
    std::map<std::string, std::string> s;
    s["m12_ss"] = format(r.m12_ss);
    s["m23_ss"] = format(r.m23_ss);
    s["m23_peak"] = format(r.cultivation.m23_peak);
    s["m23_peak_time"] = format(r.cultivation.m23_peak_time);
    s["x_alg_end"] = format(r.cultivation.x_alg_end);
    s["x_alg_settle_time"] = format(r.cultivation.x_settle_time);
    s["compensation_volume"] = format(r.compensation_volume);
    s["volume_ratio"] = format(r.volume_ratio);
    s["lambda_a"] = format(r.lambda_a);
    s["lambda_b"] = format(r.lambda_b);
    s["lambda_b_at_compensation"] = format(r.lambda_b_at_compensation);
    s["lambda_b_clamped"] = r.lambda_b_clamped ? "1" : "0";
    s["uptake_emission_ratio"] = format(r.uptake_emission_ratio);
    s["digester_settling_time"] = format(r.digester.settling_time);
    return s;
}

} // namespace co2net::sim
