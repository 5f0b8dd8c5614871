#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "co2net/ars.hpp"
#include "co2net/carbon_network.hpp"
#include "co2net/config.hpp"
#include "co2net/digester.hpp"
#include "co2net/errors.hpp"
#include "co2net/finite_time_control.hpp"
#include "co2net/microalgae.hpp"
#include "co2net/ode.hpp"
#include "co2net/rl_env.hpp"
#include "co2net/sim.hpp"

namespace fs = std::filesystem;
using namespace co2net;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "out";
    std::vector<std::string> overrides;
    long long seed = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "configuration file")->required();
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--override", args.overrides, "section.key=value overrides")->take_all();
    cmd->add_option("--seed", args.seed, "random seed");
}

ConfigFile load_config(const CommonArgs& args) {
    ConfigFile cfg = ConfigFile::load(args.config_path);
    for (const auto& ov : args.overrides) {
        const auto eq = ov.find('=');
        if (eq == std::string::npos) throw ConfigError("override must be section.key=value: " + ov);
        cfg.override_value(ov.substr(0, eq), ov.substr(eq + 1));
    }
    return cfg;
}

void write_manifest(const CommonArgs& args, const std::string& command, const ConfigFile& cfg) {
    fs::create_directories(args.out_dir);
    std::ofstream out(fs::path(args.out_dir) / "manifest.txt");
    out << "command = " << command << "\n";
    out << "config = " << args.config_path << "\n";
    out << "seed = " << args.seed << "\n";
    for (const auto& ov : args.overrides) out << "override = " << ov << "\n";
    out << "\n# resolved configuration\n" << cfg.echo();
}

void write_summary(const std::string& out_dir, const std::map<std::string, std::string>& kv) {
    std::ofstream out(fs::path(out_dir) / "summary.txt");
    for (const auto& [k, v] : kv) out << k << " = " << v << "\n";
}

ode::IntegratorConfig integrator_from(const ConfigFile& cfg) {
    cfg.require_only("integrator", {"dt", "stride", "oracle_abs_tol", "oracle_rel_tol",
                                    "calib_dt0", "calib_match_tol", "calib_dt_floor"});
    ode::IntegratorConfig ic;
    ic.dt = cfg.number_or("integrator", "dt", 5e-5);
    ic.stride = static_cast<int>(cfg.integer_or("integrator", "stride", 200));
    ic.abs_tol = cfg.number_or("integrator", "oracle_abs_tol", 1e-10);
    ic.rel_tol = cfg.number_or("integrator", "oracle_rel_tol", 1e-10);
    return ic;
}

sim::NetworkRunConfig network_from(const ConfigFile& cfg) {
    cfg.require_only("network", {"vd", "vm", "delta", "t_end"});
    sim::NetworkRunConfig nc;
    nc.vd = cfg.number_or("network", "vd", 1.0);
    nc.vm = cfg.number_or("network", "vm", 1.0);
    nc.delta = cfg.number_or("network", "delta", 1.0);
    nc.t_end = cfg.number_or("network", "t_end", 20.0);
    return nc;
}

ode::Field monod_field_of(const sim::MonodSetup& setup) {
    return [setup](double, const Eigen::VectorXd& x, Eigen::VectorXd& dx) {
        double da, ds;
        algae::monod_field({x[0], x[1]}, setup.i_ref, setup.params, da, ds);
        dx.resize(2);
        dx << da, ds;
    };
}

int cmd_digester_sim(const CommonArgs& args, double t_max_flag, int preset_flag) {
    ConfigFile cfg = load_config(args);
    if (preset_flag > 0) cfg.override_value("controller.preset", std::to_string(preset_flag));
    if (t_max_flag > 0.0) cfg.override_value("controller.t_max", std::to_string(t_max_flag));
    write_manifest(args, "digester-sim", cfg);

    const auto setup = sim::load_digester(cfg);
    const auto controller = sim::load_controller(cfg);
    const auto ic = integrator_from(cfg);

    sim::ClosedLoopConfig cc;
    cc.dt = ic.dt;
    cc.stride = ic.stride;
    const auto result = sim::run_digester_closed_loop(setup, controller, cc);

    result.trace.save_csv((fs::path(args.out_dir) / "trace.csv").string());
    write_summary(args.out_dir, sim::summarize(result));

    std::cout << "settling time: " << result.settling_time << " d (T_max = " << controller.t_max
              << " d, threshold " << result.settle_threshold << ")\n";
    std::cout << "|x~(t_end)|_max = " << result.final_state_max << ", J = " << result.j_end
              << ", V(x0) = " << result.v0 << "\n";
    if (result.infeasible_steps > 0) {
        std::cout << "warning: commanded dilution negative on " << result.infeasible_steps
                  << " steps (first at t = " << result.first_infeasible_time << " d)\n";
    }
    const bool ok = result.settling_time >= 0.0 && result.settling_time <= controller.t_max;
    std::cout << (ok ? "settled within T_max\n" : "FAILED to settle within T_max\n");
    return ok ? 0 : 1;
}

int cmd_network_sim(const CommonArgs& args) {
    ConfigFile cfg = load_config(args);
    write_manifest(args, "network-sim", cfg);

    const auto dsetup = sim::load_digester(cfg);
    const auto controller = sim::load_controller(cfg);
    const auto msetup = sim::load_monod(cfg);
    const auto ic = integrator_from(cfg);
    auto nc = network_from(cfg);
    nc.dt = ic.dt;
    nc.stride = ic.stride;

    const auto result = sim::run_network(dsetup, controller, msetup, nc);

    result.trace.save_csv((fs::path(args.out_dir) / "trace.csv").string());
    result.digester.trace.save_csv((fs::path(args.out_dir) / "digester_trace.csv").string());
    {
        std::ofstream net(fs::path(args.out_dir) / "network.txt");
        network::build_network().write_edge_list(net);
    }
    write_summary(args.out_dir, sim::summarize(result));

    std::cout << "steady flows: m12 = " << result.m12_ss << " mmol/(L d), m23 = " << result.m23_ss
              << " (uptake/emission ratio " << result.uptake_emission_ratio << ")\n";
    std::cout << "compensation volume: " << result.compensation_volume
              << " L (ratio " << result.volume_ratio << " per liter of digester)\n";
    std::cout << "circularity: lambda_a = " << result.lambda_a << ", lambda_b = " << result.lambda_b
              << (result.lambda_b_clamped ? " (clamped at net zero)" : "")
              << ", at compensation volume = " << result.lambda_b_at_compensation << "\n";
    return 0;
}

int cmd_volume(const CommonArgs& args) {
    ConfigFile cfg = load_config(args);
    write_manifest(args, "volume", cfg);

    const auto dsetup = sim::load_digester(cfg);
    const auto msetup = sim::load_monod(cfg);
    const auto nc = network_from(cfg);

    const double m12 = digester::co2_outflow(digester::State::from(dsetup.equilibrium.x_ss), dsetup.params);
    algae::steady_nutrient(msetup.i_ref, msetup.params); // washout check
    const double m23 = algae::steady_carbon_uptake(msetup.params);
    const double vm = network::compensation_volume(m12, m23, nc.vd);

    std::map<std::string, std::string> kv;
    kv["m12_ss"] = std::to_string(m12);
    kv["m23_ss"] = std::to_string(m23);
    kv["vd"] = std::to_string(nc.vd);
    kv["compensation_volume"] = std::to_string(vm);
    kv["volume_ratio"] = std::to_string(vm / nc.vd);
    write_summary(args.out_dir, kv);

    std::cout << "equilibrium flows: m12 = " << m12 << ", m23 = " << m23 << "\n";
    std::cout << "compensation volume = " << vm << " L (" << vm / nc.vd
              << " times the digester volume)\n";
    return 0;
}

int cmd_circularity(const CommonArgs& args) {
    ConfigFile cfg = load_config(args);
    write_manifest(args, "circularity", cfg);

    const auto dsetup = sim::load_digester(cfg);
    const auto msetup = sim::load_monod(cfg);
    const auto nc = network_from(cfg);

    const double m12 = digester::co2_outflow(digester::State::from(dsetup.equilibrium.x_ss), dsetup.params);
    algae::steady_nutrient(msetup.i_ref, msetup.params);
    const double m23 = algae::steady_carbon_uptake(msetup.params);

    const double lambda_a = network::circularity(m12 * nc.vd, nc.delta).lambda;
    bool clamped = false;
    const double lambda_b =
        network::circularity_clamped(network::atmosphere_rate(m12, m23, nc.vd, nc.vm), nc.delta, &clamped).lambda;
    const double vm_star = network::compensation_volume(m12, m23, nc.vd);
    const double lambda_b_star =
        network::circularity_clamped(network::atmosphere_rate(m12, m23, nc.vd, vm_star), nc.delta).lambda;

    std::map<std::string, std::string> kv;
    kv["delta"] = std::to_string(nc.delta);
    kv["lambda_a"] = std::to_string(lambda_a);
    kv["lambda_b"] = std::to_string(lambda_b);
    kv["lambda_b_clamped"] = clamped ? "1" : "0";
    kv["compensation_volume"] = std::to_string(vm_star);
    kv["lambda_b_at_compensation"] = std::to_string(lambda_b_star);
    write_summary(args.out_dir, kv);

    std::cout << "lambda_a (no microalgae) = " << lambda_a << "\n";
    std::cout << "lambda_b (Vm = " << nc.vm << ") = " << lambda_b
              << (clamped ? " (net flow clamped at 0)" : "") << "\n";
    std::cout << "lambda_b at compensation volume " << vm_star << " = " << lambda_b_star << "\n";
    return 0;
}

int cmd_ars_train(const CommonArgs& args, long long steps_flag, int n_seeds) {
    ConfigFile cfg = load_config(args);
    if (steps_flag >= 0) cfg.override_value("ars.total_steps", std::to_string(steps_flag));
    write_manifest(args, "ars-train", cfg);

    const auto msetup = sim::load_monod(cfg);
    const auto env_cfg = rl::EnvConfig::from_config(cfg, msetup.params);
    ars::ArsConfig ars_cfg = ars::ArsConfig::from_config(cfg);

    const double i_star = algae::optimal_light(msetup.params);
    const auto factory = [&]() { return std::make_unique<rl::MonodEnv>(msetup.params, env_cfg); };

    std::vector<double> deltas;
    std::vector<double> late_actions;
    std::ofstream report(fs::path(args.out_dir) / "report.txt");
    report << "optimal_light = " << i_star << "\n";

    for (int s = 0; s < n_seeds; ++s) {
        ars_cfg.seed = static_cast<std::uint64_t>(args.seed) + static_cast<std::uint64_t>(s);
        const auto result = ars::train(factory, ars_cfg);

        const fs::path seed_dir = fs::path(args.out_dir) / ("seed_" + std::to_string(ars_cfg.seed));
        fs::create_directories(seed_dir);
        result.policy.save((seed_dir / "policy.txt").string());
        {
            std::ofstream env_spec(seed_dir / "env_spec.txt");
            rl::MonodEnv env(msetup.params, env_cfg);
            rl::write_env_descriptor(env_spec, env);
        }
        {
            std::ofstream curve(seed_dir / "curve.csv");
            curve << "t,train_env_steps,eval_mean,eval_std,mean_action,late_mean_action\n";
            char buf[192];
            for (const auto& rec : result.curve) {
                std::snprintf(buf, sizeof(buf), "%d,%lld,%.17g,%.17g,%.17g,%.17g\n", rec.iteration,
                              rec.train_env_steps, rec.eval_mean, rec.eval_std, rec.mean_action,
                              rec.late_mean_action);
                curve << buf;
            }
        }

        report << "seed " << ars_cfg.seed << ": iterations = " << result.iterations
               << ", train_steps = " << result.train_env_steps << ", r_s = " << result.r_start
               << ", r_e = " << result.r_end;
        if (result.iterations == 0) {
            report << ", delta = undefined (no training iterations)\n";
        } else {
            const double delta = result.r_end - result.r_start;
            deltas.push_back(delta);
            late_actions.push_back(result.curve.back().late_mean_action);
            report << ", delta = " << delta
                   << ", late_mean_action = " << result.curve.back().late_mean_action << "\n";
        }
        std::cout << "seed " << ars_cfg.seed << ": r_s = " << result.r_start
                  << ", r_e = " << result.r_end << "\n";
    }

    if (!deltas.empty()) {
        std::vector<double> sorted = deltas;
        std::sort(sorted.begin(), sorted.end());
        const double median = sorted[sorted.size() / 2];
        std::vector<double> acts = late_actions;
        std::sort(acts.begin(), acts.end());
        const double median_act = acts[acts.size() / 2];
        report << "median_delta = " << median << "\n";
        report << "median_late_mean_action = " << median_act << " (optimal " << i_star << ", deviation "
               << 100.0 * std::abs(median_act - i_star) / i_star << "%)\n";
        std::cout << "median delta = " << median << ", median late mean action = " << median_act
                  << " vs optimal " << i_star << "\n";
    } else {
        report << "median_delta = undefined\n";
        std::cout << "no training iterations ran; delta undefined\n";
    }
    return 0;
}

int cmd_policy_eval(const CommonArgs& args, const std::string& policy_path, int episodes) {
    ConfigFile cfg = load_config(args);
    write_manifest(args, "policy-eval", cfg);

    const auto msetup = sim::load_monod(cfg);
    const auto env_cfg = rl::EnvConfig::from_config(cfg, msetup.params);
    const auto policy = ars::LinearPolicy::load(policy_path);

    rl::MonodEnv env(msetup.params, env_cfg);
    env.seed(static_cast<std::uint64_t>(args.seed));
    const auto stats = rl::episode_return(
        [&policy](const Eigen::VectorXd& obs) { return policy.act(obs); }, env, episodes);

    // one logged episode through the trace format
    env.seed(static_cast<std::uint64_t>(args.seed));
    SimulationTrace trace;
    trace.state_names = {"x_alg", "s"};
    trace.flow_names = {"reward"};
    trace.input_names = {"light"};
    std::vector<double> acts;
    {
        Eigen::VectorXd obs = env.reset();
        std::vector<Eigen::Vector4d> rows;
        double t = 0.0;
        while (true) {
            Eigen::VectorXd a = policy.act(obs);
            a[0] = std::clamp(a[0], env.action_low(), env.action_high());
            const auto tr = env.step(a);
            rows.push_back({obs[0], obs[1], tr.reward, a[0]});
            acts.push_back(a[0]);
            trace.times.push_back(t);
            t += env.config().env_dt;
            obs = tr.observation;
            if (tr.episode_done) break;
        }
        trace.states.resize(static_cast<Eigen::Index>(rows.size()), 2);
        trace.flows.resize(static_cast<Eigen::Index>(rows.size()), 1);
        trace.inputs.resize(static_cast<Eigen::Index>(rows.size()), 1);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto r = static_cast<Eigen::Index>(i);
            trace.states(r, 0) = rows[i][0];
            trace.states(r, 1) = rows[i][1];
            trace.flows(r, 0) = rows[i][2];
            trace.inputs(r, 0) = rows[i][3];
        }
    }
    trace.save_csv((fs::path(args.out_dir) / "episode_trace.csv").string());
    {
        std::ofstream env_spec(fs::path(args.out_dir) / "env_spec.txt");
        rl::write_env_descriptor(env_spec, env);
    }

    double mean_action = 0.0;
    for (double a : acts) mean_action += a;
    mean_action /= static_cast<double>(acts.size());

    std::map<std::string, std::string> kv;
    kv["episodes"] = std::to_string(episodes);
    kv["mean_return"] = std::to_string(stats.mean);
    kv["stddev_return"] = std::to_string(stats.stddev);
    kv["mean_action_logged_episode"] = std::to_string(mean_action);
    kv["optimal_light"] = std::to_string(algae::optimal_light(msetup.params));
    write_summary(args.out_dir, kv);

    std::cout << "mean return over " << episodes << " episodes: " << stats.mean << " +- "
              << stats.stddev << "\n";
    return 0;
}

struct Check {
    std::string name;
    bool pass;
    std::string detail;
};

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

int cmd_validate(const CommonArgs& args) {
    ConfigFile cfg = load_config(args);
    write_manifest(args, "validate", cfg);

    std::vector<Check> checks;
    const auto dsetup = sim::load_digester(cfg);
    const auto controller = sim::load_controller(cfg);
    const auto msetup = sim::load_monod(cfg);
    const auto ic = integrator_from(cfg);

    std::mt19937_64 rng(static_cast<std::uint64_t>(args.seed));
    std::uniform_real_distribution<double> unit(-1.5, 1.5);

    { // equilibrium residual
        const auto res = digester::raw_rhs(digester::State::from(dsetup.equilibrium.x_ss),
                                           dsetup.equilibrium.u_ss, dsetup.params)
                             .cwiseAbs()
                             .maxCoeff();
        checks.push_back({"equilibrium_residual", res < 1e-8,
                          "max |rhs(x_ss, u_ss)| = " + sci(res) + " (threshold 1e-8)"});
    }

    { // P_C quadratic on random valid states
        double worst = 0.0;
        int n = 0;
        while (n < 1000) {
            Eigen::VectorXd xt(6);
            for (int i = 0; i < 6; ++i) xt[i] = unit(rng);
            const auto xv = dsetup.equilibrium.x_ss + xt;
            const digester::State x = digester::State::from(xv);
            if (x.x1 <= 0.0 || x.x2 <= 0.0 || x.s1 < 0.0 || x.s2 < 0.0 || x.c + x.s2 - x.z < 0.0) continue;
            const double pc = digester::partial_pressure_pc(x, dsetup.params);
            const double phi = digester::gas_phi(x, dsetup.params);
            const double res = std::abs(dsetup.params.kh * pc * pc - phi * pc +
                                        dsetup.params.pt * (x.c + x.s2 - x.z));
            worst = std::max(worst, res);
            ++n;
        }
        checks.push_back({"pc_quadratic_residual", worst < 1e-10,
                          "max residual " + sci(worst) + " (threshold 1e-10)"});
    }

    { // closed-loop identity residual (feedback inserted into the dynamics)
        const digester::TranslatedModel model(dsetup.params, dsetup.equilibrium,
                                              controller.singularity_threshold);
        const auto pq = control::pq_from(controller.x0, controller.t_max);
        double worst = 0.0;
        int n = 0;
        while (n < 1000) {
            Eigen::VectorXd xt(6);
            for (int i = 0; i < 6; ++i) xt[i] = unit(rng);
            Eigen::VectorXd g;
            try {
                g = model.input_gain(xt);
            } catch (const SingularInputMatrixError&) {
                continue;
            }
            const digester::State x = digester::State::from(model.physical_state(xt));
            if (x.s1 < 0.0 || x.s2 < 0.0 || x.c + x.s2 - x.z < 0.0) continue;
            const Eigen::VectorXd f = model.drift(xt);
            const Eigen::VectorXd u = control::icd_control(xt, f, g, pq);
            const Eigen::VectorXd res =
                f + g.cwiseProduct(u) + 0.5 * control::lyapunov_grad(xt, pq).transpose();
            worst = std::max(worst, res.cwiseAbs().maxCoeff());
            ++n;
        }
        checks.push_back({"closed_loop_identity_residual", worst < 1e-10,
                          "max residual " + sci(worst) + " (threshold 1e-10)"});
    }

    const auto field = monod_field_of(msetup);
    Eigen::VectorXd x0(2);
    x0 << msetup.x_alg_0, msetup.s_0;

    { // fixed step vs oracle at the configured dt
        ode::IntegratorConfig run = ic;
        run.t_end = cfg.number_or("network", "t_end", 20.0);
        const auto fixed = ode::integrate(x0, field, run);
        const auto oracle = ode::oracle_integrate(x0, field, run);
        const double err = ode::max_rel_error(fixed, oracle);
        checks.push_back({"fixed_vs_oracle", err <= 1e-3,
                          "max relative error " + sci(err) + " at dt = " + sci(run.dt) +
                              " (threshold 1e-3)"});
    }

    { // step-size calibration
        ode::CalibrationConfig cal;
        cal.dt0 = cfg.number_or("integrator", "calib_dt0", 8e-4);
        cal.match_tol = cfg.number_or("integrator", "calib_match_tol", 5e-5);
        cal.dt_floor = cfg.number_or("integrator", "calib_dt_floor", 1e-8);
        cal.t_end = cfg.number_or("network", "t_end", 20.0);
        cal.stride = ic.stride;
        cal.abs_tol = ic.abs_tol;
        cal.rel_tol = ic.rel_tol;
        const double accepted = ode::calibrate_dt(x0, field, cal);
        checks.push_back({"dt_calibration", ic.dt <= accepted * (1.0 + 1e-12),
                          "accepted dt = " + sci(accepted) + ", configured dt = " + sci(ic.dt)});
    }

    { // closed-loop norm law at a fine step
        sim::ClosedLoopConfig cc;
        cc.dt = 5e-6;
        cc.stride = 200;
        const auto run = sim::run_digester_closed_loop(dsetup, controller, cc);
        const double r0 = controller.x0.squaredNorm();
        double worst = 0.0;
        for (std::size_t r = 0; r < run.trace.rows(); ++r) {
            const double t = run.trace.times[r];
            if (t > 0.95 * controller.t_max) break;
            const double exact = r0 * std::pow(1.0 - t / controller.t_max, 1.0 + controller.t_max);
            const double got = run.trace.states.row(static_cast<Eigen::Index>(r)).squaredNorm();
            worst = std::max(worst, std::abs(got - exact) / exact);
        }
        checks.push_back({"closed_loop_norm_law", worst <= 1e-3,
                          "max relative error " + sci(worst) + " (threshold 1e-3)"});
    }

    bool all_ok = true;
    std::map<std::string, std::string> kv;
    for (const auto& c : checks) {
        all_ok = all_ok && c.pass;
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
        kv[c.name] = c.pass ? "pass" : "fail";
        kv[c.name + "_detail"] = c.detail;
    }
    write_summary(args.out_dir, kv);
    std::cout << (all_ok ? "all checks passed\n" : "some checks FAILED\n");
    return all_ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"compartmental CO2 network simulator and control toolkit"};
    app.require_subcommand(1);

    CommonArgs args;
    double t_max_flag = -1.0;
    int preset_flag = -1;
    long long steps_flag = -1;
    int seeds_flag = 1;
    std::string policy_path;
    int eval_episodes = 10;

    auto* digester_cmd = app.add_subcommand("digester-sim", "closed-loop digester stabilization run");
    add_common(digester_cmd, args);
    digester_cmd->add_option("--t-max", t_max_flag, "settling-time bound [d]");
    digester_cmd->add_option("--preset", preset_flag, "initial-condition preset (1 or 2)");

    auto* network_cmd = app.add_subcommand("network-sim", "coupled digester/atmosphere/cultivation run");
    add_common(network_cmd, args);

    auto* ars_cmd = app.add_subcommand("ars-train", "train the light-intensity policy");
    add_common(ars_cmd, args);
    ars_cmd->add_option("--steps", steps_flag, "training environment steps");
    ars_cmd->add_option("--seeds", seeds_flag, "number of training seeds");

    auto* eval_cmd = app.add_subcommand("policy-eval", "evaluate a saved policy");
    add_common(eval_cmd, args);
    eval_cmd->add_option("--policy", policy_path, "policy file")->required();
    eval_cmd->add_option("--episodes", eval_episodes, "evaluation episodes");

    auto* validate_cmd = app.add_subcommand("validate", "run the numerical validation suite");
    add_common(validate_cmd, args);

    auto* volume_cmd = app.add_subcommand("volume", "net-zero compensation volume");
    add_common(volume_cmd, args);

    auto* circ_cmd = app.add_subcommand("circularity", "circularity of the network");
    add_common(circ_cmd, args);

    CLI11_PARSE(app, argc, argv);

    try {
        fs::create_directories(args.out_dir);
        if (digester_cmd->parsed()) return cmd_digester_sim(args, t_max_flag, preset_flag);
        if (network_cmd->parsed()) return cmd_network_sim(args);
        if (ars_cmd->parsed()) return cmd_ars_train(args, steps_flag, seeds_flag);
        if (eval_cmd->parsed()) return cmd_policy_eval(args, policy_path, eval_episodes);
        if (validate_cmd->parsed()) return cmd_validate(args);
        if (volume_cmd->parsed()) return cmd_volume(args);
        if (circ_cmd->parsed()) return cmd_circularity(args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
