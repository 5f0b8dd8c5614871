#include "co2net/rl_env.hpp"

#include <cmath>
#include <ostream>

#include "co2net/errors.hpp"

namespace co2net::rl {

void EnvConfig::validate() const {
    if (max_episode_steps < 1) throw ConfigError("env: max_episode_steps must be >= 1");
    if (!(action_low >= 0.0) || !(action_high > action_low)) {
        throw ConfigError("env: need 0 <= action_low < action_high");
    }
    if (!(x0_min > 0.0) || x0_max < x0_min || !(s0_min > 0.0) || s0_max < s0_min) {
        throw ConfigError("env: init ranges must be positive with min <= max");
    }
    if (!(substep_dt > 0.0) || env_dt < substep_dt) {
        throw ConfigError("env: need env_dt >= substep_dt > 0");
    }
    const double ratio = env_dt / substep_dt;
    if (std::abs(ratio - std::llround(ratio)) > 1e-6) {
        throw ConfigError("env: env_dt must be a whole multiple of substep_dt");
    }
}

EnvConfig EnvConfig::derive_defaults(const algae::Params& p, double x_alg_0, double s_0) {
    EnvConfig c;
    c.action_low = 0.0;
    c.action_high = 2.0 * algae::optimal_light(p);
    c.x0_min = 0.5 * x_alg_0;
    c.x0_max = 1.5 * x_alg_0;
    c.s0_min = 0.5 * s_0;
    c.s0_max = 1.5 * s_0;
    c.validate();
    return c;
}

EnvConfig EnvConfig::from_config(const ConfigFile& cfg, const algae::Params& p) {
    cfg.require_only("env", {"max_episode_steps", "action_low", "action_high", "x0_min", "x0_max",
                             "s0_min", "s0_max", "env_dt", "substep_dt"});
    const double x_alg_0 = cfg.number_or("microalgae", "x_alg_0", 1.0);
    const double s_0 = cfg.number_or("microalgae", "s_0", p.sin);
    EnvConfig c = derive_defaults(p, x_alg_0, s_0);
    c.max_episode_steps = static_cast<int>(cfg.integer_or("env", "max_episode_steps", c.max_episode_steps));
    c.action_low = cfg.number_or("env", "action_low", c.action_low);
    c.action_high = cfg.number_or("env", "action_high", c.action_high);
    c.x0_min = cfg.number_or("env", "x0_min", c.x0_min);
    c.x0_max = cfg.number_or("env", "x0_max", c.x0_max);
    c.s0_min = cfg.number_or("env", "s0_min", c.s0_min);
    c.s0_max = cfg.number_or("env", "s0_max", c.s0_max);
    c.env_dt = cfg.number_or("env", "env_dt", c.env_dt);
    c.substep_dt = cfg.number_or("env", "substep_dt", c.substep_dt);
    c.validate();
    return c;
}

MonodEnv::MonodEnv(const algae::Params& params, const EnvConfig& config)
    : params_(params), config_(config) {
    params_.validate();
    config_.validate();
    n_substeps_ = std::llround(config_.env_dt / config_.substep_dt);
}

Eigen::VectorXd MonodEnv::reset() {
    std::uniform_real_distribution<double> ux(config_.x0_min, config_.x0_max);
    std::uniform_real_distribution<double> us(config_.s0_min, config_.s0_max);
    state_.x_alg = ux(rng_);
    state_.s = us(rng_);
    step_count_ = 0;
    done_ = false;
    Eigen::VectorXd obs(2);
    obs << state_.x_alg, state_.s;
    return obs;
}

Transition MonodEnv::step(const Eigen::VectorXd& action) {
    if (done_) throw EpisodeFinishedError("step() after the episode ended; call reset()");
    if (action.size() != 1) throw ConfigError("env: action must be scalar light intensity");

    const double light = std::clamp(action[0], config_.action_low, config_.action_high);
    const double reward = algae::carbon_uptake(state_.s, light, params_);

    const double dt = config_.substep_dt;
    double x = state_.x_alg;
    double s = state_.s;
    for (long long k = 0; k < n_substeps_; ++k) {
        double dx, ds;
        algae::monod_field({x, s}, light, params_, dx, ds);
        x += dt * dx;
        s += dt * ds;
        // project the integrator's tiny negative excursions; larger ones
        // mean the step size cannot resolve the dynamics
        if (x < 0.0) {
            if (x <= -1e-9) throw IntegrationError("env: biomass went negative beyond tolerance");
            x = 0.0;
        }
        if (s < 0.0) {
            if (s <= -1e-9) throw IntegrationError("env: nutrient went negative beyond tolerance");
            s = 0.0;
        }
    }
    state_.x_alg = x;
    state_.s = s;

    ++step_count_;
    done_ = step_count_ == config_.max_episode_steps;

    Transition tr;
    tr.observation.resize(2);
    tr.observation << state_.x_alg, state_.s;
    tr.reward = reward;
    tr.step_index = step_count_;
    tr.episode_done = done_;
    return tr;
}

ReturnStats episode_return(const Policy& policy, Environment& env, int n_episodes) {
    if (n_episodes < 1) throw ConfigError("episode_return: need at least one episode");
    std::vector<double> returns;
    returns.reserve(static_cast<std::size_t>(n_episodes));
    for (int ep = 0; ep < n_episodes; ++ep) {
        Eigen::VectorXd obs = env.reset();
        double total = 0.0;
        while (true) {
            const Transition tr = env.step(policy(obs));
            total += tr.reward;
            obs = tr.observation;
            if (tr.episode_done) break;
        }
        returns.push_back(total);
    }
    ReturnStats stats;
    stats.episodes = n_episodes;
    for (double r : returns) stats.mean += r;
    stats.mean /= n_episodes;
    double var = 0.0;
    for (double r : returns) var += (r - stats.mean) * (r - stats.mean);
    stats.stddev = std::sqrt(var / n_episodes);
    return stats;
}

void write_env_descriptor(std::ostream& os, const Environment& env) {
    os << "observation_dim " << env.observation_dim() << "\n"
       << "action_dim " << env.action_dim() << "\n"
       << "action_low " << env.action_low() << "\n"
       << "action_high " << env.action_high() << "\n";
}

} // namespace co2net::rl
