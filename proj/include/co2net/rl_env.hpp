#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>

#include "co2net/config.hpp"
#include "co2net/microalgae.hpp"

namespace co2net::rl {

struct EnvConfig {
    int max_episode_steps = 200;
    double action_low = 0.0;
    double action_high = 0.0;  // light bound; derive_defaults fills 2*optimal_light
    double x0_min = 0.0, x0_max = 0.0;
    double s0_min = 0.0, s0_max = 0.0;
    double env_dt = 0.1;       // days advanced per action
    double substep_dt = 5e-5;  // inner fixed integration step

    void validate() const;

    /// Defaults tied to the model: action bounds [0, 2*optimal_light] and
    /// init ranges [0.5, 1.5] x (x_alg_0, s_0).
    static EnvConfig derive_defaults(const algae::Params& p, double x_alg_0, double s_0);
    static EnvConfig from_config(const ConfigFile& cfg, const algae::Params& p);
};

struct Transition {
    Eigen::VectorXd observation;
    double reward;
    int step_index;
    bool episode_done;
};

/// Reset/step environment interface with continuous observations and
/// actions. One instance is single-owner mutable; run several instances
/// for parallel rollouts.
class Environment {
public:
    virtual ~Environment() = default;
    virtual int observation_dim() const = 0;
    virtual int action_dim() const = 0;
    virtual double action_low() const = 0;
    virtual double action_high() const = 0;
    virtual void seed(std::uint64_t s) = 0;
    virtual Eigen::VectorXd reset() = 0;
    virtual Transition step(const Eigen::VectorXd& action) = 0;
};

/// Growth/nutrient balance as an environment: observations (X_ALG, S),
/// action the light intensity, reward the CO2 uptake at the pre-step
/// state. Episodes run a fixed number of steps; there are no termination
/// conditions.
class MonodEnv : public Environment {
public:
    MonodEnv(const algae::Params& params, const EnvConfig& config);

    int observation_dim() const override { return 2; }
    int action_dim() const override { return 1; }
    double action_low() const override { return config_.action_low; }
    double action_high() const override { return config_.action_high; }
    void seed(std::uint64_t s) override { rng_.seed(s); }

    /// Samples (X_ALG, S) uniformly from the init ranges and zeroes the
    /// step counter.
    Eigen::VectorXd reset() override;

    /// Clamps the action into bounds, pays the reward at the pre-step
    /// state and advances the model by env_dt with inner fixed steps.
    /// Throws EpisodeFinishedError once the episode is done.
    Transition step(const Eigen::VectorXd& action) override;

    const algae::State& state() const { return state_; }
    const EnvConfig& config() const { return config_; }
    const algae::Params& params() const { return params_; }

private:
    algae::Params params_;
    EnvConfig config_;
    std::mt19937_64 rng_;
    algae::State state_{0.0, 0.0};
    int step_count_ = 0;
    bool done_ = true; // reset() required before stepping
    long long n_substeps_;
};

using Policy = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct ReturnStats {
    double mean = 0.0;
    double stddev = 0.0; // population standard deviation over episodes
    int episodes = 0;
};

/// Mean undiscounted return of `policy` over n_episodes consecutive
/// episodes of `env` (the caller controls seeding).
ReturnStats episode_return(const Policy& policy, Environment& env, int n_episodes);

/// Plain-text descriptor (dims and bounds) for binding external agents.
void write_env_descriptor(std::ostream& os, const Environment& env);

} // namespace co2net::rl
