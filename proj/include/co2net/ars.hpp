#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "co2net/config.hpp"
#include "co2net/rl_env.hpp"

namespace co2net::ars {

/// Linear map from observations to actions, optionally on normalized
/// observations. Weights start zeroed before training.
struct LinearPolicy {
    Eigen::MatrixXd m;        // action_dim x obs_dim
    Eigen::VectorXd obs_mean;
    Eigen::VectorXd obs_var;
    bool normalize = false;

    static LinearPolicy zeros(int action_dim, int obs_dim);

    Eigen::VectorXd act(const Eigen::VectorXd& obs) const;

    /// Plain-text persistence: row-major full-precision matrix plus the
    /// normalization statistics.
    void save(const std::string& path) const;
    static LinearPolicy load(const std::string& path);
};

struct ArsConfig {
    int n_directions = 8;              // random perturbations per update
    double learning_rate = 0.02;
    double noise = 0.05;               // exploration noise
    int episodes_per_candidate = 1;
    int top_directions = 0;            // 0 means all directions
    double alive_bonus_offset = 0.0;   // added to every training-step reward
    long long total_steps = 200000;    // training environment steps
    std::uint64_t seed = 0;
    bool normalize_observations = false;
    int eval_episodes = 10;            // deterministic evaluations per iteration
    int threads = 0;                   // 0 means hardware concurrency
    double max_wall_seconds = 0.0;     // 0 means unlimited

    void validate() const;
    static ArsConfig from_config(const ConfigFile& cfg);
};

/// Symmetric pair of policies M +- noise*delta, delta standard normal.
struct Perturbation {
    LinearPolicy plus;
    LinearPolicy minus;
    Eigen::MatrixXd delta;
};

Perturbation perturb(const LinearPolicy& policy, double noise, std::mt19937_64& rng);

struct DirectionResult {
    double r_plus;
    double r_minus;
    Eigen::MatrixXd delta;
};

/// One search update:
///   M += lr/(b*sigma_R) * sum over the top-b directions of (r+ - r-)*delta,
/// where sigma_R is the population standard deviation of all evaluated
/// returns and directions rank by max(r+, r-). A spread below 1e-8 skips
/// the update. Non-finite returns abort training.
LinearPolicy update(const LinearPolicy& policy, const std::vector<DirectionResult>& results,
                    const ArsConfig& config);

struct IterationRecord {
    int iteration;                 // 0 is the pre-training evaluation
    long long train_env_steps;     // cumulative, excludes evaluation
    double eval_mean;
    double eval_std;
    double mean_action;            // over all evaluation steps
    double late_mean_action;       // over the second half of each episode
};

struct TrainResult {
    LinearPolicy policy;
    std::vector<IterationRecord> curve;
    double r_start = 0.0;          // first evaluation (untrained policy)
    double r_end = 0.0;            // last evaluation
    long long train_env_steps = 0;
    long long eval_env_steps = 0;  // counted separately
    int iterations = 0;
    bool aborted = false;          // wall-clock budget hit
};

using EnvFactory = std::function<std::unique_ptr<rl::Environment>()>;

/// Full search loop: evaluate, then perturb/rollout/update until the
/// training step budget is spent. The 2*n_directions rollouts of an
/// iteration run on independent environment instances (optionally in
/// parallel); the +- pair of a direction shares its episode seeds. A
/// fixed evaluation seed makes r_start and r_end comparable on identical
/// initial conditions; fixed config seeds reproduce the whole curve.
TrainResult train(const EnvFactory& make_env, const ArsConfig& config);

} // namespace co2net::ars
