#include "co2net/ars.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <numeric>
#include <sstream>

#include "co2net/errors.hpp"

namespace co2net::ars {

namespace {

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    // splitmix64 round over the combined word
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

struct RunningStats {
    long long count = 0;
    Eigen::VectorXd mean;
    Eigen::VectorXd m2;

    void init(Eigen::Index dim) {
        count = 0;
        mean = Eigen::VectorXd::Zero(dim);
        m2 = Eigen::VectorXd::Zero(dim);
    }
    void push(const Eigen::VectorXd& x) {
        ++count;
        const Eigen::VectorXd d = x - mean;
        mean += d / static_cast<double>(count);
        m2 += d.cwiseProduct(x - mean);
    }
    void merge(const RunningStats& o) {
        if (o.count == 0) return;
        if (count == 0) {
            *this = o;
            return;
        }
        const double n1 = static_cast<double>(count), n2 = static_cast<double>(o.count);
        const Eigen::VectorXd d = o.mean - mean;
        const double n = n1 + n2;
        mean += d * (n2 / n);
        m2 += o.m2 + d.cwiseProduct(d) * (n1 * n2 / n);
        count += o.count;
    }
    Eigen::VectorXd variance() const {
        if (count == 0) return Eigen::VectorXd();
        return m2 / static_cast<double>(count);
    }
};

double clamp_action(double a, const rl::Environment& env) {
    return std::clamp(a, env.action_low(), env.action_high());
}

struct RolloutOutcome {
    double mean_return = 0.0;
    long long steps = 0;
    RunningStats stats;
};

/// Runs `episodes` episodes of `policy` on a freshly seeded env; returns
/// the mean shifted return. Observation statistics are collected when a
/// stats sink is given.
RolloutOutcome run_rollout(rl::Environment& env, const LinearPolicy& policy, int episodes,
                           std::uint64_t seed, double alive_bonus_offset, bool collect_stats) {
    RolloutOutcome out;
    if (collect_stats) out.stats.init(policy.m.cols());
    env.seed(seed);
    double total = 0.0;
    for (int ep = 0; ep < episodes; ++ep) {
        Eigen::VectorXd obs = env.reset();
        while (true) {
            if (collect_stats) out.stats.push(obs);
            Eigen::VectorXd a = policy.act(obs);
            a[0] = clamp_action(a[0], env);
            const rl::Transition tr = env.step(a);
            total += tr.reward + alive_bonus_offset;
            ++out.steps;
            obs = tr.observation;
            if (tr.episode_done) break;
        }
    }
    out.mean_return = total / episodes;
    return out;
}

struct EvalOutcome {
    double mean = 0.0;
    double stddev = 0.0;
    double mean_action = 0.0;
    double late_mean_action = 0.0;
    long long steps = 0;
};

EvalOutcome evaluate(rl::Environment& env, const LinearPolicy& policy, int episodes, std::uint64_t seed) {
    EvalOutcome out;
    env.seed(seed);
    std::vector<double> returns;
    double action_sum = 0.0, late_sum = 0.0;
    long long action_n = 0, late_n = 0;
    for (int ep = 0; ep < episodes; ++ep) {
        Eigen::VectorXd obs = env.reset();
        std::vector<double> actions;
        double total = 0.0;
        while (true) {
            Eigen::VectorXd a = policy.act(obs);
            a[0] = clamp_action(a[0], env);
            actions.push_back(a[0]);
            const rl::Transition tr = env.step(a);
            total += tr.reward;
            ++out.steps;
            obs = tr.observation;
            if (tr.episode_done) break;
        }
        returns.push_back(total);
        for (std::size_t i = 0; i < actions.size(); ++i) {
            action_sum += actions[i];
            ++action_n;
            if (i >= actions.size() / 2) {
                late_sum += actions[i];
                ++late_n;
            }
        }
    }
    for (double r : returns) out.mean += r;
    out.mean /= returns.size();
    double var = 0.0;
    for (double r : returns) var += (r - out.mean) * (r - out.mean);
    out.stddev = std::sqrt(var / returns.size());
    out.mean_action = action_n ? action_sum / action_n : 0.0;
    out.late_mean_action = late_n ? late_sum / late_n : 0.0;
    return out;
}

} // namespace

LinearPolicy LinearPolicy::zeros(int action_dim, int obs_dim) {
    LinearPolicy p;
    p.m = Eigen::MatrixXd::Zero(action_dim, obs_dim);
    p.obs_mean = Eigen::VectorXd::Zero(obs_dim);
    p.obs_var = Eigen::VectorXd::Ones(obs_dim);
    p.normalize = false;
    return p;
}

Eigen::VectorXd LinearPolicy::act(const Eigen::VectorXd& obs) const {
    if (!normalize) return m * obs;
    Eigen::VectorXd scaled(obs.size());
    for (Eigen::Index i = 0; i < obs.size(); ++i) {
        const double sd = std::sqrt(std::max(obs_var[i], 0.0));
        scaled[i] = (obs[i] - obs_mean[i]) / (sd < 1e-8 ? 1.0 : sd);
    }
    return m * scaled;
}

void LinearPolicy::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw Error("cannot write policy file: " + path);
    out << "action_dim " << m.rows() << "\n";
    out << "obs_dim " << m.cols() << "\n";
    out << "normalize " << (normalize ? 1 : 0) << "\n";
    char buf[32];
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        out << "m";
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            std::snprintf(buf, sizeof(buf), "%.17g", m(r, c));
            out << " " << buf;
        }
        out << "\n";
    }
    out << "obs_mean";
    for (Eigen::Index i = 0; i < obs_mean.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", obs_mean[i]);
        out << " " << buf;
    }
    out << "\nobs_var";
    for (Eigen::Index i = 0; i < obs_var.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", obs_var[i]);
        out << " " << buf;
    }
    out << "\n";
}

LinearPolicy LinearPolicy::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open policy file: " + path);
    std::string key;
    int action_dim = 0, obs_dim = 0, norm = 0;
    in >> key >> action_dim;
    if (key != "action_dim") throw Error("policy file: expected action_dim");
    in >> key >> obs_dim;
    if (key != "obs_dim") throw Error("policy file: expected obs_dim");
    in >> key >> norm;
    if (key != "normalize") throw Error("policy file: expected normalize");
    LinearPolicy p = zeros(action_dim, obs_dim);
    p.normalize = norm != 0;
    for (int r = 0; r < action_dim; ++r) {
        in >> key;
        if (key != "m") throw Error("policy file: expected matrix row");
        for (int c = 0; c < obs_dim; ++c) in >> p.m(r, c);
    }
    in >> key;
    if (key != "obs_mean") throw Error("policy file: expected obs_mean");
    for (int i = 0; i < obs_dim; ++i) in >> p.obs_mean[i];
    in >> key;
    if (key != "obs_var") throw Error("policy file: expected obs_var");
    for (int i = 0; i < obs_dim; ++i) in >> p.obs_var[i];
    if (!in) throw Error("policy file: truncated: " + path);
    return p;
}

void ArsConfig::validate() const {
    if (n_directions < 1) throw ConfigError("ars: n_directions must be >= 1");
    if (!(learning_rate >= 0.0)) throw ConfigError("ars: learning_rate must be non-negative");
    if (!(noise > 0.0)) throw ConfigError("ars: noise must be positive");
    if (episodes_per_candidate < 1) throw ConfigError("ars: episodes_per_candidate must be >= 1");
    const int b = top_directions == 0 ? n_directions : top_directions;
    if (b < 1 || b > n_directions) {
        throw ConfigError("ars: top_directions must lie in [1, n_directions]");
    }
    if (total_steps < 0) throw ConfigError("ars: total_steps must be non-negative");
    if (eval_episodes < 1) throw ConfigError("ars: eval_episodes must be >= 1");
}

ArsConfig ArsConfig::from_config(const ConfigFile& cfg) {
    cfg.require_only("ars", {"n_directions", "learning_rate", "noise", "episodes_per_candidate",
                             "top_directions", "alive_bonus_offset", "total_steps", "seed",
                             "normalize_observations", "eval_episodes", "threads", "max_wall_seconds"});
    ArsConfig c;
    c.n_directions = static_cast<int>(cfg.integer_or("ars", "n_directions", c.n_directions));
    c.learning_rate = cfg.number_or("ars", "learning_rate", c.learning_rate);
    c.noise = cfg.number_or("ars", "noise", c.noise);
    c.episodes_per_candidate =
        static_cast<int>(cfg.integer_or("ars", "episodes_per_candidate", c.episodes_per_candidate));
    c.top_directions = static_cast<int>(cfg.integer_or("ars", "top_directions", c.top_directions));
    c.alive_bonus_offset = cfg.number_or("ars", "alive_bonus_offset", c.alive_bonus_offset);
    c.total_steps = cfg.integer_or("ars", "total_steps", c.total_steps);
    c.seed = static_cast<std::uint64_t>(cfg.integer_or("ars", "seed", 0));
    c.normalize_observations = cfg.integer_or("ars", "normalize_observations", 0) != 0;
    c.eval_episodes = static_cast<int>(cfg.integer_or("ars", "eval_episodes", c.eval_episodes));
    c.threads = static_cast<int>(cfg.integer_or("ars", "threads", c.threads));
    c.max_wall_seconds = cfg.number_or("ars", "max_wall_seconds", c.max_wall_seconds);
    c.validate();
    return c;
}

Perturbation perturb(const LinearPolicy& policy, double noise, std::mt19937_64& rng) {
    if (!(noise > 0.0)) throw ConfigError("perturb: noise must be positive");
    std::normal_distribution<double> normal(0.0, 1.0);
    Perturbation pert;
    pert.delta.resize(policy.m.rows(), policy.m.cols());
    for (Eigen::Index r = 0; r < pert.delta.rows(); ++r) {
        for (Eigen::Index c = 0; c < pert.delta.cols(); ++c) pert.delta(r, c) = normal(rng);
    }
    pert.plus = policy;
    pert.minus = policy;
    pert.plus.m = policy.m + noise * pert.delta;
    pert.minus.m = policy.m - noise * pert.delta;
    return pert;
}

LinearPolicy update(const LinearPolicy& policy, const std::vector<DirectionResult>& results,
                    const ArsConfig& config) {
    if (results.empty()) throw ConfigError("update: at least one direction required");
    for (const auto& r : results) {
        if (!std::isfinite(r.r_plus) || !std::isfinite(r.r_minus)) {
            throw TrainingAbortError("update: non-finite rollout return");
        }
    }

    double mean = 0.0;
    for (const auto& r : results) mean += r.r_plus + r.r_minus;
    mean /= static_cast<double>(2 * results.size());
    double var = 0.0;
    for (const auto& r : results) {
        var += (r.r_plus - mean) * (r.r_plus - mean);
        var += (r.r_minus - mean) * (r.r_minus - mean);
    }
    const double sigma_r = std::sqrt(var / static_cast<double>(2 * results.size()));

    LinearPolicy next = policy;
    if (sigma_r < 1e-8) return next; // flat returns, e.g. an all-dark policy

    const int b = std::min<int>(config.top_directions == 0 ? config.n_directions : config.top_directions,
                                static_cast<int>(results.size()));
    std::vector<std::size_t> order(results.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t c) {
        return std::max(results[a].r_plus, results[a].r_minus) >
               std::max(results[c].r_plus, results[c].r_minus);
    });

    Eigen::MatrixXd step = Eigen::MatrixXd::Zero(policy.m.rows(), policy.m.cols());
    for (int i = 0; i < b; ++i) {
        const auto& r = results[order[static_cast<std::size_t>(i)]];
        step += (r.r_plus - r.r_minus) * r.delta;
    }
    next.m += (config.learning_rate / (static_cast<double>(b) * sigma_r)) * step;
    return next;
}

TrainResult train(const EnvFactory& make_env, const ArsConfig& config) {
    config.validate();
    const auto t_start = std::chrono::steady_clock::now();

    auto probe = make_env();
    const int obs_dim = probe->observation_dim();
    const int action_dim = probe->action_dim();

    TrainResult result;
    result.policy = LinearPolicy::zeros(action_dim, obs_dim);
    result.policy.normalize = config.normalize_observations;

    RunningStats stats;
    stats.init(obs_dim);

    std::mt19937_64 master(config.seed);
    const std::uint64_t eval_seed = mix(config.seed, 0xe7a1ULL);

    auto eval_env = make_env();
    auto record_eval = [&](int iteration) {
        const EvalOutcome ev = evaluate(*eval_env, result.policy, config.eval_episodes, eval_seed);
        result.eval_env_steps += ev.steps;
        result.curve.push_back({iteration, result.train_env_steps, ev.mean, ev.stddev,
                                ev.mean_action, ev.late_mean_action});
    };

    record_eval(0); // untrained policy: r_start

    const int n_threads = config.threads > 0
                              ? config.threads
                              : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

    int iteration = 0;
    while (result.train_env_steps < config.total_steps) {
        ++iteration;

        // sample all directions up front so the draw order is fixed
        std::vector<Perturbation> perts;
        perts.reserve(static_cast<std::size_t>(config.n_directions));
        for (int k = 0; k < config.n_directions; ++k) {
            perts.push_back(perturb(result.policy, config.noise, master));
        }

        std::vector<DirectionResult> results(static_cast<std::size_t>(config.n_directions));
        std::vector<RunningStats> dir_stats(static_cast<std::size_t>(config.n_directions));
        std::vector<long long> dir_steps(static_cast<std::size_t>(config.n_directions), 0);

        const bool collect = config.normalize_observations;
        auto run_direction = [&](int k) {
            auto env = make_env();
            // the +- pair shares its episode seed: paired initial conditions
            const std::uint64_t s = mix(config.seed, (static_cast<std::uint64_t>(iteration) << 20) +
                                                         static_cast<std::uint64_t>(k));
            const auto plus = run_rollout(*env, perts[static_cast<std::size_t>(k)].plus,
                                          config.episodes_per_candidate, s,
                                          config.alive_bonus_offset, collect);
            const auto minus = run_rollout(*env, perts[static_cast<std::size_t>(k)].minus,
                                           config.episodes_per_candidate, s,
                                           config.alive_bonus_offset, collect);
            results[static_cast<std::size_t>(k)] = {plus.mean_return, minus.mean_return,
                                                    perts[static_cast<std::size_t>(k)].delta};
            dir_steps[static_cast<std::size_t>(k)] = plus.steps + minus.steps;
            if (collect) {
                dir_stats[static_cast<std::size_t>(k)] = plus.stats;
                dir_stats[static_cast<std::size_t>(k)].merge(minus.stats);
            }
        };

        if (n_threads > 1 && config.n_directions > 1) {
            std::vector<std::future<void>> futures;
            futures.reserve(static_cast<std::size_t>(config.n_directions));
            for (int k = 0; k < config.n_directions; ++k) {
                futures.push_back(std::async(std::launch::async, run_direction, k));
            }
            for (auto& f : futures) f.get();
        } else {
            for (int k = 0; k < config.n_directions; ++k) run_direction(k);
        }

        for (int k = 0; k < config.n_directions; ++k) {
            result.train_env_steps += dir_steps[static_cast<std::size_t>(k)];
            if (collect) stats.merge(dir_stats[static_cast<std::size_t>(k)]);
        }

        result.policy = update(result.policy, results, config);
        if (collect && stats.count > 0) {
            result.policy.obs_mean = stats.mean;
            result.policy.obs_var = stats.variance();
        }

        record_eval(iteration);
        result.iterations = iteration;

        if (config.max_wall_seconds > 0.0) {
            const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - t_start;
            if (elapsed.count() > config.max_wall_seconds) {
                result.aborted = true;
                break;
            }
        }
    }

    result.r_start = result.curve.front().eval_mean;
    result.r_end = result.curve.back().eval_mean;
    return result;
}

} // namespace co2net::ars
