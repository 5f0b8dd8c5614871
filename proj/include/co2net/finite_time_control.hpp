#pragma once

#include <Eigen/Dense>
#include <functional>

namespace co2net::control {

/// Coefficients of the Lyapunov candidate V(x) = p*(x'x)^q.
///
/// For a settling bound T_max > 1 and initial condition x0,
///   p = (1/2) (x0'x0)^(1/(1+T_max)) ((1+T_max)/T_max)^2,
///   q = T_max/(1+T_max) in (1/2, 1),
/// which makes the closed loop settle exactly by T_max regardless of x0.
struct LyapunovPQ {
    double p;
    double q;
};

/// Computes (p, q) from the initial condition and the settling bound.
/// Throws SettlingBoundError unless T_max > 1. A zero x0 yields the
/// degenerate p = 0 (the controller then never leaves the origin).
LyapunovPQ pq_from(const Eigen::VectorXd& x0, double t_max);

/// V(x) = p*(x'x)^q.
double lyapunov_v(const Eigen::VectorXd& x, const LyapunovPQ& pq);

/// Row gradient V'(x) = 2pq(x'x)^(q-1) x'. Defined as the zero row at
/// x = 0 (the q > 1/2 limit), avoiding 0^negative.
Eigen::RowVectorXd lyapunov_grad(const Eigen::VectorXd& x, const LyapunovPQ& pq);

/// Generic optimal finite-time feedback
///   u = -1/2 R2inv(x) [L2(x) + V'(x)G(x)]'.
/// R2inv must be symmetric positive definite.
Eigen::VectorXd baseline_control(const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& f,
                                 const Eigen::MatrixXd& g,
                                 const Eigen::RowVectorXd& l2,
                                 const Eigen::MatrixXd& r2inv,
                                 const Eigen::RowVectorXd& v_grad);

/// Initial-condition-dependent specialization for diagonal G (l = n):
///   u = -1/2 G^-1 [2 f(x) + V''(x)],
/// under which the closed loop reduces to dx/dt = -1/2 V''(x).
Eigen::VectorXd icd_control(const Eigen::VectorXd& x,
                            const Eigen::VectorXd& f,
                            const Eigen::VectorXd& g_diag,
                            const LyapunovPQ& pq);

/// Model-independent closed-loop field -pq(x'x)^(q-1) x.
Eigen::VectorXd closed_loop_field(const Eigen::VectorXd& x, const LyapunovPQ& pq);

/// Settling-time bound (1/(c(1-beta))) V(x0)^(1-beta). With the canonical
/// c = V(x0)^(1-beta) and beta = 1 - 1/T_max the bound equals T_max.
double settling_bound(const Eigen::VectorXd& x0, const LyapunovPQ& pq, double c, double beta);

/// Canonical c = V(x0)^(1-beta); fixed by the construction, not tunable.
double canonical_c(const Eigen::VectorXd& x0, const LyapunovPQ& pq, double beta);

/// Increment of the performance functional over dt:
///   [L1(x) + 2 f'G u + u'G'G u] dt,  L1 = phi'G'G phi - V'f,
/// with phi the optimal feedback at x. Along the optimal trajectory the
/// accumulated cost equals V(x0).
double cost_step(const Eigen::VectorXd& x,
                 const Eigen::VectorXd& u,
                 const Eigen::VectorXd& f,
                 const Eigen::VectorXd& g_diag,
                 const LyapunovPQ& pq,
                 double dt);

/// Named initial-condition presets for the digester study (translated
/// coordinates). Valid ids: 1 and 2.
Eigen::VectorXd preset_x0(int id);

struct ControllerConfig {
    double t_max = 3.5;                  // settling bound, > 1
    Eigen::VectorXd x0;                  // translated initial condition
    double settle_tol = 1e-4;            // settled when |x| < tol*max(1, |x0|)
    double singularity_threshold = 1e-6; // forwarded to the model

    void validate() const;
};

/// Stateful wrapper: captures x0 at construction (the feedback is not a
/// pure state feedback), computes (p, q), detects settling and holds the
/// equilibrium input afterwards to avoid chatter from (x'x)^(q-1) near 0.
///
/// Caveat: x0 is frozen at construction. If the plant is re-perturbed
/// mid-run the bound T_max no longer applies to the new transient.
class IcdController {
public:
    using DriftFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
    using GainFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

    IcdController(DriftFn drift, GainFn input_gain, const ControllerConfig& config);

    /// Control action at the translated state; zero once settled.
    Eigen::VectorXd action(const Eigen::VectorXd& x_tilde);

    bool settled() const { return settled_; }
    const LyapunovPQ& pq() const { return pq_; }
    double settle_threshold() const { return settle_threshold_; }

private:
    DriftFn drift_;
    GainFn gain_;
    ControllerConfig config_;
    LyapunovPQ pq_;
    double settle_threshold_;
    bool settled_ = false;
};

} // namespace co2net::control
