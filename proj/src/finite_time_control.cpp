#include "co2net/finite_time_control.hpp"

#include <cmath>

#include "co2net/errors.hpp"

namespace co2net::control {

LyapunovPQ pq_from(const Eigen::VectorXd& x0, double t_max) {
    if (!(t_max > 1.0)) {
        throw SettlingBoundError("T_max must lie in (1, inf), got " + std::to_string(t_max));
    }
    if (!x0.allFinite()) throw ConfigError("pq_from: non-finite initial condition");
    const double r0 = x0.squaredNorm();
    const double kappa = (1.0 + t_max) / t_max;
    LyapunovPQ pq;
    pq.q = t_max / (1.0 + t_max);
    pq.p = r0 == 0.0 ? 0.0 : 0.5 * std::pow(r0, 1.0 / (1.0 + t_max)) * kappa * kappa;
    return pq;
}

double lyapunov_v(const Eigen::VectorXd& x, const LyapunovPQ& pq) {
    const double r = x.squaredNorm();
    return r == 0.0 ? 0.0 : pq.p * std::pow(r, pq.q);
}

Eigen::RowVectorXd lyapunov_grad(const Eigen::VectorXd& x, const LyapunovPQ& pq) {
    const double r = x.squaredNorm();
    if (r == 0.0) return Eigen::RowVectorXd::Zero(x.size());
    return (2.0 * pq.p * pq.q * std::pow(r, pq.q - 1.0)) * x.transpose();
}

Eigen::VectorXd baseline_control(const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& f,
                                 const Eigen::MatrixXd& g,
                                 const Eigen::RowVectorXd& l2,
                                 const Eigen::MatrixXd& r2inv,
                                 const Eigen::RowVectorXd& v_grad) {
    (void)x;
    (void)f;
    if (r2inv.rows() != r2inv.cols()) throw ConfigError("baseline_control: R2inv must be square");
    if (!r2inv.isApprox(r2inv.transpose(), 1e-10)) {
        throw ConfigError("baseline_control: R2inv must be symmetric");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(r2inv);
    if (llt.info() != Eigen::Success) {
        throw ConfigError("baseline_control: R2inv must be positive definite");
    }
    const Eigen::RowVectorXd bracket = l2 + v_grad * g;
    return -0.5 * (r2inv * bracket.transpose());
}

Eigen::VectorXd icd_control(const Eigen::VectorXd& x,
                            const Eigen::VectorXd& f,
                            const Eigen::VectorXd& g_diag,
                            const LyapunovPQ& pq) {
    for (Eigen::Index i = 0; i < g_diag.size(); ++i) {
        if (g_diag[i] == 0.0) {
            throw SingularInputMatrixError("icd_control: zero dilution gain entry " + std::to_string(i + 1));
        }
    }
    const Eigen::VectorXd v_grad_t = lyapunov_grad(x, pq).transpose();
    return (-0.5 * (2.0 * f + v_grad_t).array() / g_diag.array()).matrix();
}

Eigen::VectorXd closed_loop_field(const Eigen::VectorXd& x, const LyapunovPQ& pq) {
    const double r = x.squaredNorm();
    if (r == 0.0) return Eigen::VectorXd::Zero(x.size());
    return (-pq.p * pq.q * std::pow(r, pq.q - 1.0)) * x;
}

double settling_bound(const Eigen::VectorXd& x0, const LyapunovPQ& pq, double c, double beta) {
    if (!(c > 0.0)) throw ConfigError("settling_bound: c must be positive");
    if (!(beta > 0.0 && beta < 1.0)) {
        throw ModelDomainError("settling_bound: beta must lie in (0, 1)");
    }
    return std::pow(lyapunov_v(x0, pq), 1.0 - beta) / (c * (1.0 - beta));
}

double canonical_c(const Eigen::VectorXd& x0, const LyapunovPQ& pq, double beta) {
    if (!(beta > 0.0 && beta < 1.0)) {
        throw ModelDomainError("canonical_c: beta must lie in (0, 1)");
    }
    return std::pow(lyapunov_v(x0, pq), 1.0 - beta);
}

double cost_step(const Eigen::VectorXd& x,
                 const Eigen::VectorXd& u,
                 const Eigen::VectorXd& f,
                 const Eigen::VectorXd& g_diag,
                 const LyapunovPQ& pq,
                 double dt) {
    if (!(dt > 0.0)) throw ConfigError("cost_step: dt must be positive");
    const Eigen::RowVectorXd v_grad = lyapunov_grad(x, pq);
    const Eigen::VectorXd phi = icd_control(x, f, g_diag, pq);
    const Eigen::VectorXd g_phi = g_diag.cwiseProduct(phi);
    const Eigen::VectorXd g_u = g_diag.cwiseProduct(u);
    const double l1 = g_phi.squaredNorm() - v_grad.dot(f);
    const double integrand = l1 + 2.0 * f.dot(g_u) + g_u.squaredNorm();
    return integrand * dt;
}

Eigen::VectorXd preset_x0(int id) {
    Eigen::VectorXd x0(6);
    switch (id) {
    case 1:
        x0 << -1.0, 0.5, 1.0, 1.5, 0.8, -0.5;
        return x0;
    case 2:
        x0 << -1.5, 1.25, 0.4, 1.8, -1.8, -2.2;
        return x0;
    default:
        throw ConfigError("unknown initial-condition preset " + std::to_string(id));
    }
}

void ControllerConfig::validate() const {
    if (!(t_max > 1.0)) {
        throw SettlingBoundError("T_max must lie in (1, inf), got " + std::to_string(t_max));
    }
    if (x0.size() == 0 || !x0.allFinite()) {
        throw ConfigError("controller: initial condition missing or non-finite");
    }
    if (!(settle_tol > 0.0)) throw ConfigError("controller: settle_tol must be positive");
}

IcdController::IcdController(DriftFn drift, GainFn input_gain, const ControllerConfig& config)
    : drift_(std::move(drift)), gain_(std::move(input_gain)), config_(config) {
    config_.validate();
    pq_ = pq_from(config_.x0, config_.t_max);
    settle_threshold_ = config_.settle_tol * std::max(1.0, config_.x0.norm());
    settled_ = config_.x0.squaredNorm() == 0.0;
}

Eigen::VectorXd IcdController::action(const Eigen::VectorXd& x_tilde) {
    if (!settled_ && x_tilde.norm() < settle_threshold_) settled_ = true;
    if (settled_) return Eigen::VectorXd::Zero(x_tilde.size());
    return icd_control(x_tilde, drift_(x_tilde), gain_(x_tilde), pq_);
}

} // namespace co2net::control
