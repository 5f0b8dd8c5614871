#pragma once

#include <Eigen/Dense>

#include "co2net/config.hpp"

namespace co2net::digester {

using Vector6d = Eigen::Matrix<double, 6, 1>;

/// Concentrations of the two-reaction anaerobic digestion model:
/// acidogenic biomass X1 [g/L], methanogenic biomass X2 [g/L], organic
/// substrate S1 [g/L], volatile fatty acids S2 [mmol/L], total alkalinity
/// Z [mmol/L] and total inorganic carbon C [mmol/L].
struct State {
    double x1, x2, s1, s2, z, c;

    Vector6d vec() const {
        Vector6d v;
        v << x1, x2, s1, s2, z, c;
        return v;
    }
    static State from(const Vector6d& v) { return {v[0], v[1], v[2], v[3], v[4], v[5]}; }
};

struct Params {
    double alpha;              // fraction of bacteria in the liquid phase
    double s1in, s2in;         // inlet concentrations
    double k1, k2, k3, k4, k5, k6;
    double zin, cin;
    double mu1max, ks1;        // substrate growth law
    double mu2max, ks2, ki2;   // VFA growth law with inhibition
    double kla;                // liquid-gas transfer coefficient [1/d]
    double kh;                 // Henry constant [mmol/(L atm)]
    double pt;                 // total pressure [atm]
    double fr;                 // released fraction after capture, <= 0.2

    void validate() const;
    static Params from_config(const ConfigFile& cfg);
};

/// Operating point: state and the six dilution rates holding it steady.
struct Equilibrium {
    Vector6d x_ss;
    Vector6d u_ss;

    /// Residual of the full dynamics at (x_ss, u_ss); must vanish.
    static Equilibrium from_config(const ConfigFile& cfg, const Params& p);
    void verify(const Params& p, double tol = 1e-8) const;
};

/// Substrate-limited growth rate mu1max*S1/(S1+KS1); saturates below mu1max.
double mu1(double s1, const Params& p);

/// VFA growth rate with inhibition mu2max*S2/(S2+KS2+(S2/KI2)^2);
/// unimodal with maximizer KI2*sqrt(KS2).
double mu2(double s2, const Params& p);

/// C + S2 - Z + KH*PT + (k6/kLa)*mu2*X2, the gas-balance auxiliary term.
double gas_phi(const State& x, const Params& p);

/// CO2 partial pressure, the smaller root of
/// KH*P^2 - gas_phi*P + PT*(C+S2-Z) = 0. Throws ModelDomainError when the
/// discriminant is negative.
double partial_pressure_pc(const State& x, const Params& p);

/// CO2 flow to the atmosphere, fr*kLa*[C + S2 - Z - KH*PC] [mmol/(L d)].
double co2_outflow(const State& x, const Params& p);

/// Reaction part of the dynamics (dilution terms excluded).
Vector6d reaction_field(const State& x, const Params& p);

/// Diagonal of the dilution gain matrix:
/// (-alpha*X1, -alpha*X2, S1in-S1, S2in-S2, Zin-Z, Cin-C).
Vector6d dilution_gain(const State& x, const Params& p);

/// Full right-hand side of the dynamics under dilution input u.
Vector6d raw_rhs(const State& x, const Vector6d& u, const Params& p);

/// Dynamics translated to the equilibrium: with xt = x - x_ss and the
/// commanded dilution u_ss + ut,
///   d(xt)/dt = drift(xt) + G(xt)*ut,   drift(0) = 0.
class TranslatedModel {
public:
    TranslatedModel(const Params& p, const Equilibrium& eq, double singularity_threshold = 1e-6);

    Vector6d drift(const Vector6d& x_tilde) const;

    /// Diagonal of G at the physical state behind x_tilde. Throws
    /// SingularInputMatrixError when any entry falls below the threshold.
    Vector6d input_gain(const Vector6d& x_tilde) const;

    /// Same diagonal without the singularity check (for inspection).
    Vector6d input_gain_unchecked(const Vector6d& x_tilde) const;

    Vector6d physical_state(const Vector6d& x_tilde) const { return eq_.x_ss + x_tilde; }
    const Params& params() const { return params_; }
    const Equilibrium& equilibrium() const { return eq_; }
    double singularity_threshold() const { return singularity_threshold_; }

private:
    Params params_;
    Equilibrium eq_;
    double singularity_threshold_;
};

} // namespace co2net::digester
