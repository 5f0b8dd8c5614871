#include "co2net/digester.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "co2net/errors.hpp"

namespace co2net::digester {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0)) {
        throw ConfigError(std::string("digester: ") + name + " must be positive");
    }
}

std::string state_string(const State& x) {
    std::ostringstream os;
    os << "(X1=" << x.x1 << ", X2=" << x.x2 << ", S1=" << x.s1 << ", S2=" << x.s2
       << ", Z=" << x.z << ", C=" << x.c << ")";
    return os.str();
}

} // namespace

void Params::validate() const {
    require_positive(alpha, "alpha");
    require_positive(s1in, "s1in");
    require_positive(s2in, "s2in");
    require_positive(k1, "k1");
    require_positive(k2, "k2");
    require_positive(k3, "k3");
    require_positive(k4, "k4");
    require_positive(k5, "k5");
    require_positive(k6, "k6");
    require_positive(zin, "zin");
    require_positive(cin, "cin");
    require_positive(mu1max, "mu1max");
    require_positive(ks1, "ks1");
    require_positive(mu2max, "mu2max");
    require_positive(ks2, "ks2");
    require_positive(ki2, "ki2");
    require_positive(kla, "kla");
    require_positive(kh, "kh");
    require_positive(pt, "pt");
    if (!(fr > 0.0) || fr > 0.2) {
        throw ConfigError("digester: fr must lie in (0, 0.2] (regulated capture of at least 80%)");
    }
}

Params Params::from_config(const ConfigFile& cfg) {
    cfg.require_only("digester", {"alpha", "s1in", "s2in", "k1", "k2", "k3", "k4", "k5", "k6",
                                  "zin", "cin", "mu1max", "mu2max", "ks1", "ks2", "ki2",
                                  "kla", "kh", "pt", "fr", "x_ss", "u_ss", "provenance"});
    Params p;
    p.alpha = cfg.number("digester", "alpha");
    p.s1in = cfg.number("digester", "s1in");
    p.s2in = cfg.number("digester", "s2in");
    p.k1 = cfg.number("digester", "k1");
    p.k2 = cfg.number("digester", "k2");
    p.k3 = cfg.number("digester", "k3");
    p.k4 = cfg.number("digester", "k4");
    p.k5 = cfg.number("digester", "k5");
    p.k6 = cfg.number("digester", "k6");
    p.zin = cfg.number("digester", "zin");
    p.cin = cfg.number("digester", "cin");
    p.mu1max = cfg.number("digester", "mu1max");
    p.ks1 = cfg.number("digester", "ks1");
    p.mu2max = cfg.number("digester", "mu2max");
    p.ks2 = cfg.number("digester", "ks2");
    p.ki2 = cfg.number("digester", "ki2");
    p.kla = cfg.number("digester", "kla");
    p.kh = cfg.number("digester", "kh");
    p.pt = cfg.number("digester", "pt");
    p.fr = cfg.number("digester", "fr");
    p.validate();
    return p;
}

Equilibrium Equilibrium::from_config(const ConfigFile& cfg, const Params& p) {
    Equilibrium eq;
    const auto xs = cfg.numbers("digester", "x_ss", 6);
    const auto us = cfg.numbers("digester", "u_ss", 6);
    for (int i = 0; i < 6; ++i) {
        eq.x_ss[i] = xs[static_cast<std::size_t>(i)];
        eq.u_ss[i] = us[static_cast<std::size_t>(i)];
    }
    eq.verify(p);
    return eq;
}

void Equilibrium::verify(const Params& p, double tol) const {
    const Vector6d res = raw_rhs(State::from(x_ss), u_ss, p);
    if (!(res.cwiseAbs().maxCoeff() < tol)) {
        std::ostringstream os;
        os << "digester: (x_ss, u_ss) is not an equilibrium, residual max-norm "
           << res.cwiseAbs().maxCoeff() << " >= " << tol;
        throw ConfigError(os.str());
    }
}

double mu1(double s1, const Params& p) {
    if (s1 < 0.0) throw ModelDomainError("mu1: negative substrate concentration");
    return p.mu1max * s1 / (s1 + p.ks1);
}

double mu2(double s2, const Params& p) {
    if (s2 < 0.0) throw ModelDomainError("mu2: negative VFA concentration");
    const double ratio = s2 / p.ki2;
    return p.mu2max * s2 / (s2 + p.ks2 + ratio * ratio);
}

double gas_phi(const State& x, const Params& p) {
    return x.c + x.s2 - x.z + p.kh * p.pt + (p.k6 / p.kla) * mu2(x.s2, p) * x.x2;
}

double partial_pressure_pc(const State& x, const Params& p) {
    const double phi = gas_phi(x, p);
    const double disc = phi * phi - 4.0 * p.kh * p.pt * (x.c + x.s2 - x.z);
    if (disc < 0.0) {
        throw ModelDomainError("partial_pressure_pc: negative discriminant at state " + state_string(x));
    }
    return (phi - std::sqrt(disc)) / (2.0 * p.kh);
}

double co2_outflow(const State& x, const Params& p) {
    const double pc = partial_pressure_pc(x, p);
    return p.fr * (p.kla * (x.c + x.s2 - x.z - p.kh * pc));
}

Vector6d reaction_field(const State& x, const Params& p) {
    const double m1 = mu1(x.s1, p);
    const double m2 = mu2(x.s2, p);
    Vector6d f;
    f[0] = m1 * x.x1;
    f[1] = m2 * x.x2;
    f[2] = -p.k1 * m1 * x.x1;
    f[3] = p.k2 * m1 * x.x1 - p.k3 * m2 * x.x2;
    f[4] = 0.0;
    f[5] = -co2_outflow(x, p) + p.k4 * m1 * x.x1 + p.k5 * m2 * x.x2;
    return f;
}

Vector6d dilution_gain(const State& x, const Params& p) {
    Vector6d g;
    g[0] = -p.alpha * x.x1;
    g[1] = -p.alpha * x.x2;
    g[2] = p.s1in - x.s1;
    g[3] = p.s2in - x.s2;
    g[4] = p.zin - x.z;
    g[5] = p.cin - x.c;
    return g;
}

Vector6d raw_rhs(const State& x, const Vector6d& u, const Params& p) {
    return reaction_field(x, p) + dilution_gain(x, p).cwiseProduct(u);
}

TranslatedModel::TranslatedModel(const Params& p, const Equilibrium& eq, double singularity_threshold)
    : params_(p), eq_(eq), singularity_threshold_(singularity_threshold) {
    params_.validate();
    eq_.verify(params_);
}

Vector6d TranslatedModel::drift(const Vector6d& x_tilde) const {
    const State x = State::from(physical_state(x_tilde));
    return reaction_field(x, params_) + dilution_gain(x, params_).cwiseProduct(eq_.u_ss);
}

Vector6d TranslatedModel::input_gain_unchecked(const Vector6d& x_tilde) const {
    return dilution_gain(State::from(physical_state(x_tilde)), params_);
}

Vector6d TranslatedModel::input_gain(const Vector6d& x_tilde) const {
    const Vector6d g = input_gain_unchecked(x_tilde);
    for (int i = 0; i < 6; ++i) {
        if (std::abs(g[i]) < singularity_threshold_) {
            std::ostringstream os;
            os << "dilution gain entry " << (i + 1) << " is " << g[i]
               << ", below the singularity threshold " << singularity_threshold_;
            throw SingularInputMatrixError(os.str());
        }
    }
    return g;
}

} // namespace co2net::digester
