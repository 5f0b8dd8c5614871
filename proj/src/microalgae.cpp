#include "co2net/microalgae.hpp"

#include <cmath>

#include "co2net/errors.hpp"

namespace co2net::algae {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0)) {
        throw ConfigError(std::string("microalgae: ") + name + " must be positive");
    }
}

} // namespace

void Params::validate() const {
    require_positive(mu_alg, "mu_alg");
    require_positive(th, "th");
    require_positive(ks, "ks");
    require_positive(ksi, "ksi");
    require_positive(kii, "kii");
    require_positive(y, "y");
    require_positive(sin, "sin");
    if (!(k_co2 > 0.0 && k_co2 < 1.0)) {
        throw ConfigError("microalgae: k_co2 must lie in (0, 1)");
    }
}

Params Params::from_config(const ConfigFile& cfg) {
    cfg.require_only("microalgae", {"mu_alg", "th", "ks", "ksi", "kii", "y", "sin", "k_co2",
                                    "i_ref", "x_alg_0", "s_0", "provenance"});
    Params p;
    p.mu_alg = cfg.number("microalgae", "mu_alg");
    p.th = cfg.number("microalgae", "th");
    p.ks = cfg.number("microalgae", "ks");
    p.ksi = cfg.number("microalgae", "ksi");
    p.kii = cfg.number("microalgae", "kii");
    p.y = cfg.number("microalgae", "y");
    p.sin = cfg.number("microalgae", "sin");
    p.k_co2 = cfg.number("microalgae", "k_co2");
    p.validate();
    return p;
}

double light_factor(double i, const Params& p) {
    if (i < 0.0) throw ModelDomainError("light_factor: negative light intensity");
    if (i == 0.0) return 0.0;
    return i / (i + p.ksi + i * i / p.kii);
}

double growth_rate(double s, double i, const Params& p) {
    if (s < 0.0) throw ModelDomainError("growth_rate: negative nutrient concentration");
    return p.mu_alg * light_factor(i, p) * s / (s + p.ks);
}

double uptake_rho(double s, double i, const Params& p) {
    return growth_rate(s, i, p) / p.y;
}

double carbon_uptake(double s, double i, const Params& p) {
    return p.k_co2 * uptake_rho(s, i, p);
}

double optimal_light(const Params& p) {
    return std::sqrt(p.ksi * p.kii);
}

void monod_field(const State& x, double i, const Params& p, double& dx_alg, double& ds) {
    const double mu = growth_rate(x.s, i, p);
    dx_alg = mu * x.x_alg - x.x_alg / p.th;
    ds = (p.sin - x.s) / p.th - (mu / p.y) * x.x_alg;
}

double steady_nutrient(double i, const Params& p) {
    const double c = p.th * p.mu_alg * light_factor(i, p);
    if (!(c > 1.0)) {
        throw ModelDomainError("steady_nutrient: culture washes out at light " + std::to_string(i));
    }
    return p.ks / (c - 1.0);
}

double steady_carbon_uptake(const Params& p) {
    return p.k_co2 / (p.y * p.th);
}

} // namespace co2net::algae
