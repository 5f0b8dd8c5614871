#pragma once

#include "co2net/config.hpp"

namespace co2net::algae {

/// Algal biomass volume density X_ALG [um^3/L] and remaining nutrient
/// concentration S [umol/L].
struct State {
    double x_alg;
    double s;
};

struct Params {
    double mu_alg;   // maximum growth rate [1/d]
    double th;       // hydraulic retention time [d]
    double ks;       // nutrient half-saturation [umol/L]
    double ksi, kii; // light saturation / inhibition coefficients
    double y;        // growth yield
    double sin;      // inlet nutrient concentration [umol/L]
    double k_co2;    // CO2 fraction of the uptake, in (0, 1); respiration folded in

    void validate() const;
    static Params from_config(const ConfigFile& cfg);
};

/// Light limitation factor I/(I + KsI + I^2/KiI); unimodal with maximizer
/// sqrt(KsI*KiI).
double light_factor(double i, const Params& p);

/// Growth rate mu_ALG * light_factor(I) * S/(S+KS). Negative inputs are a
/// domain error.
double growth_rate(double s, double i, const Params& p);

/// Nutrient uptake rate rho = mu/Y.
double uptake_rho(double s, double i, const Params& p);

/// CO2 uptake K_CO2 * rho; equals the flow from the atmosphere to the
/// cultivation and serves as the learning reward.
double carbon_uptake(double s, double i, const Params& p);

/// Light intensity maximizing the growth rate at any S: sqrt(KsI*KiI).
double optimal_light(const Params& p);

/// Right-hand side of the growth/nutrient balance under light i.
void monod_field(const State& x, double i, const Params& p, double& dx_alg, double& ds);

/// Steady nutrient level under constant light, KS/(Th*mu_ALG*L(i) - 1).
/// Throws ModelDomainError when the culture washes out at that light.
double steady_nutrient(double i, const Params& p);

/// Steady CO2 uptake K_CO2/(Y*Th), light-independent whenever a
/// non-washout equilibrium exists.
double steady_carbon_uptake(const Params& p);

} // namespace co2net::algae
