#pragma once

#include "neolith/parameters.hpp"

namespace neolith {

/// Dynamic state of one regional population.
struct RegionState {
    double population = 0.0;          // P, persons km^-2
    double technology = 1.0;          // T
    double agro_share = 0.0;          // Q, share of agropastoral activity
    double economies_fraction = 0.0;  // f, realised fraction of potential economies
};

/// Biogeographic potentials a region's population lives with.
struct Environment {
    double fep = 0.0;  // food extraction potential
    double pae = 0.0;  // absolute potential number of agropastoral economies
    double tli = 0.0;  // temperature limitation on agriculture
};

/// Partial derivatives of the relative growth rate.
struct Gradients {
    double technology = 0.0;
    double agro_share = 0.0;
    double economies_fraction = 0.0;
};

struct TraitRates {
    double technology = 0.0;
    double agro_share = 0.0;
    double economies_fraction = 0.0;
};

/// Realised number of agropastoral economies, N = f * PAE.
inline double economies(const RegionState& s, const Environment& env) { return s.economies_fraction * env.pae; }

/// SI = (1-Q) sqrt(T) + Q N T TLI; unity for Mesolithic foragers at T = 1.
double subsistence_intensity(const RegionState& s, const Environment& env);

/// r = mu (FEP - gamma sqrt(T) P)(1 - omega T) SI - rho P exp(-T/T_lit).
double growth_rate(const RegionState& s, double fep, double si, const Parameters& params);
double growth_rate(const RegionState& s, const Environment& env, const Parameters& params);

/// Closed-form gradient of growth_rate composed with subsistence_intensity.
Gradients fitness_gradients(const RegionState& s, const Environment& env, const Parameters& params);

/// dX/dt = flexibility_X * dr/dX.
TraitRates trait_rates(const Gradients& g, const Parameters& params);

inline double population_rate(const RegionState& s, double r) { return r * s.population; }

/// Neolithic when the agropastoral share exceeds the foraging share.
inline bool is_neolithic(const RegionState& s) { return s.agro_share > 0.5; }

/// Projects a state back onto P >= 0, T >= floor, Q and f in [0, 1].
RegionState clip(RegionState s, const Parameters& params);

}  // namespace neolith
