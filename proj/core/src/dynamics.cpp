#include "neolith/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace neolith {

double subsistence_intensity(const RegionState& s, const Environment& env)
{
    const double q = s.agro_share;
    const double t = s.technology;
    return (1.0 - q) * std::sqrt(t) + q * economies(s, env) * t * env.tli;
}

double growth_rate(const RegionState& s, double fep, double si, const Parameters& params)
{
    const double t = s.technology;
    const double p = s.population;
    const double utility = fep - params.impact_coefficient * std::sqrt(t) * p;
    const double overhead = 1.0 - params.overhead_coefficient * t;
    const double losses = params.loss_coefficient * p * std::exp(-t / params.loss_mitigation_scale);
    return params.growth_coefficient * utility * overhead * si - losses;
}

double growth_rate(const RegionState& s, const Environment& env, const Parameters& params)
{
    return growth_rate(s, env.fep, subsistence_intensity(s, env), params);
}

Gradients fitness_gradients(const RegionState& s, const Environment& env, const Parameters& params)
{
    const double mu = params.growth_coefficient;
    const double t = s.technology;
    const double p = s.population;
    const double q = s.agro_share;
    const double root_t = std::sqrt(t);
    const double n = economies(s, env);

    const double utility = env.fep - params.impact_coefficient * root_t * p;
    const double overhead = 1.0 - params.overhead_coefficient * t;
    const double si = subsistence_intensity(s, env);

    const double d_utility_dt = -params.impact_coefficient * p / (2.0 * root_t);
    const double d_overhead_dt = -params.overhead_coefficient;
    const double d_si_dt = (1.0 - q) / (2.0 * root_t) + q * n * env.tli;
    const double decay = std::exp(-t / params.loss_mitigation_scale);

    Gradients g;
    g.technology = mu * (d_utility_dt * overhead * si + utility * d_overhead_dt * si + utility * overhead * d_si_dt) +
                   params.loss_coefficient * p * decay / params.loss_mitigation_scale;
    g.agro_share = mu * utility * overhead * (n * t * env.tli - root_t);
    g.economies_fraction = mu * utility * overhead * q * env.pae * t * env.tli;
    return g;
}

TraitRates trait_rates(const Gradients& g, const Parameters& params)
{
    return {params.flexibility.technology * g.technology, params.flexibility.agro_share * g.agro_share,
            params.flexibility.economies * g.economies_fraction};
}

RegionState clip(RegionState s, const Parameters& params)
{
    s.population = std::max(0.0, s.population);
    s.technology = std::max(params.technology_floor, s.technology);
    s.agro_share = std::clamp(s.agro_share, 0.0, 1.0);
    s.economies_fraction = std::clamp(s.economies_fraction, 0.0, 1.0);
    return s;
}

}  // namespace neolith
