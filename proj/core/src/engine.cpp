#include "neolith/engine.hpp"

#include "neolith/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <thread>

namespace neolith {

namespace {

template <class Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn)
{
    const auto workers = static_cast<std::size_t>(std::max(1, threads));
    if (workers == 1 || n < 64) {
        for (std::size_t i = 0; i < n; ++i) {
            fn(i);
        }
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) {
            break;
        }
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) {
                fn(i);
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
}

struct LocalRates {
    double growth = 0.0;
    TraitRates traits;
};

std::string describe(int region, const RegionState& s)
{
    return fmt::format("region {} (P={}, T={}, Q={}, f={})", region, s.population, s.technology, s.agro_share,
                       s.economies_fraction);
}

bool finite(const TraitRates& r)
{
    return std::isfinite(r.technology) && std::isfinite(r.agro_share) && std::isfinite(r.economies_fraction);
}

// Linear-interpolated first time index where `series` exceeds `level`.
std::optional<double> first_crossing(const std::vector<std::vector<double>>& history, std::size_t region,
                                     double level, const std::vector<double>& years)
{
    for (std::size_t k = 0; k < history.size(); ++k) {
        const double q = history[k][region];
        if (q > level) {
            if (k == 0) {
                return years[0];
            }
            const double q0 = history[k - 1][region];
            const double frac = (level - q0) / (q - q0);
            return years[k - 1] + frac * (years[k] - years[k - 1]);
        }
    }
    return std::nullopt;
}

}  // namespace

ExchangeMode parse_mode(std::string_view text)
{
    if (text == "mixed") return ExchangeMode::Mixed;
    if (text == "demic-only") return ExchangeMode::DemicOnly;
    if (text == "cultural-only") return ExchangeMode::CulturalOnly;
    if (text == "no-exchange") return ExchangeMode::None;
    throw InputError(fmt::format("unknown mode '{}' (expected mixed, demic-only, cultural-only, no-exchange)", text));
}

std::string_view to_string(ExchangeMode mode)
{
    switch (mode) {
    case ExchangeMode::Mixed: return "mixed";
    case ExchangeMode::DemicOnly: return "demic-only";
    case ExchangeMode::CulturalOnly: return "cultural-only";
    case ExchangeMode::None: return "no-exchange";
    }
    return "mixed";
}

void Scenario::validate() const
{
    if (!(start_bc > end_bc)) {
        throw InputError("scenario start must be older (larger BC) than its end");
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw InputError("scenario time step must be positive");
    }
    if (!(output_interval > 0.0)) {
        throw InputError("output interval must be positive");
    }
    if (!(completion_level > 0.0 && completion_level <= 1.0)) {
        throw InputError("completion level must lie in (0, 1]");
    }
    if (initial_population < 0.0 || initial_agro_share < 0.0 || initial_agro_share > 1.0 ||
        initial_economies < 0.0 || initial_technology <= 0.0) {
        throw InputError("initial state out of range");
    }
}

Parameters effective_parameters(const Parameters& params, ExchangeMode mode)
{
    Parameters p = params;
    if (mode == ExchangeMode::CulturalOnly || mode == ExchangeMode::None) {
        p.exchange_people = 0.0;
    }
    if (mode == ExchangeMode::DemicOnly || mode == ExchangeMode::None) {
        p.exchange_info = 0.0;
    }
    return p;
}

EnvironmentSchedule EnvironmentSchedule::constant(std::vector<Environment> env)
{
    EnvironmentSchedule s;
    s.add(0.0, std::move(env));
    return s;
}

void EnvironmentSchedule::add(double year_bc, std::vector<Environment> env)
{
    if (!slices_.empty() && env.size() != slices_.front().second.size()) {
        throw InputError("environment slices cover different region counts");
    }
    auto pos = std::find_if(slices_.begin(), slices_.end(), [&](const auto& s) { return s.first < year_bc; });
    slices_.insert(pos, {year_bc, std::move(env)});
}

const std::vector<Environment>& EnvironmentSchedule::at(double year_bc) const
{
    if (slices_.empty()) {
        throw InputError("empty environment schedule");
    }
    const std::vector<Environment>* current = &slices_.front().second;
    for (const auto& [year, env] : slices_) {
        if (year >= year_bc) {
            current = &env;
        } else {
            break;
        }
    }
    return *current;
}

std::vector<RegionState> initialize(const Scenario& scenario, std::span<const Environment> env,
                                    const Parameters& params)
{
    std::vector<RegionState> states(env.size());
    for (std::size_t i = 0; i < env.size(); ++i) {
        RegionState& s = states[i];
        s.population = scenario.initial_population;
        s.technology = scenario.initial_technology;
        s.agro_share = scenario.initial_agro_share;
        s.economies_fraction = env[i].pae > 0.0 ? std::min(1.0, scenario.initial_economies / env[i].pae) : 0.0;
    }
    if (scenario.seed) {
        const auto& seed = *scenario.seed;
        if (seed.region < 0 || static_cast<std::size_t>(seed.region) >= states.size()) {
            throw InputError(fmt::format("seed region {} does not exist", seed.region));
        }
        RegionState& s = states[static_cast<std::size_t>(seed.region)];
        s.population = seed.population.value_or(s.population);
        s.technology = seed.technology.value_or(s.technology);
        s.agro_share = seed.agro_share.value_or(s.agro_share);
        s.economies_fraction = seed.economies_fraction.value_or(s.economies_fraction);
    }
    for (auto& s : states) {
        s = clip(s, params);
    }
    return states;
}

StepResult step(const RegionGraph& graph, std::span<const RegionState> states, std::span<const Environment> env,
                const Parameters& params, double dt, int threads)
{
    const auto n = states.size();
    if (env.size() != n || graph.size() != n) {
        throw InputError("state, environment and graph sizes differ");
    }

    std::vector<LocalRates> local(n);
    parallel_for(n, threads, [&](std::size_t i) {
        const double r = growth_rate(states[i], env[i], params);
        local[i].growth = r;
        local[i].traits = trait_rates(fitness_gradients(states[i], env[i], params), params);
    });
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(local[i].growth) || !finite(local[i].traits)) {
            throw NumericalError("non-finite local rate in " + describe(static_cast<int>(i), states[i]),
                                 static_cast<int>(i));
        }
    }

    std::vector<TraitRates> cultural(n);
    if (params.exchange_info > 0.0) {
        const auto info = link_fluxes(graph, states, params.exchange_info);
        cultural = cultural_diffusion(graph, states, info, params.exchange_agro_share);
    }
    DemicExchange demic;
    if (params.exchange_people > 0.0) {
        const auto people = link_fluxes(graph, states, params.exchange_people);
        demic = demic_diffusion(graph, states, people);
    } else {
        demic.population_rate.assign(n, 0.0);
        demic.trait_rates.assign(n, TraitRates{});
        demic.inflow.assign(n, Inflow{});
        demic.outflow.assign(n, 0.0);
    }

    // Unbounded variables are guarded against the largest value in the domain.
    double population_scale = 0.0;
    double technology_scale = 1.0;
    for (const auto& s : states) {
        population_scale = std::max(population_scale, s.population);
        technology_scale = std::max(technology_scale, s.technology);
    }

    StepResult out;
    out.states.resize(n);
    out.accounts.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const RegionState& s = states[i];
        const double area = graph.area(static_cast<int>(i));
        const TraitRates& loc = local[i].traits;
        const TraitRates& cul = cultural[i];

        const double pop_rate = population_rate(s, local[i].growth) + demic.population_rate[i];
        if (!std::isfinite(pop_rate) || !finite(cul)) {
            throw NumericalError("non-finite exchange rate in " + describe(static_cast<int>(i), s),
                                 static_cast<int>(i));
        }

        RegionState next = s;
        next.population = s.population + dt * pop_rate;
        next.technology = s.technology + dt * (loc.technology + cul.technology);
        next.agro_share = s.agro_share + dt * (loc.agro_share + cul.agro_share);
        next.economies_fraction = s.economies_fraction + dt * (loc.economies_fraction + cul.economies_fraction);
        const double technology_before_mixing = next.technology;
        // Guarded increments are measured after projection onto the bounds, so a
        // trait pinned at a bound does not count as moving.
        const RegionState unmixed = clip(next, params);

        const Inflow& in = demic.inflow[i];
        if (in.mass > 0.0 && dt > 0.0) {
            const double resident = s.population * area;
            const double incoming = dt * in.mass;
            const double total = resident + incoming;
            next.technology = (next.technology * resident + dt * in.technology) / total;
            next.agro_share = (next.agro_share * resident + dt * in.agro_share) / total;
            next.economies_fraction = (next.economies_fraction * resident + dt * in.economies_fraction) / total;
        }
        next = clip(next, params);

        auto& acc = out.accounts[i];
        acc.agro_mass_before = s.agro_share * s.population * area;
        acc.agro_mass_after = next.agro_share * next.population * area;
        acc.immigrant_farmers = dt * in.agro_share;
        acc.cultural_agro_gain = dt * cul.agro_share * s.population * area;
        acc.technology_local = dt * loc.technology;
        acc.technology_cultural = dt * cul.technology;
        acc.technology_demic = next.technology - technology_before_mixing;

        const double ratios[] = {
            std::abs(unmixed.population - s.population) / population_scale,
            std::abs(unmixed.technology - s.technology) / technology_scale,
            std::abs(unmixed.agro_share - s.agro_share),
            std::abs(unmixed.economies_fraction - s.economies_fraction),
        };
        for (double r : ratios) {
            if (std::isfinite(r) && r > out.guard_ratio) {
                out.guard_ratio = r;
                out.guard_region = static_cast<int>(i);
            }
        }
        out.states[i] = next;
    }
    return out;
}

RunResult run(const Scenario& scenario, const RegionGraph& graph, const EnvironmentSchedule& environment,
              const Parameters& params)
{
    scenario.validate();
    params.validate();
    if (environment.regions() != graph.size()) {
        throw InputError("environment schedule does not match the region graph");
    }
    const Parameters effective = effective_parameters(params, scenario.mode);
    const auto n = graph.size();

    RunResult result;
    result.ledger = SourceLedger(n);
    std::vector<RegionState> states = initialize(scenario, environment.at(scenario.start_bc), effective);

    const double span = scenario.start_bc - scenario.end_bc;
    const auto steps = static_cast<int>(std::ceil(span / scenario.dt - 1e-9));
    const int snapshot_every = std::max(1, static_cast<int>(std::lround(scenario.output_interval / scenario.dt)));

    std::vector<std::vector<double>> agro_history;
    std::vector<std::vector<double>> demic_history;
    std::vector<double> years;
    agro_history.reserve(static_cast<std::size_t>(steps) + 1);

    auto record = [&](double year) {
        std::vector<double> q(n);
        std::vector<double> d(n);
        for (std::size_t i = 0; i < n; ++i) {
            q[i] = states[i].agro_share;
            d[i] = result.ledger.shares(static_cast<int>(i)).demic;
        }
        agro_history.push_back(std::move(q));
        demic_history.push_back(std::move(d));
        years.push_back(year);
    };
    auto snapshot = [&](double year) {
        Snapshot snap;
        snap.year_bc = year;
        snap.states = states;
        const auto& env = environment.at(year);
        for (std::size_t i = 0; i < n; ++i) {
            snap.shares.push_back(result.ledger.shares(static_cast<int>(i)));
            snap.economies.push_back(economies(states[i], env[i]));
        }
        result.trajectory.push_back(std::move(snap));
    };

    double year = scenario.start_bc;
    record(year);
    snapshot(year);
    for (int k = 0; k < steps; ++k) {
        const double dt = std::min(scenario.dt, year - scenario.end_bc);
        const auto& env = environment.at(year);
        StepResult res = step(graph, states, env, effective, dt, scenario.threads);
        if (k < scenario.guard_steps && res.guard_ratio > scenario.guard_fraction) {
            throw NumericalError(fmt::format("time step {} a too large: relative change {:.3g} exceeds {:.3g} in {}",
                                             dt, res.guard_ratio, scenario.guard_fraction,
                                             describe(res.guard_region,
                                                      states[static_cast<std::size_t>(res.guard_region)])),
                                 res.guard_region);
        }
        states = std::move(res.states);
        result.ledger.attribute(res.accounts);
        year = (k + 1 == steps) ? scenario.end_bc : year - dt;
        record(year);
        if ((k + 1) % snapshot_every == 0 || k + 1 == steps) {
            snapshot(year);
        }
    }
    result.steps = steps;
    result.final_states = states;

    for (std::size_t i = 0; i < n; ++i) {
        TransitionRecord rec;
        rec.region = static_cast<int>(i);
        rec.onset_bc = first_crossing(agro_history, i, 0.5, years);
        const double final_share = states[i].agro_share;
        std::optional<double> level;
        if (scenario.completion == CompletionRule::Absolute) {
            level = scenario.completion_level;
        } else if (is_neolithic(states[i])) {
            level = scenario.completion_level * final_share;
        }
        if (level) {
            // Below the final value by construction for the relative rule; the
            // crossing exists whenever the series ends above it.
            for (std::size_t k = 0; k < agro_history.size(); ++k) {
                if (agro_history[k][i] > *level || (k + 1 == agro_history.size() && agro_history[k][i] >= *level)) {
                    rec.completion_bc = first_crossing(agro_history, i, std::nextafter(*level, -1.0), years);
                    rec.immigrant_fraction = demic_history[k][i];
                    break;
                }
            }
        }
        result.transitions.push_back(rec);
    }
    return result;
}

}  // namespace neolith
