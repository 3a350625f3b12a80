#include "neolith/exchange.hpp"

#include "neolith/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <utility>

namespace neolith {

RegionGraph::RegionGraph(std::vector<double> areas, std::span<const Edge> edges) : areas_(std::move(areas))
{
    for (std::size_t i = 0; i < areas_.size(); ++i) {
        if (!(areas_[i] > 0.0)) {
            throw InputError("region " + std::to_string(i) + " has non-positive area");
        }
    }
    std::set<std::pair<int, int>> seen;
    const int n = static_cast<int>(areas_.size());
    for (const auto& e : edges) {
        if (e.a < 0 || e.b < 0 || e.a >= n || e.b >= n) {
            throw InputError("edge references unknown region");
        }
        if (e.a == e.b) {
            throw InputError("self edge on region " + std::to_string(e.a));
        }
        if (!seen.insert(std::minmax(e.a, e.b)).second) {
            throw InputError("duplicate edge " + std::to_string(e.a) + "-" + std::to_string(e.b));
        }
        if (!(e.boundary_km > 0.0)) {
            throw InputError("edge boundary length must be positive");
        }
        links_.push_back({e.a, e.b, e.boundary_km, coupling(e.boundary_km, area(e.a), area(e.b))});
    }
}

double coupling(double boundary_km, double area_i, double area_j)
{
    return boundary_km / std::sqrt(area_i * area_j);
}

double influence_flux(const RegionState& i, const RegionState& j, double coupling, double sigma)
{
    const double influence_i = i.technology * i.population;
    const double influence_j = j.technology * j.population;
    // <TP>_ij - T_i P_i written as half the difference, which is exactly
    // antisymmetric in floating point.
    return sigma * coupling * (0.5 * (influence_j - influence_i));
}

std::vector<double> link_fluxes(const RegionGraph& graph, std::span<const RegionState> states, double sigma)
{
    std::vector<double> out;
    out.reserve(graph.links().size());
    for (const auto& link : graph.links()) {
        out.push_back(influence_flux(states[static_cast<std::size_t>(link.a)],
                                     states[static_cast<std::size_t>(link.b)], link.coupling, sigma));
    }
    return out;
}

std::vector<TraitRates> cultural_diffusion(const RegionGraph& graph, std::span<const RegionState> states,
                                           std::span<const double> fluxes, bool include_agro_share)
{
    std::vector<TraitRates> out(graph.size());
    const auto& links = graph.links();
    for (std::size_t k = 0; k < links.size(); ++k) {
        const double f = fluxes[k];
        if (f == 0.0) {
            continue;
        }
        const int receiver = f > 0.0 ? links[k].a : links[k].b;
        const int donor = f > 0.0 ? links[k].b : links[k].a;
        const double rate = std::abs(f);
        const auto& x = states[static_cast<std::size_t>(receiver)];
        const auto& y = states[static_cast<std::size_t>(donor)];
        auto& inc = out[static_cast<std::size_t>(receiver)];
        inc.technology += rate * (y.technology - x.technology);
        inc.economies_fraction += rate * (y.economies_fraction - x.economies_fraction);
        if (include_agro_share) {
            inc.agro_share += rate * (y.agro_share - x.agro_share);
        }
    }
    return out;
}

DemicExchange demic_diffusion(const RegionGraph& graph, std::span<const RegionState> states,
                              std::span<const double> fluxes)
{
    const auto n = graph.size();
    DemicExchange out;
    out.population_rate.assign(n, 0.0);
    out.trait_rates.assign(n, TraitRates{});
    out.inflow.assign(n, Inflow{});
    out.outflow.assign(n, 0.0);

    const auto& links = graph.links();
    for (std::size_t k = 0; k < links.size(); ++k) {
        const double f = fluxes[k];
        if (f == 0.0) {
            continue;
        }
        const int receiver = f > 0.0 ? links[k].a : links[k].b;
        const int donor = f > 0.0 ? links[k].b : links[k].a;
        const auto r = static_cast<std::size_t>(receiver);
        const auto d = static_cast<std::size_t>(donor);
        const double rate = std::abs(f);
        const auto& x = states[r];
        const auto& y = states[d];
        const double donor_mass = y.population * graph.area(donor);
        const double migrants = rate * donor_mass;
        if (migrants <= 0.0) {
            continue;
        }

        out.population_rate[r] += migrants / graph.area(receiver);
        out.population_rate[d] -= migrants / graph.area(donor);
        out.outflow[d] += migrants;

        auto& in = out.inflow[r];
        in.mass += migrants;
        in.technology += migrants * y.technology;
        in.agro_share += migrants * y.agro_share;
        in.economies_fraction += migrants * y.economies_fraction;

        const double resident_mass = x.population * graph.area(receiver);
        if (resident_mass > 0.0) {
            const double w = rate * donor_mass / resident_mass;
            auto& tr = out.trait_rates[r];
            tr.technology += w * (y.technology - x.technology);
            tr.agro_share += w * (y.agro_share - x.agro_share);
            tr.economies_fraction += w * (y.economies_fraction - x.economies_fraction);
        }
    }
    return out;
}

void SourceLedger::attribute(std::span<const StepAccount> step)
{
    if (step.size() != entries_.size()) {
        throw std::invalid_argument("SourceLedger::attribute: region count mismatch");
    }
    for (std::size_t i = 0; i < step.size(); ++i) {
        const auto& s = step[i];
        auto& e = entries_[i];
        const double gain = s.agro_mass_after - s.agro_mass_before;
        double demic = std::max(0.0, s.immigrant_farmers);
        double cultural = std::max(0.0, s.cultural_agro_gain);
        double local = gain - demic - cultural;
        if (local < 0.0) {
            const double imported = demic + cultural;
            const double scale = imported > 0.0 ? std::max(0.0, gain) / imported : 0.0;
            demic *= scale;
            cultural *= scale;
            local = 0.0;
        }
        e.demic += demic;
        e.cultural += cultural;
        e.local += local;
        e.technology_local += std::max(0.0, s.technology_local);
        e.technology_cultural += std::max(0.0, s.technology_cultural);
        e.technology_demic += std::max(0.0, s.technology_demic);
    }
}

SourceShares SourceLedger::shares(int region) const
{
    const auto& e = entry(region);
    const double total = e.demic + e.cultural + e.local;
    if (!(total > 0.0)) {
        return {};
    }
    return {e.demic / total, e.cultural / total, e.local / total};
}

}  // namespace neolith
