#pragma once

#include <span>
#include <vector>

#include "neolith/dynamics.hpp"

namespace neolith {

struct Edge {
    int a = 0;
    int b = 0;
    double boundary_km = 0.0;
};

/// Undirected region adjacency with areas. Each link stores the geometric
/// coupling L_ab / sqrt(A_a A_b).
class RegionGraph {
public:
    struct Link {
        int a = 0;
        int b = 0;
        double boundary_km = 0.0;
        double coupling = 0.0;  // km^-1
    };

    RegionGraph() = default;
    /// Throws InputError on out-of-range ids, self loops, duplicate pairs or
    /// non-positive areas.
    RegionGraph(std::vector<double> areas, std::span<const Edge> edges);

    std::size_t size() const { return areas_.size(); }
    double area(int region) const { return areas_[static_cast<std::size_t>(region)]; }
    const std::vector<double>& areas() const { return areas_; }
    const std::vector<Link>& links() const { return links_; }

private:
    std::vector<double> areas_;
    std::vector<Link> links_;
};

double coupling(double boundary_km, double area_i, double area_j);

/// First-order relaxation flux toward region i:
/// sigma * coupling * (<T P>_ij - T_i P_i) with the pairwise mean influence.
/// Positive when j's influence exceeds i's.
double influence_flux(const RegionState& i, const RegionState& j, double coupling, double sigma);

/// Flux toward `link.a` for every link; the flux toward `link.b` is its negation.
std::vector<double> link_fluxes(const RegionGraph& graph, std::span<const RegionState> states, double sigma);

/// Trait uptake without migration: dX_i/dt = sum over f_ij > 0 of f_ij (X_j - X_i),
/// for technology and economies (and agro share when enabled).
std::vector<TraitRates> cultural_diffusion(const RegionGraph& graph, std::span<const RegionState> states,
                                           std::span<const double> fluxes, bool include_agro_share);

/// Migrant mass entering a region, with mass-weighted sums of migrant traits.
struct Inflow {
    double mass = 0.0;        // persons a^-1
    double technology = 0.0;  // sum of mass * T_donor
    double agro_share = 0.0;  // sum of mass * Q_donor (immigrant farmers)
    double economies_fraction = 0.0;
};

struct DemicExchange {
    std::vector<double> population_rate;  // dP_i/dt, persons km^-2 a^-1
    std::vector<TraitRates> trait_rates;  // mean-preserving carryover; zero for empty receivers
    std::vector<Inflow> inflow;
    std::vector<double> outflow;  // persons a^-1
};

/// Mass-conserving migration along positive fluxes. Each pair moves
/// M = f_ij P_j A_j persons per year from j to i.
DemicExchange demic_diffusion(const RegionGraph& graph, std::span<const RegionState> states,
                              std::span<const double> fluxes);

/// Cumulative agropastoral population mass (persons) and technology increments
/// credited to each spreading channel.
struct SourceLedgerEntry {
    double demic = 0.0;
    double cultural = 0.0;
    double local = 0.0;
    double technology_demic = 0.0;
    double technology_cultural = 0.0;
    double technology_local = 0.0;
};

struct SourceShares {
    double demic = 0.0;
    double cultural = 0.0;
    double local = 0.0;
};

/// What happened in one region during one completed step.
struct StepAccount {
    double agro_mass_before = 0.0;  // Q P A
    double agro_mass_after = 0.0;
    double immigrant_farmers = 0.0;      // sum Q_j M_j dt
    double cultural_agro_gain = 0.0;     // dQ from cultural exchange * P A
    double technology_local = 0.0;       // step increments of T by channel
    double technology_cultural = 0.0;
    double technology_demic = 0.0;
};

class SourceLedger {
public:
    explicit SourceLedger(std::size_t regions = 0) : entries_(regions) {}

    /// Splits each region's step gain in Q P A into demic, cultural and local
    /// parts. Local is the residual; a negative residual is clipped to zero
    /// and the other channels are scaled to the net gain.
    void attribute(std::span<const StepAccount> step);

    const SourceLedgerEntry& entry(int region) const { return entries_[static_cast<std::size_t>(region)]; }
    std::size_t size() const { return entries_.size(); }

    /// Shares of the cumulative mass; all zero while nothing was credited.
    SourceShares shares(int region) const;

private:
    std::vector<SourceLedgerEntry> entries_;
};

}  // namespace neolith
