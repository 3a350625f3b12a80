#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "neolith/analysis.hpp"
#include "neolith/climate.hpp"
#include "neolith/engine.hpp"
#include "neolith/exchange.hpp"
#include "neolith/geo.hpp"

namespace neolith::io {

/// lon,lat,t,p with optional monthly temperatures t01..t12. Derived fields
/// (gdd, npp, tli) are left at zero.
std::vector<climate::ClimateCell> read_climate(const std::filesystem::path& path);

/// year_bc,lon,lat,dt,dp rows matched to `cells` by position. Cells absent
/// from a slice receive no anomaly; unknown positions are an input error.
std::vector<climate::AnomalySlice> read_anomalies(const std::filesystem::path& path,
                                                  std::span<const climate::ClimateCell> cells);

/// lon,lat,continent rows matched to `cells`; unlabelled cells get 0.
std::vector<int> read_continents(const std::filesystem::path& path, std::span<const climate::ClimateCell> cells);

struct RegionRecord {
    int id = 0;
    double area = 0.0;
    geo::LonLat centroid;
    int continent = 0;
    std::vector<int> cells;
};

void write_regions(std::ostream& out, std::span<const RegionRecord> regions);
std::vector<RegionRecord> read_regions(const std::filesystem::path& path);

void write_edges(std::ostream& out, std::span<const Edge> edges);
std::vector<Edge> read_edges(const std::filesystem::path& path);

struct CellRecord {
    climate::ClimateCell cell;
    int region = 0;
};

void write_cells(std::ostream& out, std::span<const climate::ClimateCell> cells, std::span<const int> cell_region);
std::vector<CellRecord> read_cells(const std::filesystem::path& path);

void write_potentials(std::ostream& out, std::span<const climate::RegionPotential> potentials);

void write_trajectory(std::ostream& out, std::span<const Snapshot> trajectory);
void write_ledger(std::ostream& out, std::span<const Snapshot> trajectory);
void write_transitions(std::ostream& out, std::span<const TransitionRecord> transitions);
std::vector<TransitionRecord> read_transitions(const std::filesystem::path& path);

struct SiteFilter {
    double sigma_max = 200.0;
    // lon_min, lon_max, lat_min, lat_max
    std::optional<std::array<double, 4>> domain;
};

struct SiteLoad {
    std::vector<analysis::SiteRecord> sites;
    std::size_t malformed = 0;
    std::size_t excluded = 0;  // well-formed but outside the filter
    std::size_t rows = 0;
};

/// id,lon,lat,median_calBC,sigma,culture. Malformed rows are skipped and
/// counted; more than 10% malformed raises DataQualityError.
SiteLoad read_sites(const std::filesystem::path& path, const SiteFilter& filter);

void write_lagdist(std::ostream& out,
                   std::span<const std::pair<std::string, analysis::LagDistanceResult>> series);
void write_histogram(std::ostream& out, const analysis::Histogram& sites, const analysis::TimingDensity& model);
void write_immigrants(std::ostream& out, std::span<const analysis::ImmigrantEntry> entries);

}  // namespace neolith::io
