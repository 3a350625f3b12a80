#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "neolith/analysis.hpp"
#include "neolith/climate.hpp"
#include "neolith/engine.hpp"
#include "neolith/exchange.hpp"

// Synthetic landscapes and site sets for tests, benchmarks and demos.
namespace neolith::fixtures {

/// rows x cols raster, south-west cell centre at (lon0, lat0). The western
/// half is dry, the eastern half wet, so NPP steps at the middle column.
std::vector<climate::ClimateCell> two_band(int rows = 20, int cols = 20, double resolution = 0.5,
                                           double lon0 = 10.25, double lat0 = 40.25);

/// Identical climate in every cell.
std::vector<climate::ClimateCell> homogeneous(int rows = 20, int cols = 20, double resolution = 0.5,
                                              double lon0 = 10.25, double lat0 = 40.25);

/// 1-degree raster from 30.5N to 59.5N in five climate bands: a desert with
/// zero NPP, three bands of falling warmth, and a north with no growing season.
std::vector<climate::ClimateCell> mediterranean(int cols = 12);

/// Homogeneous chain of equal square regions.
struct Corridor {
    std::vector<double> areas;
    std::vector<Edge> edges;
    std::vector<Environment> env;
    double spacing_km = 0.0;

    RegionGraph graph() const { return RegionGraph(areas, edges); }
    double distance_km(int region) const { return spacing_km * region; }
};

Corridor corridor(int regions = 40, double spacing_km = 100.0, Environment env = {0.6, 2.0, 1.0});

/// Scenario used with the corridor: dense foragers everywhere and an
/// established farming population in region 0.
Scenario corridor_scenario(ExchangeMode mode);

/// Random connected graph: a spanning chain plus extra links.
struct RandomGraph {
    std::vector<double> areas;
    std::vector<Edge> edges;
};
RandomGraph random_graph(int regions, int extra_links, std::uint64_t seed);

/// Sites on random bearings from `center` whose age falls by 1/slope years
/// per km, plus Gaussian age noise.
std::vector<analysis::SiteRecord> linear_sites(int count, double slope_km_per_a, double noise_sigma_a,
                                               std::uint64_t seed, geo::LonLat center = {35.5, 33.9},
                                               double center_age_bc = 8500.0, double max_distance_km = 5000.0);

/// Point at `distance_km` along the initial `bearing_deg` from `from`.
geo::LonLat destination(geo::LonLat from, double bearing_deg, double distance_km);

void write_climate(const std::filesystem::path& path, const std::vector<climate::ClimateCell>& cells);
void write_sites(const std::filesystem::path& path, const std::vector<analysis::SiteRecord>& sites);

/// A one-row raster with one region per cell, written as climate.csv,
/// regions.csv, edges.csv, cells.csv and a config seeding the western end.
void write_corridor_case(const std::filesystem::path& dir, int regions = 40);

}  // namespace neolith::fixtures
