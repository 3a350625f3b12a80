#include "fixtures.hpp"

#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <random>
#include <set>

#include "neolith/csv.hpp"
#include "neolith/errors.hpp"
#include "neolith/geo.hpp"
#include "neolith/io.hpp"

namespace neolith::fixtures {

namespace {

climate::ClimateCell make_cell(double lon, double lat, double t, double p)
{
    climate::ClimateCell c;
    c.lon = lon;
    c.lat = lat;
    c.temperature = t;
    c.precipitation = p;
    return c;
}

std::ofstream open(const std::filesystem::path& path)
{
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InputError(fmt::format("cannot write '{}'", path.string()));
    }
    return out;
}

}  // namespace

std::vector<climate::ClimateCell> two_band(int rows, int cols, double resolution, double lon0, double lat0)
{
    std::vector<climate::ClimateCell> cells;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const double p = c < cols / 2 ? 0.3 : 1.2;
            cells.push_back(make_cell(lon0 + c * resolution, lat0 + r * resolution, 15.0, p));
        }
    }
    return cells;
}

std::vector<climate::ClimateCell> homogeneous(int rows, int cols, double resolution, double lon0, double lat0)
{
    std::vector<climate::ClimateCell> cells;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            cells.push_back(make_cell(lon0 + c * resolution, lat0 + r * resolution, 15.0, 0.8));
        }
    }
    return cells;
}

std::vector<climate::ClimateCell> mediterranean(int cols)
{
    // Six-degree bands from south to north: desert, warm woodland, temperate,
    // cool, and a north without growing season.
    struct Band {
        double t;
        double p;
    };
    constexpr Band bands[] = {{22.0, 0.0}, {16.0, 0.75}, {9.0, 0.6}, {3.0, 0.5}, {-3.0, 0.4}};
    std::vector<climate::ClimateCell> cells;
    for (int r = 0; r < 30; ++r) {
        const auto& band = bands[r / 6];
        for (int c = 0; c < cols; ++c) {
            cells.push_back(make_cell(0.5 + c, 30.5 + r, band.t, band.p));
        }
    }
    return cells;
}

Corridor corridor(int regions, double spacing_km, Environment env)
{
    Corridor c;
    c.spacing_km = spacing_km;
    c.areas.assign(static_cast<std::size_t>(regions), spacing_km * spacing_km);
    c.env.assign(static_cast<std::size_t>(regions), env);
    for (int i = 0; i + 1 < regions; ++i) {
        c.edges.push_back({i, i + 1, spacing_km});
    }
    return c;
}

Scenario corridor_scenario(ExchangeMode mode)
{
    Scenario s;
    s.mode = mode;
    s.initial_population = 1.0;
    s.seed = Seed{0, std::nullopt, 4.0, 0.9, 1.0};
    return s;
}

RandomGraph random_graph(int regions, int extra_links, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> area(5e3, 5e4);
    std::uniform_real_distribution<double> length(20.0, 200.0);
    std::uniform_int_distribution<int> pick(0, regions - 1);
    RandomGraph g;
    std::set<std::pair<int, int>> used;
    for (int i = 0; i < regions; ++i) {
        g.areas.push_back(area(rng));
    }
    for (int i = 0; i + 1 < regions; ++i) {
        g.edges.push_back({i, i + 1, length(rng)});
        used.insert({i, i + 1});
    }
    int added = 0;
    for (int attempt = 0; added < extra_links && attempt < 100 * (extra_links + 1); ++attempt) {
        const int a = pick(rng);
        const int b = pick(rng);
        if (a == b || !used.insert(std::minmax(a, b)).second) {
            continue;
        }
        g.edges.push_back({a, b, length(rng)});
        ++added;
    }
    return g;
}

geo::LonLat destination(geo::LonLat from, double bearing_deg, double distance_km)
{
    const double delta = distance_km / geo::kEarthRadiusKm;
    const double theta = geo::radians(bearing_deg);
    const double phi1 = geo::radians(from.lat);
    const double lambda1 = geo::radians(from.lon);
    const double phi2 = std::asin(std::sin(phi1) * std::cos(delta) + std::cos(phi1) * std::sin(delta) * std::cos(theta));
    const double lambda2 = lambda1 + std::atan2(std::sin(theta) * std::sin(delta) * std::cos(phi1),
                                                std::cos(delta) - std::sin(phi1) * std::sin(phi2));
    return {lambda2 * 180.0 / geo::kPi, phi2 * 180.0 / geo::kPi};
}

std::vector<analysis::SiteRecord> linear_sites(int count, double slope_km_per_a, double noise_sigma_a,
                                               std::uint64_t seed, geo::LonLat center, double center_age_bc,
                                               double max_distance_km)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> bearing(240.0, 330.0);
    std::uniform_real_distribution<double> distance(0.0, max_distance_km);
    std::normal_distribution<double> noise(0.0, noise_sigma_a > 0.0 ? noise_sigma_a : 1.0);
    std::vector<analysis::SiteRecord> sites;
    for (int k = 0; k < count; ++k) {
        // The first site sits on the centre so the data anchor is defined.
        const double d = k == 0 ? 0.0 : distance(rng);
        const double b = bearing(rng);
        const double jitter = noise_sigma_a > 0.0 ? noise(rng) : 0.0;
        analysis::SiteRecord s;
        s.id = fmt::format("S{:04}", k);
        const auto at = destination(center, b, d);
        s.lon = at.lon;
        s.lat = at.lat;
        s.median_bc = center_age_bc - d / slope_km_per_a + jitter;
        s.sigma = 80.0;
        s.culture = d < 500.0 ? "PPN" : "LBK";
        sites.push_back(std::move(s));
    }
    return sites;
}

void write_climate(const std::filesystem::path& path, const std::vector<climate::ClimateCell>& cells)
{
    auto out = open(path);
    csv::Writer w(out);
    w.row("lon", "lat", "t", "p");
    for (const auto& c : cells) {
        w.row(c.lon, c.lat, c.temperature, c.precipitation);
    }
}

void write_sites(const std::filesystem::path& path, const std::vector<analysis::SiteRecord>& sites)
{
    auto out = open(path);
    csv::Writer w(out);
    w.row("id", "lon", "lat", "median_calBC", "sigma", "culture");
    for (const auto& s : sites) {
        w.row(s.id, s.lon, s.lat, s.median_bc, s.sigma, s.culture);
    }
}

void write_corridor_case(const std::filesystem::path& dir, int regions)
{
    std::vector<climate::ClimateCell> cells;
    for (int k = 0; k < regions; ++k) {
        cells.push_back(make_cell(0.5 + k, 0.0, 25.0, 0.436));
    }
    write_climate(dir / "climate.csv", cells);
    climate::derive_productivity(cells, climate::GddProxy{}, Parameters{}.gdd_saturation);

    std::vector<io::RegionRecord> records;
    std::vector<Edge> edges;
    std::vector<int> cell_region;
    const double area = geo::cell_area_km2(0.0, 1.0);
    for (int k = 0; k < regions; ++k) {
        records.push_back({k, area, {cells[static_cast<std::size_t>(k)].lon, 0.0}, 0, {k}});
        cell_region.push_back(k);
        if (k + 1 < regions) {
            edges.push_back({k, k + 1, geo::meridional_edge_km(1.0)});
        }
    }
    {
        auto out = open(dir / "regions.csv");
        io::write_regions(out, records);
    }
    {
        auto out = open(dir / "edges.csv");
        io::write_edges(out, edges);
    }
    {
        auto out = open(dir / "cells.csv");
        io::write_cells(out, cells, cell_region);
    }
    auto out = open(dir / "corridor.conf");
    out << "# One region per 1-degree cell along the equator, farming seeded in the west.\n"
           "paths.climate = climate.csv\n"
           "paths.output = .\n"
           "params.cae_max = 2.4\n"
           "scenario.p0 = 1.0\n"
           "scenario.seed_region = 0\n"
           "scenario.seed_t = 4\n"
           "scenario.seed_q = 0.9\n"
           "scenario.seed_f = 1\n"
           "analysis.center_lon = 0.5\n"
           "analysis.center_lat = 0\n"
           "analysis.center_region = 0\n";
}

}  // namespace neolith::fixtures
