#include "neolith/io.hpp"

#include "neolith/csv.hpp"
#include "neolith/errors.hpp"

#include <cmath>
#include <fmt/format.h>
#include <map>

namespace neolith::io {

namespace {

using Key = std::pair<long long, long long>;

Key position_key(double lon, double lat)
{
    return {std::llround(lon * 1e5), std::llround(lat * 1e5)};
}

std::map<Key, std::size_t> position_index(std::span<const climate::ClimateCell> cells)
{
    std::map<Key, std::size_t> index;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        index.emplace(position_key(cells[i].lon, cells[i].lat), i);
    }
    return index;
}

// Field accessors that report file and line on failure.
struct RowReader {
    const std::filesystem::path& path;
    const csv::Table& table;
    std::size_t row;

    const std::string& raw(std::size_t col) const
    {
        const auto& fields = table.rows[row];
        if (col >= fields.size()) {
            throw InputError(fmt::format("{}:{}: expected {} fields, found {}", path.string(), table.line[row],
                                         table.header.size(), fields.size()));
        }
        return fields[col];
    }

    double number(std::size_t col) const
    {
        const auto v = csv::to_double(raw(col));
        if (!v) {
            throw InputError(fmt::format("{}:{}: '{}' is not a number (column {})", path.string(), table.line[row],
                                         raw(col), table.header[col]));
        }
        return *v;
    }

    std::optional<double> maybe_number(std::size_t col) const
    {
        if (raw(col).empty()) {
            return std::nullopt;
        }
        return number(col);
    }

    int integer(std::size_t col) const
    {
        const auto v = csv::to_long(raw(col));
        if (!v) {
            throw InputError(fmt::format("{}:{}: '{}' is not an integer (column {})", path.string(), table.line[row],
                                         raw(col), table.header[col]));
        }
        return static_cast<int>(*v);
    }
};

}  // namespace

std::vector<climate::ClimateCell> read_climate(const std::filesystem::path& path)
{
    const auto table = csv::read(path);
    const auto src = path.string();
    const auto lon = table.require("lon", src);
    const auto lat = table.require("lat", src);
    const auto t = table.require("t", src);
    const auto p = table.require("p", src);
    std::array<int, 12> monthly{};
    bool has_monthly = true;
    for (int m = 0; m < 12; ++m) {
        monthly[static_cast<std::size_t>(m)] = table.find(fmt::format("t{:02}", m + 1));
        has_monthly = has_monthly && monthly[static_cast<std::size_t>(m)] >= 0;
    }

    std::vector<climate::ClimateCell> cells;
    cells.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const RowReader row{path, table, r};
        climate::ClimateCell cell;
        cell.lon = row.number(lon);
        cell.lat = row.number(lat);
        cell.temperature = row.number(t);
        cell.precipitation = row.number(p);
        if (cell.precipitation < 0.0) {
            throw InputError(fmt::format("{}:{}: negative precipitation", src, table.line[r]));
        }
        if (cell.lat < -90.0 || cell.lat > 90.0) {
            throw InputError(fmt::format("{}:{}: latitude out of range", src, table.line[r]));
        }
        if (has_monthly) {
            std::array<double, 12> months{};
            for (std::size_t m = 0; m < 12; ++m) {
                months[m] = row.number(static_cast<std::size_t>(monthly[m]));
            }
            cell.monthly_temperature = months;
        }
        cells.push_back(cell);
    }
    if (cells.empty()) {
        throw InputError(fmt::format("{}: no climate cells", src));
    }
    return cells;
}

std::vector<climate::AnomalySlice> read_anomalies(const std::filesystem::path& path,
                                                  std::span<const climate::ClimateCell> cells)
{
    const auto table = csv::read(path);
    const auto src = path.string();
    const auto year = table.require("year_bc", src);
    const auto lon = table.require("lon", src);
    const auto lat = table.require("lat", src);
    const auto dt = table.require("dt", src);
    const auto dp = table.require("dp", src);
    const auto index = position_index(cells);

    std::map<double, climate::AnomalySlice> slices;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const RowReader row{path, table, r};
        const double y = row.number(year);
        const auto it = index.find(position_key(row.number(lon), row.number(lat)));
        if (it == index.end()) {
            throw InputError(fmt::format("{}:{}: anomaly at a position with no climate cell", src, table.line[r]));
        }
        auto& slice = slices[y];
        if (slice.temperature.empty()) {
            slice.year_bc = y;
            slice.temperature.assign(cells.size(), 0.0);
            slice.precipitation.assign(cells.size(), 0.0);
        }
        slice.temperature[it->second] = row.number(dt);
        slice.precipitation[it->second] = row.number(dp);
    }
    std::vector<climate::AnomalySlice> out;
    for (auto it = slices.rbegin(); it != slices.rend(); ++it) {
        out.push_back(std::move(it->second));
    }
    return out;
}

std::vector<int> read_continents(const std::filesystem::path& path, std::span<const climate::ClimateCell> cells)
{
    const auto table = csv::read(path);
    const auto src = path.string();
    const auto lon = table.require("lon", src);
    const auto lat = table.require("lat", src);
    const auto label = table.require("continent", src);
    const auto index = position_index(cells);
    std::vector<int> out(cells.size(), 0);
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const RowReader row{path, table, r};
        const auto it = index.find(position_key(row.number(lon), row.number(lat)));
        if (it != index.end()) {
            out[it->second] = row.integer(label);
        }
    }
    return out;
}

void write_regions(std::ostream& out, std::span<const RegionRecord> regions)
{
    csv::Writer w(out);
    w.row("id", "area_km2", "lon", "lat", "continent", "cells");
    for (const auto& r : regions) {
        std::string members;
        for (std::size_t k = 0; k < r.cells.size(); ++k) {
            if (k > 0) {
                members += ' ';
            }
            members += std::to_string(r.cells[k]);
        }
        w.row(r.id, r.area, r.centroid.lon, r.centroid.lat, r.continent, members);
    }
}

std::vector<RegionRecord> read_regions(const std::filesystem::path& path)
{
    const auto table = csv::read(path);
    const auto src = path.string();
    const auto id = table.require("id", src);
    const auto area = table.require("area_km2", src);
    const auto lon = table.require("lon", src);
    const auto lat = table.require("lat", src);
    const int continent = table.find("continent");
    const int cells = table.find("cells");

    std::vector<RegionRecord> out;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const RowReader row{path, table, r};
        RegionRecord rec;
        rec.id = row.integer(id);
        rec.area = row.number(area);
        rec.centroid = {row.number(lon), row.number(lat)};
        if (continent >= 0) {
            rec.continent = row.integer(static_cast<std::size_t>(continent));
        }
        if (cells >= 0) {
            std::string_view list = row.raw(static_cast<std::size_t>(cells));
            while (!list.empty()) {
                const auto space = list.find(' ');
                const auto token = list.substr(0, space);
                if (!token.empty()) {
                    const auto v = csv::to_long(token);
                    if (!v || *v < 0) {
                        throw InputError(fmt::format("{}:{}: bad cell index '{}'", src, table.line[r], token));
                    }
                    rec.cells.push_back(static_cast<int>(*v));
                }
                list = space == std::string_view::npos ? std::string_view{} : list.substr(space + 1);
            }
        }
        if (rec.id != static_cast<int>(out.size())) {
            throw InputError(fmt::format("{}:{}: region ids must be 0..n-1 in order", src, table.line[r]));
        }
        out.push_back(std::move(rec));
    }
    return out;
}

void write_edges(std::ostream& out, std::span<const Edge> edges)
{
    csv::Writer w(out);
    w.row("i", "j", "length_km");
    for (const auto& e : edges) {
        w.row(std::min(e.a, e.b), std::max(e.a, e.b), e.boundary_km);
    }
}

std::vector<Edge> read_edges(const std::filesystem::path& path)
{
    const auto table = csv::read(path);
    const auto src = path.string();
    const auto i = table.require("i", src);
    const auto j = table.require("j", src);
    const auto length = table.require("length_km", src);
    std::vector<Edge> out;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const RowReader row{path, table, r};
        out.push_back({row.integer(i), row.integer(j), row.number(length)});
    }
    return out;
}

void write_cells(std::ostream& out, std::span<const climate::ClimateCell> cells, std::span<const int> cell_region)
{
    csv::Writer w(out);
    w.row("index", "lon", "lat", "t", "p", "gdd", "npp", "tli", "region");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const auto& c = cells[i];
        w.row(i, c.lon, c.lat, c.temperature, c.precipitation, c.gdd, c.npp, c.tli, cell_region[i]);
    }
}

std::vector<CellRecord> read_cells(const std::filesystem::path& path)
{
    const auto table = csv::read(path);
    const auto src = path.string();
    const auto lon = table.require("lon", src);
    const auto lat = table.require("lat", src);
    const auto region = table.require("region", src);
    const int npp = table.find("npp");
    const int tli = table.find("tli");
    std::vector<CellRecord> out;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const RowReader row{path, table, r};
        CellRecord rec;
        rec.cell.lon = row.number(lon);
        rec.cell.lat = row.number(lat);
        if (npp >= 0) {
            rec.cell.npp = row.number(static_cast<std::size_t>(npp));
        }
        if (tli >= 0) {
            rec.cell.tli = row.number(static_cast<std::size_t>(tli));
        }
        rec.region = row.integer(region);
        out.push_back(rec);
    }
    return out;
}

void write_potentials(std::ostream& out, std::span<const climate::RegionPotential> potentials)
{
    csv::Writer w(out);
    w.row("region", "npp", "tli", "fep", "lae", "pae", "continent");
    for (std::size_t r = 0; r < potentials.size(); ++r) {
        const auto& p = potentials[r];
        w.row(r, p.npp, p.tli, p.fep, p.lae, p.pae, p.continent);
    }
}

void write_trajectory(std::ostream& out, std::span<const Snapshot> trajectory)
{
    csv::Writer w(out);
    w.row("region", "year_bc", "P", "T", "Q", "f", "N");
    const std::size_t n = trajectory.empty() ? 0 : trajectory.front().states.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& snap : trajectory) {
            const auto& s = snap.states[i];
            w.row(i, snap.year_bc, s.population, s.technology, s.agro_share, s.economies_fraction,
                  snap.economies[i]);
        }
    }
}

void write_ledger(std::ostream& out, std::span<const Snapshot> trajectory)
{
    csv::Writer w(out);
    w.row("region", "year_bc", "demic", "cultural", "local");
    const std::size_t n = trajectory.empty() ? 0 : trajectory.front().states.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& snap : trajectory) {
            const auto& s = snap.shares[i];
            w.row(i, snap.year_bc, s.demic, s.cultural, s.local);
        }
    }
}

void write_transitions(std::ostream& out, std::span<const TransitionRecord> transitions)
{
    csv::Writer w(out);
    w.row("region", "onset_bc", "t90_bc", "immigrant_fraction");
    for (const auto& t : transitions) {
        w.row(t.region, t.onset_bc, t.completion_bc, t.immigrant_fraction);
    }
}

std::vector<TransitionRecord> read_transitions(const std::filesystem::path& path)
{
    const auto table = csv::read(path);
    const auto src = path.string();
    const auto region = table.require("region", src);
    const auto onset = table.require("onset_bc", src);
    const auto t90 = table.require("t90_bc", src);
    const auto imm = table.require("immigrant_fraction", src);
    std::vector<TransitionRecord> out;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const RowReader row{path, table, r};
        TransitionRecord rec;
        rec.region = row.integer(region);
        rec.onset_bc = row.maybe_number(onset);
        rec.completion_bc = row.maybe_number(t90);
        rec.immigrant_fraction = row.maybe_number(imm);
        out.push_back(rec);
    }
    return out;
}

SiteLoad read_sites(const std::filesystem::path& path, const SiteFilter& filter)
{
    const auto table = csv::read(path);
    const auto src = path.string();
    const auto id = table.require("id", src);
    const auto lon = table.require("lon", src);
    const auto lat = table.require("lat", src);
    const auto age = table.require("median_calBC", src);
    const auto sigma = table.require("sigma", src);
    const int culture = table.find("culture");

    SiteLoad load;
    load.rows = table.rows.size();
    for (const auto& fields : table.rows) {
        if (fields.size() < table.header.size() - (culture >= 0 ? 1 : 0)) {
            ++load.malformed;
            continue;
        }
        analysis::SiteRecord site;
        site.id = fields[id];
        const auto x = csv::to_double(fields[lon]);
        const auto y = csv::to_double(fields[lat]);
        const auto a = csv::to_double(fields[age]);
        const auto s = csv::to_double(fields[sigma]);
        if (!x || !y || !a || !s || *s < 0.0 || *y < -90.0 || *y > 90.0 || *x < -180.0 || *x > 360.0) {
            ++load.malformed;
            continue;
        }
        site.lon = *x;
        site.lat = *y;
        site.median_bc = *a;
        site.sigma = *s;
        if (culture >= 0 && static_cast<std::size_t>(culture) < fields.size()) {
            site.culture = fields[static_cast<std::size_t>(culture)];
        }
        bool keep = site.sigma <= filter.sigma_max;
        if (filter.domain) {
            const auto& d = *filter.domain;
            keep = keep && site.lon >= d[0] && site.lon <= d[1] && site.lat >= d[2] && site.lat <= d[3];
        }
        if (keep) {
            load.sites.push_back(std::move(site));
        } else {
            ++load.excluded;
        }
    }
    if (load.rows > 0 && 10 * load.malformed > load.rows) {
        throw DataQualityError(fmt::format("{}: {} of {} site rows are malformed (limit 10%)", src, load.malformed,
                                           load.rows));
    }
    return load;
}

void write_lagdist(std::ostream& out,
                   std::span<const std::pair<std::string, analysis::LagDistanceResult>> series)
{
    csv::Writer w(out);
    w.row("series", "slope_km_per_a", "intercept_km", "r2", "n", "center_onset_bc", "bin_lower_km", "bin_upper_km",
          "bin_count", "front_lag_a");
    for (const auto& [name, res] : series) {
        for (const auto& bin : res.front) {
            w.row(name, res.fit.slope, res.fit.intercept, res.fit.r2, res.fit.n, res.center_onset_bc, bin.lower_km,
                  bin.upper_km, bin.count, bin.front_lag);
        }
    }
}

void write_histogram(std::ostream& out, const analysis::Histogram& sites, const analysis::TimingDensity& model)
{
    std::map<long long, std::pair<std::size_t, double>> merged;
    const double width = sites.bin_width > 0.0 ? sites.bin_width : model.bin_width;
    for (std::size_t k = 0; k < sites.bin_start.size(); ++k) {
        merged[std::llround(sites.bin_start[k] / width)].first += sites.count[k];
    }
    for (std::size_t k = 0; k < model.bin_start.size(); ++k) {
        merged[std::llround(model.bin_start[k] / width)].second += model.mass[k];
    }
    csv::Writer w(out);
    w.row("bin_start_bc", "sites", "model_mass");
    for (const auto& [b, v] : merged) {
        w.row(static_cast<double>(b) * width, v.first, v.second);
    }
}

void write_immigrants(std::ostream& out, std::span<const analysis::ImmigrantEntry> entries)
{
    csv::Writer w(out);
    w.row("region", "immigrant_fraction", "status");
    for (const auto& e : entries) {
        w.row(e.region, e.fraction, e.fraction ? "complete" : "missing");
    }
}

}  // namespace neolith::io
