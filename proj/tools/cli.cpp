#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <limits>

#include "neolith/analysis.hpp"
#include "neolith/climate.hpp"
#include "neolith/engine.hpp"
#include "neolith/errors.hpp"
#include "neolith/io.hpp"
#include "neolith/region_mesh.hpp"
#include "neolith/svg.hpp"

namespace neolith::cli {

namespace fs = std::filesystem;

namespace {

template <class Fn>
void write_file(const fs::path& path, Fn&& fn)
{
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InputError(fmt::format("cannot write '{}'", path.string()));
    }
    fn(out);
    if (!out) {
        throw InputError(fmt::format("failed writing '{}'", path.string()));
    }
}

const fs::path& require(const std::optional<fs::path>& p, const char* key)
{
    if (!p) {
        throw InputError(fmt::format("{} is not set", key));
    }
    return *p;
}

// Climate raster with derived productivity, its grid and continent labels.
struct Landscape {
    std::vector<climate::ClimateCell> cells;
    std::vector<climate::AnomalySlice> anomalies;
    std::vector<int> continent;
    mesh::Grid grid;
    std::vector<double> cell_area;
};

Landscape load_landscape(const Config& config)
{
    Landscape land;
    land.cells = io::read_climate(require(config.paths.climate, "paths.climate"));
    climate::derive_productivity(land.cells, config.climate.gdd_proxy, config.params.gdd_saturation);
    if (config.paths.anomalies) {
        land.anomalies = io::read_anomalies(*config.paths.anomalies, land.cells);
    }
    if (config.paths.continents) {
        land.continent = io::read_continents(*config.paths.continents, land.cells);
    }
    std::vector<geo::LonLat> centers;
    std::vector<double> npp;
    std::vector<double> gdd;
    for (const auto& c : land.cells) {
        centers.push_back({c.lon, c.lat});
        npp.push_back(c.npp);
        gdd.push_back(c.gdd);
    }
    land.grid = mesh::Grid::from_cells(centers, npp, gdd);
    for (const auto& c : land.grid.cells()) {
        land.cell_area.push_back(c.area);
    }
    return land;
}

std::vector<std::vector<int>> members_of(std::span<const io::RegionRecord> regions, std::size_t cells)
{
    std::vector<std::vector<int>> members;
    for (const auto& r : regions) {
        for (int c : r.cells) {
            if (static_cast<std::size_t>(c) >= cells) {
                throw InputError(fmt::format("region {} references cell {} beyond the climate raster", r.id, c));
            }
        }
        members.push_back(r.cells);
    }
    return members;
}

std::vector<Environment> environments(std::span<const climate::RegionPotential> potentials)
{
    std::vector<Environment> env;
    for (const auto& p : potentials) {
        env.push_back({p.fep, p.pae, p.tli});
    }
    return env;
}

int nearest_region(std::span<const io::RegionRecord> regions, geo::LonLat at)
{
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& r : regions) {
        const double d = geo::great_circle_km(r.centroid, at);
        if (d < best_d) {
            best_d = d;
            best = r.id;
        }
    }
    return best;
}

std::optional<double> resolution_of(std::span<const io::CellRecord> cells)
{
    if (cells.empty()) {
        return std::nullopt;
    }
    std::vector<geo::LonLat> centers;
    std::vector<double> zeros(cells.size(), 0.0);
    for (const auto& c : cells) {
        centers.push_back({c.cell.lon, c.cell.lat});
    }
    return mesh::Grid::from_cells(centers, zeros, zeros).resolution();
}

}  // namespace

std::string build_regions(const Config& config, std::ostream& log)
{
    const Landscape land = load_landscape(config);
    mesh::MeshOptions options = config.regions;
    if (options.scales) {
        const auto fallback = mesh::default_scales(land.grid);
        if (!(options.scales->npp > 0.0)) options.scales->npp = fallback.npp;
        if (!(options.scales->gdd > 0.0)) options.scales->gdd = fallback.gdd;
    }
    const mesh::Mesh built = mesh::build_regions(land.grid, options);
    if (!built.converged) {
        log << fmt::format("warning: region clustering did not settle within {} iterations\n", built.iterations);
    }

    std::vector<std::vector<int>> members;
    for (const auto& r : built.regions) {
        members.push_back(r.cells);
    }
    const auto potentials = climate::region_potentials(land.cells, land.cell_area, members, land.continent,
                                                       config.params, config.climate.area_max);

    std::vector<io::RegionRecord> records;
    std::vector<Edge> edges;
    double total_area = 0.0;
    for (const auto& r : built.regions) {
        records.push_back({r.id, r.area, r.centroid, potentials[static_cast<std::size_t>(r.id)].continent, r.cells});
        total_area += r.area;
        for (const auto& nb : r.neighbors) {
            if (nb.region > r.id) {
                edges.push_back({r.id, nb.region, nb.boundary_km});
            }
        }
    }

    const auto& dir = config.paths.output;
    write_file(dir / "regions.csv", [&](std::ostream& out) { io::write_regions(out, records); });
    write_file(dir / "edges.csv", [&](std::ostream& out) { io::write_edges(out, edges); });
    write_file(dir / "cells.csv", [&](std::ostream& out) { io::write_cells(out, land.cells, built.cell_region); });
    write_file(dir / "potentials.csv", [&](std::ostream& out) { io::write_potentials(out, potentials); });
    log << fmt::format("clustered {} cells into {} regions after {} sweeps\n", land.cells.size(),
                       built.regions.size(), built.iterations);

    return fmt::format("regions {} mean_area_km2 {:.1f}", built.regions.size(),
                       total_area / static_cast<double>(built.regions.size()));
}

std::string run(const Config& config, std::ostream& log)
{
    const auto& dir = config.paths.output;
    const auto regions = io::read_regions(dir / "regions.csv");
    const auto edges = io::read_edges(dir / "edges.csv");
    if (regions.empty()) {
        throw InputError("regions.csv lists no regions");
    }
    const Landscape land = load_landscape(config);
    const auto members = members_of(regions, land.cells.size());

    std::vector<double> areas;
    for (const auto& r : regions) {
        areas.push_back(r.area);
    }
    const RegionGraph graph(areas, edges);

    auto potentials_at = [&](const std::vector<climate::ClimateCell>& cells) {
        return climate::region_potentials(cells, land.cell_area, members, land.continent, config.params,
                                          config.climate.area_max);
    };

    const Scenario& scenario = config.scenario;
    EnvironmentSchedule schedule;
    if (land.anomalies.empty()) {
        schedule = EnvironmentSchedule::constant(environments(potentials_at(land.cells)));
    } else {
        const climate::ClimateSeries series(land.cells, land.anomalies, config.climate.gdd_proxy,
                                            config.params.gdd_saturation);
        if (!(config.climate.update_interval > 0.0)) {
            throw InputError("climate.update_interval must be positive");
        }
        for (double year = scenario.start_bc; year > scenario.end_bc; year -= config.climate.update_interval) {
            schedule.add(year, environments(potentials_at(series.at(year))));
        }
        log << fmt::format("climate potentials updated every {} a\n", config.climate.update_interval);
    }

    const RunResult result = neolith::run(scenario, graph, schedule, config.params);

    write_file(dir / "trajectory.csv", [&](std::ostream& out) { io::write_trajectory(out, result.trajectory); });
    write_file(dir / "transitions.csv", [&](std::ostream& out) { io::write_transitions(out, result.transitions); });
    write_file(dir / "ledger.csv", [&](std::ostream& out) { io::write_ledger(out, result.trajectory); });

    std::size_t neolithic = 0;
    double onset_sum = 0.0;
    std::size_t onsets = 0;
    for (std::size_t i = 0; i < result.final_states.size(); ++i) {
        neolithic += is_neolithic(result.final_states[i]) ? 1 : 0;
        if (const auto& t = result.transitions[i].onset_bc) {
            onset_sum += *t;
            ++onsets;
        }
    }
    log << fmt::format("{} steps of {} a in {} mode\n", result.steps, scenario.dt, to_string(scenario.mode));
    const std::string mean_onset = onsets > 0 ? fmt::format("{:.1f}", onset_sum / static_cast<double>(onsets)) : "none";
    return fmt::format("mode {} neolithic {}/{} at {} BC mean_onset_bc {}", to_string(scenario.mode), neolithic,
                       regions.size(), scenario.end_bc, mean_onset);
}

std::string analyze(const Config& config, std::ostream& log)
{
    const auto& dir = config.paths.output;
    const auto& a = config.analysis;
    const auto regions = io::read_regions(dir / "regions.csv");
    const auto transitions = io::read_transitions(dir / "transitions.csv");
    if (transitions.size() != regions.size()) {
        throw InputError("transitions.csv and regions.csv describe different region counts");
    }
    std::vector<io::CellRecord> cells;
    if (fs::exists(dir / "cells.csv")) {
        cells = io::read_cells(dir / "cells.csv");
    }

    std::vector<analysis::SiteRecord> sites;
    if (config.paths.sites) {
        io::SiteFilter filter;
        filter.sigma_max = a.sigma_max;
        filter.domain = a.domain;
        auto load = io::read_sites(*config.paths.sites, filter);
        if (load.malformed > 0) {
            log << fmt::format("warning: skipped {} malformed site rows of {}\n", load.malformed, load.rows);
        }
        if (load.excluded > 0) {
            log << fmt::format("{} sites outside the dating or domain filter\n", load.excluded);
        }
        sites = std::move(load.sites);
    }

    std::vector<std::pair<std::string, analysis::LagDistanceResult>> series;
    analysis::LagOptions lag_options{a.distance_bin_km, a.front_quantile};

    const int center = a.center_region.value_or(nearest_region(regions, a.center));
    if (center < 0 || static_cast<std::size_t>(center) >= regions.size()) {
        throw InputError(fmt::format("analysis.center_region {} does not exist", center));
    }
    std::optional<double> model_center = transitions[static_cast<std::size_t>(center)].onset_bc;
    if (!model_center) {
        for (const auto& t : transitions) {
            if (t.onset_bc && (!model_center || *t.onset_bc > *model_center)) {
                model_center = t.onset_bc;
            }
        }
        if (model_center) {
            log << fmt::format("centre region {} never turned Neolithic; anchoring at the earliest onset\n", center);
        }
    }
    std::vector<analysis::LagPoint> model_points;
    for (const auto& t : transitions) {
        if (t.onset_bc) {
            const auto& r = regions[static_cast<std::size_t>(t.region)];
            model_points.push_back({geo::great_circle_km(a.center, r.centroid), *t.onset_bc});
        }
    }
    std::string summary;
    try {
        if (model_center) {
            series.emplace_back("model", analysis::lag_distance(model_points, *model_center, lag_options));
            const auto& f = series.back().second.fit;
            summary = fmt::format("model slope {:.4g} km/a r2 {:.3f} n {}", f.slope, f.r2, f.n);
        }
    } catch (const DegenerateFitError& e) {
        log << fmt::format("model lag-distance skipped: {}\n", e.what());
    }
    if (summary.empty()) {
        summary = "model slope n/a";
    }

    if (!sites.empty()) {
        const auto data_center = analysis::oldest_site_bc(sites, a.center, a.center_radius_km);
        if (!data_center) {
            log << fmt::format("no site within {} km of the centre; data lag-distance skipped\n",
                               a.center_radius_km);
        } else {
            std::vector<analysis::LagPoint> points;
            for (const auto& s : sites) {
                points.push_back({geo::great_circle_km(a.center, {s.lon, s.lat}), s.median_bc});
            }
            try {
                series.emplace_back("data", analysis::lag_distance(points, *data_center, lag_options));
                const auto& f = series.back().second.fit;
                summary += fmt::format("; data slope {:.4g} km/a r2 {:.3f} n {}", f.slope, f.r2, f.n);
            } catch (const DegenerateFitError& e) {
                log << fmt::format("data lag-distance skipped: {}\n", e.what());
            }
        }
    }
    write_file(dir / "lagdist.csv", [&](std::ostream& out) { io::write_lagdist(out, series); });

    const auto resolution = resolution_of(cells);
    for (int id : a.focus_regions) {
        if (id < 0 || static_cast<std::size_t>(id) >= regions.size()) {
            throw InputError(fmt::format("focus region {} does not exist", id));
        }
        const auto& region = regions[static_cast<std::size_t>(id)];
        auto inside = [&](geo::LonLat p) {
            if (!resolution) {
                return false;
            }
            const double half = 0.5 * *resolution;
            return std::any_of(cells.begin(), cells.end(), [&](const io::CellRecord& c) {
                return c.region == id && std::abs(p.lon - c.cell.lon) <= half && std::abs(p.lat - c.cell.lat) <= half;
            });
        };
        const auto hist = analysis::focus_histogram(sites, region.centroid, a.focus_radius_km, a.bin_width, inside);
        analysis::TimingDensity model;
        model.bin_width = a.bin_width;
        if (const auto& onset = transitions[static_cast<std::size_t>(id)].onset_bc) {
            const double sigma = analysis::broadening_sigma(region.area, a.broadening_beta, a.reference_speed);
            model = analysis::broaden_timing(*onset, sigma, a.bin_width);
        }
        write_file(dir / fmt::format("histogram_region{}.csv", id),
                   [&](std::ostream& out) { io::write_histogram(out, hist, model); });
    }

    const auto immigrants = analysis::immigrant_map(transitions);
    write_file(dir / "immigrants.csv", [&](std::ostream& out) { io::write_immigrants(out, immigrants); });

    if (resolution) {
        std::vector<svg::MapCell> map_cells;
        for (const auto& c : cells) {
            map_cells.push_back({{c.cell.lon, c.cell.lat}, c.region});
        }
        std::vector<std::optional<double>> onset(regions.size());
        std::vector<std::optional<double>> fraction(regions.size());
        double oldest = -std::numeric_limits<double>::infinity();
        double youngest = std::numeric_limits<double>::infinity();
        for (const auto& t : transitions) {
            onset[static_cast<std::size_t>(t.region)] = t.onset_bc;
            if (t.onset_bc) {
                oldest = std::max(oldest, *t.onset_bc);
                youngest = std::min(youngest, *t.onset_bc);
            }
        }
        for (const auto& e : immigrants) {
            fraction[static_cast<std::size_t>(e.region)] = e.fraction;
        }
        svg::ChoroplethStyle timing{"Onset of agropastoralism (sim BC)", youngest, oldest};
        if (!(oldest > youngest)) {
            timing.low = std::isfinite(youngest) ? youngest - 1.0 : 0.0;
            timing.high = std::isfinite(oldest) ? oldest + 1.0 : 1.0;
        }
        write_file(dir / "onset.svg",
                   [&](std::ostream& out) { svg::choropleth(out, map_cells, *resolution, onset, timing); });
        write_file(dir / "immigrants.svg", [&](std::ostream& out) {
            svg::choropleth(out, map_cells, *resolution, fraction, {"Immigrant share at 90% completion", 0.0, 1.0});
        });
    } else {
        log << "cells.csv not found; maps skipped\n";
    }
    return summary;
}

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Regional simulator of the spread of agropastoralism"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "neolith 0.1.0");

    struct Common {
        std::string config;
        std::string mode;
        int threads = 0;
        std::vector<std::string> overrides;
    };
    Common common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", common.config, "flat section.key = value file")->check(CLI::ExistingFile);
        sub->add_option("--mode", common.mode, "mixed, demic-only, cultural-only or no-exchange");
        sub->add_option("--threads", common.threads, "worker threads for rate evaluation")->check(CLI::PositiveNumber);
        sub->add_option("overrides", common.overrides, "section.key=value assignments");
    };
    auto* build = app.add_subcommand("build-regions", "cluster the climate raster into regions");
    auto* run_cmd = app.add_subcommand("run", "integrate a scenario over the region graph");
    auto* analyze_cmd = app.add_subcommand("analyze", "lag-distance, histograms, immigrant maps");
    auto* pipeline = app.add_subcommand("pipeline", "build-regions, run and analyze in sequence");
    for (auto* sub : {build, run_cmd, analyze_cmd, pipeline}) {
        add_common(sub);
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForVersion& e) {
        out << e.what() << '\n';
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }

    try {
        Config config = common.config.empty() ? Config{} : load_config(common.config);
        for (const auto& assignment : common.overrides) {
            const auto eq = assignment.find('=');
            if (eq == std::string::npos) {
                throw InputError(fmt::format("override '{}' is not key=value", assignment));
            }
            set_option(config, assignment.substr(0, eq), assignment.substr(eq + 1));
        }
        if (!common.mode.empty()) {
            config.scenario.mode = parse_mode(common.mode);
        }
        if (common.threads > 0) {
            config.scenario.threads = common.threads;
        }
        config.params.validate();
        config.scenario.validate();
        check_input_paths(config);

        std::string summary;
        if (build->parsed()) {
            summary = build_regions(config, err);
        } else if (run_cmd->parsed()) {
            summary = run(config, err);
        } else if (analyze_cmd->parsed()) {
            summary = analyze(config, err);
        } else {
            summary = build_regions(config, err);
            summary += "; " + run(config, err);
            summary += "; " + analyze(config, err);
        }
        out << summary << '\n';
        return kSuccess;
    } catch (const InputError& e) {
        err << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const NumericalError& e) {
        err << "numerical abort in region " << e.region() << ": " << e.what() << '\n';
        return kNumericalAbort;
    } catch (const DataQualityError& e) {
        err << "data quality: " << e.what() << '\n';
        return kDataQuality;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kUnexpected;
    }
}

}  // namespace neolith::cli
