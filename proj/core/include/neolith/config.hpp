#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "neolith/climate.hpp"
#include "neolith/engine.hpp"
#include "neolith/parameters.hpp"
#include "neolith/region_mesh.hpp"

namespace neolith {

struct PathConfig {
    std::optional<std::filesystem::path> climate;
    std::optional<std::filesystem::path> anomalies;
    std::optional<std::filesystem::path> continents;
    std::optional<std::filesystem::path> sites;
    std::filesystem::path output = "out";
};

struct ClimateConfig {
    climate::GddProxy gdd_proxy;
    std::optional<double> area_max;   // km^2, continental normalisation
    double update_interval = 100.0;   // years between potential updates
};

struct AnalysisConfig {
    geo::LonLat center{35.5, 33.9};
    double center_radius_km = 200.0;
    std::optional<int> center_region;  // default: region nearest the centre
    double bin_width = 100.0;          // years
    double distance_bin_km = 500.0;
    double front_quantile = 0.05;
    std::vector<int> focus_regions;
    double focus_radius_km = 200.0;
    double broadening_beta = 0.5;
    double reference_speed = 1.0;      // km/a
    double sigma_max = 200.0;
    std::optional<std::array<double, 4>> domain;  // lon_min lon_max lat_min lat_max
};

struct Config {
    PathConfig paths;
    Parameters params;
    Scenario scenario;
    mesh::MeshOptions regions;
    ClimateConfig climate;
    AnalysisConfig analysis;
};

/// Applies one `section.key = value` assignment. Relative paths are resolved
/// against `base`. Throws InputError on unknown keys or unparsable values.
void set_option(Config& config, std::string_view key, std::string_view value,
                const std::filesystem::path& base = {});

/// Parses flat `section.key = value` text; '#' starts a comment.
void apply_config_text(Config& config, std::string_view text, const std::filesystem::path& base = {});

/// Reads a config file on top of the defaults; paths resolve relative to the
/// file's directory.
Config load_config(const std::filesystem::path& path);

/// Throws InputError when a referenced input file does not exist.
void check_input_paths(const Config& config);

/// Every accepted key, for diagnostics.
std::vector<std::string> config_keys();

}  // namespace neolith
