#include "neolith/config.hpp"

#include "neolith/csv.hpp"
#include "neolith/errors.hpp"

#include <fmt/format.h>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace neolith {

namespace {

using Setter = std::function<void(Config&, std::string_view, const std::filesystem::path&)>;

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

double number(std::string_view value)
{
    const auto v = csv::to_double(value);
    if (!v) {
        throw InputError(fmt::format("'{}' is not a number", value));
    }
    return *v;
}

int integer(std::string_view value)
{
    const auto v = csv::to_long(value);
    if (!v) {
        throw InputError(fmt::format("'{}' is not an integer", value));
    }
    return static_cast<int>(*v);
}

bool boolean(std::string_view value)
{
    if (value == "true" || value == "on" || value == "yes" || value == "1") return true;
    if (value == "false" || value == "off" || value == "no" || value == "0") return false;
    throw InputError(fmt::format("'{}' is not a boolean", value));
}

std::vector<double> numbers(std::string_view value)
{
    std::vector<double> out;
    std::string text(value);
    for (char& c : text) {
        if (c == ',') {
            c = ' ';
        }
    }
    std::istringstream in(text);
    std::string token;
    while (in >> token) {
        out.push_back(number(token));
    }
    return out;
}

std::filesystem::path resolve(std::string_view value, const std::filesystem::path& base)
{
    std::filesystem::path p{std::string(value)};
    if (p.is_relative() && !base.empty()) {
        p = base / p;
    }
    return p;
}

template <class T>
Setter num(T Config::*section, double T::*field)
{
    return [=](Config& c, std::string_view v, const std::filesystem::path&) { (c.*section).*field = number(v); };
}

const std::map<std::string, Setter, std::less<>>& setters()
{
    static const std::map<std::string, Setter, std::less<>> table = [] {
        std::map<std::string, Setter, std::less<>> t;
        auto path = [](std::optional<std::filesystem::path> PathConfig::*field) -> Setter {
            return [=](Config& c, std::string_view v, const std::filesystem::path& base) {
                c.paths.*field = resolve(v, base);
            };
        };
        t["paths.climate"] = path(&PathConfig::climate);
        t["paths.anomalies"] = path(&PathConfig::anomalies);
        t["paths.continents"] = path(&PathConfig::continents);
        t["paths.sites"] = path(&PathConfig::sites);
        t["paths.output"] = [](Config& c, std::string_view v, const std::filesystem::path& base) {
            c.paths.output = resolve(v, base);
        };

        t["params.mu"] = num(&Config::params, &Parameters::growth_coefficient);
        t["params.rho"] = num(&Config::params, &Parameters::loss_coefficient);
        t["params.gamma"] = num(&Config::params, &Parameters::impact_coefficient);
        t["params.omega"] = num(&Config::params, &Parameters::overhead_coefficient);
        t["params.t_lit"] = num(&Config::params, &Parameters::loss_mitigation_scale);
        t["params.delta_t"] = [](Config& c, std::string_view v, auto&) { c.params.flexibility.technology = number(v); };
        t["params.delta_q"] = [](Config& c, std::string_view v, auto&) { c.params.flexibility.agro_share = number(v); };
        t["params.delta_f"] = [](Config& c, std::string_view v, auto&) { c.params.flexibility.economies = number(v); };
        t["params.sigma_p"] = num(&Config::params, &Parameters::exchange_people);
        t["params.sigma_t"] = num(&Config::params, &Parameters::exchange_info);
        t["params.exchange_q"] = [](Config& c, std::string_view v, auto&) { c.params.exchange_agro_share = boolean(v); };
        t["params.npp_f"] = num(&Config::params, &Parameters::npp_food_peak);
        t["params.npp_n"] = num(&Config::params, &Parameters::npp_domestication_peak);
        t["params.cae_max"] = num(&Config::params, &Parameters::continental_economies_max);
        t["params.gdd_ref"] = num(&Config::params, &Parameters::gdd_saturation);
        t["params.t_min"] = num(&Config::params, &Parameters::technology_floor);

        t["scenario.mode"] = [](Config& c, std::string_view v, auto&) { c.scenario.mode = parse_mode(v); };
        t["scenario.start_bc"] = num(&Config::scenario, &Scenario::start_bc);
        t["scenario.end_bc"] = num(&Config::scenario, &Scenario::end_bc);
        t["scenario.dt"] = num(&Config::scenario, &Scenario::dt);
        t["scenario.output_interval"] = num(&Config::scenario, &Scenario::output_interval);
        t["scenario.p0"] = num(&Config::scenario, &Scenario::initial_population);
        t["scenario.t0"] = num(&Config::scenario, &Scenario::initial_technology);
        t["scenario.q0"] = num(&Config::scenario, &Scenario::initial_agro_share);
        t["scenario.n0"] = num(&Config::scenario, &Scenario::initial_economies);
        auto seed = [](Config& c) -> Seed& {
            if (!c.scenario.seed) {
                c.scenario.seed = Seed{};
            }
            return *c.scenario.seed;
        };
        t["scenario.seed_region"] = [=](Config& c, std::string_view v, auto&) { seed(c).region = integer(v); };
        t["scenario.seed_p"] = [=](Config& c, std::string_view v, auto&) { seed(c).population = number(v); };
        t["scenario.seed_t"] = [=](Config& c, std::string_view v, auto&) { seed(c).technology = number(v); };
        t["scenario.seed_q"] = [=](Config& c, std::string_view v, auto&) { seed(c).agro_share = number(v); };
        t["scenario.seed_f"] = [=](Config& c, std::string_view v, auto&) { seed(c).economies_fraction = number(v); };
        t["scenario.completion"] = [](Config& c, std::string_view v, auto&) {
            if (v == "relative") {
                c.scenario.completion = CompletionRule::RelativeToFinal;
            } else if (v == "absolute") {
                c.scenario.completion = CompletionRule::Absolute;
            } else {
                throw InputError(fmt::format("'{}' is not a completion rule (relative, absolute)", v));
            }
        };
        t["scenario.completion_level"] = num(&Config::scenario, &Scenario::completion_level);
        t["scenario.guard_steps"] = [](Config& c, std::string_view v, auto&) { c.scenario.guard_steps = integer(v); };
        t["scenario.guard_fraction"] = num(&Config::scenario, &Scenario::guard_fraction);

        t["regions.target_area"] = num(&Config::regions, &mesh::MeshOptions::target_area);
        t["regions.max_iterations"] = [](Config& c, std::string_view v, auto&) {
            c.regions.max_iterations = integer(v);
        };
        t["regions.connectivity"] = [](Config& c, std::string_view v, auto&) {
            const int k = integer(v);
            if (k != 4 && k != 8) {
                throw InputError("connectivity must be 4 or 8");
            }
            c.regions.connectivity = k == 4 ? mesh::Connectivity::Four : mesh::Connectivity::Eight;
        };
        t["regions.npp_scale"] = [](Config& c, std::string_view v, auto&) {
            auto s = c.regions.scales.value_or(mesh::Scales{0.0, 0.0});
            s.npp = number(v);
            c.regions.scales = s;
        };
        t["regions.gdd_scale"] = [](Config& c, std::string_view v, auto&) {
            auto s = c.regions.scales.value_or(mesh::Scales{0.0, 0.0});
            s.gdd = number(v);
            c.regions.scales = s;
        };

        t["climate.gdd_slope"] = [](Config& c, std::string_view v, auto&) { c.climate.gdd_proxy.slope_days = number(v); };
        t["climate.gdd_base"] = [](Config& c, std::string_view v, auto&) { c.climate.gdd_proxy.base_c = number(v); };
        t["climate.area_max"] = [](Config& c, std::string_view v, auto&) { c.climate.area_max = number(v); };
        t["climate.update_interval"] = num(&Config::climate, &ClimateConfig::update_interval);

        t["analysis.center_lon"] = [](Config& c, std::string_view v, auto&) { c.analysis.center.lon = number(v); };
        t["analysis.center_lat"] = [](Config& c, std::string_view v, auto&) { c.analysis.center.lat = number(v); };
        t["analysis.center_radius"] = num(&Config::analysis, &AnalysisConfig::center_radius_km);
        t["analysis.center_region"] = [](Config& c, std::string_view v, auto&) {
            c.analysis.center_region = integer(v);
        };
        t["analysis.bin_width"] = num(&Config::analysis, &AnalysisConfig::bin_width);
        t["analysis.distance_bin"] = num(&Config::analysis, &AnalysisConfig::distance_bin_km);
        t["analysis.front_quantile"] = num(&Config::analysis, &AnalysisConfig::front_quantile);
        t["analysis.focus_regions"] = [](Config& c, std::string_view v, auto&) {
            c.analysis.focus_regions.clear();
            for (double x : numbers(v)) {
                c.analysis.focus_regions.push_back(static_cast<int>(x));
            }
        };
        t["analysis.focus_radius"] = num(&Config::analysis, &AnalysisConfig::focus_radius_km);
        t["analysis.beta"] = num(&Config::analysis, &AnalysisConfig::broadening_beta);
        t["analysis.v_ref"] = num(&Config::analysis, &AnalysisConfig::reference_speed);
        t["analysis.sigma_max"] = num(&Config::analysis, &AnalysisConfig::sigma_max);
        t["analysis.domain"] = [](Config& c, std::string_view v, auto&) {
            const auto box = numbers(v);
            if (box.size() != 4) {
                throw InputError("domain needs four numbers: lon_min lon_max lat_min lat_max");
            }
            c.analysis.domain = std::array<double, 4>{box[0], box[1], box[2], box[3]};
        };

        t["run.threads"] = [](Config& c, std::string_view v, auto&) {
            c.scenario.threads = integer(v);
            if (c.scenario.threads < 1) {
                throw InputError("threads must be at least 1");
            }
        };
        return t;
    }();
    return table;
}

}  // namespace

void set_option(Config& config, std::string_view key, std::string_view value, const std::filesystem::path& base)
{
    key = trim(key);
    value = trim(value);
    const auto& table = setters();
    const auto it = table.find(key);
    if (it == table.end()) {
        throw InputError(fmt::format("unknown config key '{}'", key));
    }
    try {
        it->second(config, value, base);
    } catch (const InputError& e) {
        throw InputError(fmt::format("{}: {}", key, e.what()));
    }
}

void apply_config_text(Config& config, std::string_view text, const std::filesystem::path& base)
{
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        auto line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw InputError(fmt::format("line {}: expected 'section.key = value'", line_no));
        }
        try {
            set_option(config, line.substr(0, eq), line.substr(eq + 1), base);
        } catch (const InputError& e) {
            throw InputError(fmt::format("line {}: {}", line_no, e.what()));
        }
    }
}

Config load_config(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError(fmt::format("cannot read config '{}'", path.string()));
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    Config config;
    try {
        apply_config_text(config, buffer.str(), path.parent_path());
    } catch (const InputError& e) {
        throw InputError(fmt::format("{}: {}", path.string(), e.what()));
    }
    return config;
}

void check_input_paths(const Config& config)
{
    const std::pair<const char*, const std::optional<std::filesystem::path>*> inputs[] = {
        {"paths.climate", &config.paths.climate},
        {"paths.anomalies", &config.paths.anomalies},
        {"paths.continents", &config.paths.continents},
        {"paths.sites", &config.paths.sites},
    };
    for (const auto& [key, p] : inputs) {
        if (*p && !std::filesystem::is_regular_file(**p)) {
            throw InputError(fmt::format("{} = '{}' does not exist", key, (*p)->string()));
        }
    }
}

std::vector<std::string> config_keys()
{
    std::vector<std::string> keys;
    for (const auto& [k, _] : setters()) {
        keys.push_back(k);
    }
    return keys;
}

}  // namespace neolith
