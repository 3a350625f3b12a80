#include "neolith/climate.hpp"

#include "neolith/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace neolith::climate {

double miami_npp(double temperature_c, double precipitation_m)
{
    if (!(precipitation_m >= 0.0)) {
        throw std::domain_error("miami_npp: precipitation must be >= 0");
    }
    const double by_precipitation = (1.0 - std::exp(-0.664 * precipitation_m)) * kMiamiNppMax;
    const double by_temperature = kMiamiNppMax / (1.0 + 3.7248 * std::exp(-0.119 * temperature_c));
    return std::min(by_precipitation, by_temperature);
}

double smoothstep(double x)
{
    x = std::clamp(x, 0.0, 1.0);
    return x * x * (3.0 - 2.0 * x);
}

double temperature_limitation(double gdd, double gdd_saturation)
{
    return smoothstep(gdd / gdd_saturation);
}

double food_extraction_potential(double npp, double npp_food_peak)
{
    const double x = npp / npp_food_peak;
    return 2.0 * x / (x * x + 1.0);
}

double local_economy_potential(double npp, double tli, double npp_domestication_peak)
{
    const double x = npp / npp_domestication_peak;
    return tli * 4.0 * x / (x * x * x + 3.0);
}

ContinentalPotential continental_potential(std::span<const int> continent,
                                           std::span<const double> lae,
                                           std::span<const double> area,
                                           double cae_max,
                                           std::optional<double> area_max)
{
    if (continent.size() != lae.size() || continent.size() != area.size()) {
        throw std::invalid_argument("continental_potential: size mismatch");
    }

    std::map<int, double> weighted;  // sum of A_i * LAE_i
    std::map<int, double> total_area;
    for (std::size_t i = 0; i < continent.size(); ++i) {
        weighted[continent[i]] += area[i] * lae[i];
        total_area[continent[i]] += area[i];
    }

    double normaliser = 0.0;
    if (area_max) {
        normaliser = *area_max;
    } else if (!total_area.empty()) {
        auto largest = std::max_element(total_area.begin(), total_area.end(),
                                        [](const auto& a, const auto& b) { return a.second < b.second; });
        normaliser = weighted[largest->first];
    }

    ContinentalPotential out;
    for (const auto& [label, sum] : weighted) {
        out.cae[label] = normaliser > 0.0 ? cae_max * sum / normaliser : 0.0;
    }
    out.pae.resize(continent.size());
    for (std::size_t i = 0; i < continent.size(); ++i) {
        out.pae[i] = lae[i] * out.cae[continent[i]];
    }
    return out;
}

double growing_degree_days(const ClimateCell& cell, const GddProxy& proxy)
{
    if (cell.monthly_temperature) {
        static constexpr std::array<double, 12> kDays{31, 28.25, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
        double sum = 0.0;
        for (std::size_t m = 0; m < 12; ++m) {
            sum += std::max(0.0, (*cell.monthly_temperature)[m]) * kDays[m];
        }
        return sum;
    }
    return std::max(0.0, proxy.slope_days * (cell.temperature - proxy.base_c));
}

void derive_productivity(std::span<ClimateCell> cells, const GddProxy& proxy, double gdd_saturation)
{
    for (auto& cell : cells) {
        cell.precipitation = std::max(0.0, cell.precipitation);
        cell.gdd = growing_degree_days(cell, proxy);
        cell.npp = miami_npp(cell.temperature, cell.precipitation);
        cell.tli = temperature_limitation(cell.gdd, gdd_saturation);
    }
}

ClimateSeries::ClimateSeries(std::vector<ClimateCell> baseline, std::vector<AnomalySlice> slices,
                             GddProxy proxy, double gdd_saturation)
    : baseline_(std::move(baseline)), slices_(std::move(slices)), proxy_(proxy), gdd_saturation_(gdd_saturation)
{
    for (const auto& slice : slices_) {
        if (slice.temperature.size() != baseline_.size() || slice.precipitation.size() != baseline_.size()) {
            throw InputError("anomaly slice does not cover every climate cell");
        }
    }
    std::sort(slices_.begin(), slices_.end(),
              [](const AnomalySlice& a, const AnomalySlice& b) { return a.year_bc > b.year_bc; });
    derive_productivity(baseline_, proxy_, gdd_saturation_);
}

std::vector<ClimateCell> ClimateSeries::at(double year_bc) const
{
    std::vector<ClimateCell> cells = baseline_;
    if (slices_.empty()) {
        return cells;
    }

    // Bracketing slices; time runs toward smaller BC years.
    const AnomalySlice* older = &slices_.front();
    const AnomalySlice* younger = &slices_.front();
    double weight_younger = 0.0;
    if (year_bc <= slices_.back().year_bc) {
        older = younger = &slices_.back();
    } else if (year_bc < slices_.front().year_bc) {
        for (std::size_t k = 0; k + 1 < slices_.size(); ++k) {
            if (year_bc <= slices_[k].year_bc && year_bc >= slices_[k + 1].year_bc) {
                older = &slices_[k];
                younger = &slices_[k + 1];
                const double span = older->year_bc - younger->year_bc;
                weight_younger = span > 0.0 ? (older->year_bc - year_bc) / span : 0.0;
                break;
            }
        }
    }

    for (std::size_t i = 0; i < cells.size(); ++i) {
        const double dt = (1.0 - weight_younger) * older->temperature[i] + weight_younger * younger->temperature[i];
        const double dp = (1.0 - weight_younger) * older->precipitation[i] + weight_younger * younger->precipitation[i];
        cells[i].temperature += dt;
        cells[i].precipitation += dp;
        if (cells[i].monthly_temperature) {
            for (double& m : *cells[i].monthly_temperature) {
                m += dt;
            }
        }
    }
    derive_productivity(cells, proxy_, gdd_saturation_);
    return cells;
}

std::vector<RegionPotential> region_potentials(std::span<const ClimateCell> cells,
                                               std::span<const double> cell_area,
                                               std::span<const std::vector<int>> members,
                                               std::span<const int> cell_continent,
                                               const Parameters& params,
                                               std::optional<double> area_max)
{
    if (cells.size() != cell_area.size()) {
        throw std::invalid_argument("region_potentials: cells and areas differ in size");
    }
    if (!cell_continent.empty() && cell_continent.size() != cells.size()) {
        throw std::invalid_argument("region_potentials: continent labels do not cover the grid");
    }

    std::vector<RegionPotential> out(members.size());
    for (std::size_t r = 0; r < members.size(); ++r) {
        RegionPotential& pot = out[r];
        std::map<int, double> label_area;
        double npp_sum = 0.0;
        double tli_sum = 0.0;
        for (int c : members[r]) {
            const double a = cell_area[static_cast<std::size_t>(c)];
            pot.area += a;
            npp_sum += a * cells[static_cast<std::size_t>(c)].npp;
            tli_sum += a * cells[static_cast<std::size_t>(c)].tli;
            label_area[cell_continent.empty() ? 0 : cell_continent[static_cast<std::size_t>(c)]] += a;
        }
        if (pot.area > 0.0) {
            pot.npp = npp_sum / pot.area;
            pot.tli = std::clamp(tli_sum / pot.area, 0.0, 1.0);
        }
        double best = -1.0;
        for (const auto& [label, a] : label_area) {
            if (a > best) {
                best = a;
                pot.continent = label;
            }
        }
        pot.fep = food_extraction_potential(pot.npp, params.npp_food_peak);
        pot.lae = local_economy_potential(pot.npp, pot.tli, params.npp_domestication_peak);
    }

    std::vector<int> labels;
    std::vector<double> laes;
    std::vector<double> areas;
    for (const auto& pot : out) {
        labels.push_back(pot.continent);
        laes.push_back(pot.lae);
        areas.push_back(pot.area);
    }
    const auto continental = continental_potential(labels, laes, areas, params.continental_economies_max, area_max);
    for (std::size_t r = 0; r < out.size(); ++r) {
        out[r].pae = continental.pae[r];
    }
    return out;
}

}  // namespace neolith::climate
