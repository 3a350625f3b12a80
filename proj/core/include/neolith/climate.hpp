#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "neolith/parameters.hpp"

namespace neolith::climate {

/// Asymptotic productivity of the Miami transfer functions, g m^-2 a^-1.
inline constexpr double kMiamiNppMax = 1460.0;

/// Net primary productivity from mean annual temperature (degC) and annual
/// precipitation (m): the smaller of the precipitation- and
/// temperature-limited Miami estimates. Throws std::domain_error for p < 0.
double miami_npp(double temperature_c, double precipitation_m);

/// 3x^2 - 2x^3 on [0, 1], clamped outside.
double smoothstep(double x);

/// Temperature limitation on agriculture: smoothstep(gdd / gdd_saturation).
/// Zero at permafrost (gdd = 0), one from gdd_saturation upwards.
double temperature_limitation(double gdd, double gdd_saturation);

/// Food extraction potential, 2x/(x^2+1) with x = npp / npp_food_peak.
double food_extraction_potential(double npp, double npp_food_peak);

/// Local potential for agropastoral economies, tli * 4x/(x^3+3) with
/// x = npp / npp_domestication_peak.
double local_economy_potential(double npp, double tli, double npp_domestication_peak);

struct ContinentalPotential {
    std::map<int, double> cae;  // continent label -> continental potential
    std::vector<double> pae;    // per region, lae * cae of its continent
};

/// Aggregates local potentials into continental ones over region areas
/// (linearised species-area relation). `area_max` is the normalising area;
/// when absent it is the LAE-weighted area of the continent with the largest
/// total area, so that continent receives exactly `cae_max`.
ContinentalPotential continental_potential(std::span<const int> continent,
                                           std::span<const double> lae,
                                           std::span<const double> area,
                                           double cae_max,
                                           std::optional<double> area_max = std::nullopt);

/// Growing-degree-day estimate used when no monthly temperatures are known:
/// gdd = max(0, slope_days * (t - base_c)).
struct GddProxy {
    double slope_days = 365.0;
    double base_c = 0.0;
};

struct ClimateCell {
    double lon = 0.0;
    double lat = 0.0;
    double temperature = 0.0;    // degC, annual mean
    double precipitation = 0.0;  // m a^-1
    std::optional<std::array<double, 12>> monthly_temperature;
    double gdd = 0.0;
    double npp = 0.0;
    double tli = 0.0;
};

/// Growing degree days above 0 degC from monthly means, else the proxy.
double growing_degree_days(const ClimateCell& cell, const GddProxy& proxy);

/// Fills gdd, npp and tli of every cell from its temperature and precipitation.
void derive_productivity(std::span<ClimateCell> cells, const GddProxy& proxy, double gdd_saturation);

/// Temperature/precipitation offsets for every cell at one time slice.
struct AnomalySlice {
    double year_bc = 0.0;
    std::vector<double> temperature;    // degC, per cell
    std::vector<double> precipitation;  // m a^-1, per cell
};

/// Baseline climatology plus anomaly slices, interpolated linearly in time
/// and clamped to the first/last slice outside their span.
class ClimateSeries {
public:
    ClimateSeries(std::vector<ClimateCell> baseline, std::vector<AnomalySlice> slices,
                  GddProxy proxy, double gdd_saturation);

    const std::vector<ClimateCell>& baseline() const { return baseline_; }
    bool has_anomalies() const { return !slices_.empty(); }

    /// Cells with anomalies applied and productivity derived, at `year_bc`.
    std::vector<ClimateCell> at(double year_bc) const;

private:
    std::vector<ClimateCell> baseline_;
    std::vector<AnomalySlice> slices_;  // sorted by descending year_bc
    GddProxy proxy_;
    double gdd_saturation_;
};

/// Biogeographic potentials aggregated over one region.
struct RegionPotential {
    double area = 0.0;  // km^2
    double npp = 0.0;   // area-weighted mean of member cells
    double tli = 0.0;   // area-weighted mean of member cells
    double fep = 0.0;
    double lae = 0.0;
    double pae = 0.0;
    int continent = 0;
};

/// Region-level FEP/LAE/PAE from member cells. `cell_continent` may be empty
/// (single continent 0); otherwise a region takes the label covering most of
/// its area, lowest label on ties.
std::vector<RegionPotential> region_potentials(std::span<const ClimateCell> cells,
                                               std::span<const double> cell_area,
                                               std::span<const std::vector<int>> members,
                                               std::span<const int> cell_continent,
                                               const Parameters& params,
                                               std::optional<double> area_max = std::nullopt);

}  // namespace neolith::climate
