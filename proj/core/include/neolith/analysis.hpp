#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "neolith/engine.hpp"
#include "neolith/geo.hpp"

namespace neolith::analysis {

using geo::great_circle_km;
using geo::LonLat;

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    std::size_t n = 0;
};

/// Ordinary least squares of y on x, accumulated in one pass. Throws
/// DegenerateFitError for fewer than two points or a constant x or y.
LinearFit ordinary_least_squares(std::span<const double> x, std::span<const double> y);

/// Quantile with linear interpolation between order statistics, p in [0, 1].
/// Throws std::invalid_argument on an empty sample.
double quantile(std::vector<double> values, double p);

struct LagPoint {
    double distance_km = 0.0;
    double age_bc = 0.0;
};

struct FrontBin {
    double lower_km = 0.0;
    double upper_km = 0.0;
    std::size_t count = 0;
    double front_lag = 0.0;  // years after the centre onset, low quantile of the bin
};

struct LagDistanceResult {
    double center_onset_bc = 0.0;
    LinearFit fit;  // distance (km) on lag (a): slope in km/a
    std::vector<FrontBin> front;
};

struct LagOptions {
    double bin_km = 500.0;
    double front_quantile = 0.05;
};

/// Regresses distance from the centre on the lag behind the centre onset
/// (lag = center_onset_bc - age_bc), and reports the early front per
/// distance bin. Empty bins are omitted.
LagDistanceResult lag_distance(std::span<const LagPoint> points, double center_onset_bc,
                               const LagOptions& options = {});

/// Standard deviation of the timing kernel for a region of `area_km2`:
/// beta * sqrt(area) / v_ref, in years.
double broadening_sigma(double area_km2, double beta, double v_ref_km_per_a = 1.0);

struct TimingDensity {
    double bin_width = 0.0;
    std::vector<double> bin_start;  // ascending sim/cal BC
    std::vector<double> mass;       // probability per bin
};

/// Normal kernel centred at `year_bc`, integrated over bins aligned to
/// multiples of `bin_width` and covering `span_sigmas` on each side. A zero
/// sigma gives a single bin of mass 1.
TimingDensity broaden_timing(double year_bc, double sigma, double bin_width, double span_sigmas = 8.0);

struct SiteRecord {
    std::string id;
    double lon = 0.0;
    double lat = 0.0;
    double median_bc = 0.0;
    double sigma = 0.0;
    std::string culture;
};

struct Histogram {
    double bin_width = 0.0;
    std::vector<double> bin_start;   // ascending
    std::vector<std::size_t> count;

    std::size_t total() const;
    /// Start of the most populated bin (oldest on ties); nullopt when empty.
    std::optional<double> mode() const;
};

/// Bins the median ages of sites inside the region (via `inside`) or within
/// `radius_km` of `centroid`.
Histogram focus_histogram(std::span<const SiteRecord> sites, LonLat centroid, double radius_km, double bin_width,
                          const std::function<bool(LonLat)>& inside = {});

/// Oldest median age among sites within `radius_km` of `center`.
std::optional<double> oldest_site_bc(std::span<const SiteRecord> sites, LonLat center, double radius_km);

struct ImmigrantEntry {
    int region = 0;
    std::optional<double> fraction;  // absent: never reached completion
};

std::vector<ImmigrantEntry> immigrant_map(std::span<const TransitionRecord> transitions);

}  // namespace neolith::analysis
