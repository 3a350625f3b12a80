#include "neolith/analysis.hpp"

#include "neolith/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace neolith::analysis {

LinearFit ordinary_least_squares(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size()) {
        throw std::invalid_argument("ordinary_least_squares: x and y differ in length");
    }
    if (x.size() < 2) {
        throw DegenerateFitError("regression needs at least two points");
    }
    // Running means and co-moments (Welford).
    double mx = 0.0, my = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double n = static_cast<double>(k + 1);
        const double dx = x[k] - mx;
        const double dy = y[k] - my;
        mx += dx / n;
        my += dy / n;
        sxx += dx * (x[k] - mx);
        syy += dy * (y[k] - my);
        sxy += dx * (y[k] - my);
    }
    if (!(sxx > 0.0)) {
        throw DegenerateFitError("regressor has zero variance; slope undefined");
    }
    LinearFit fit;
    fit.n = x.size();
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r2 = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
    return fit;
}

double quantile(std::vector<double> values, double p)
{
    if (values.empty()) {
        throw std::invalid_argument("quantile of an empty sample");
    }
    p = std::clamp(p, 0.0, 1.0);
    std::sort(values.begin(), values.end());
    const double h = p * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

LagDistanceResult lag_distance(std::span<const LagPoint> points, double center_onset_bc, const LagOptions& options)
{
    if (!(options.bin_km > 0.0)) {
        throw std::invalid_argument("lag_distance: bin width must be positive");
    }
    std::vector<double> lag;
    std::vector<double> distance;
    lag.reserve(points.size());
    distance.reserve(points.size());
    for (const auto& p : points) {
        lag.push_back(center_onset_bc - p.age_bc);
        distance.push_back(p.distance_km);
    }

    LagDistanceResult out;
    out.center_onset_bc = center_onset_bc;
    out.fit = ordinary_least_squares(lag, distance);

    std::map<long, std::vector<double>> bins;
    for (std::size_t k = 0; k < points.size(); ++k) {
        bins[static_cast<long>(std::floor(distance[k] / options.bin_km))].push_back(lag[k]);
    }
    for (auto& [b, lags] : bins) {
        FrontBin fb;
        fb.lower_km = static_cast<double>(b) * options.bin_km;
        fb.upper_km = fb.lower_km + options.bin_km;
        fb.count = lags.size();
        fb.front_lag = quantile(std::move(lags), options.front_quantile);
        out.front.push_back(fb);
    }
    return out;
}

double broadening_sigma(double area_km2, double beta, double v_ref_km_per_a)
{
    if (!(area_km2 > 0.0)) {
        throw std::invalid_argument("broadening_sigma: area must be positive");
    }
    return beta * std::sqrt(area_km2) / v_ref_km_per_a;
}

TimingDensity broaden_timing(double year_bc, double sigma, double bin_width, double span_sigmas)
{
    if (!(bin_width > 0.0)) {
        throw std::invalid_argument("broaden_timing: bin width must be positive");
    }
    TimingDensity out;
    out.bin_width = bin_width;
    if (!(sigma > 0.0)) {
        out.bin_start.push_back(std::floor(year_bc / bin_width) * bin_width);
        out.mass.push_back(1.0);
        return out;
    }
    const double first = std::floor((year_bc - span_sigmas * sigma) / bin_width) * bin_width;
    const double last = std::floor((year_bc + span_sigmas * sigma) / bin_width) * bin_width;
    const auto bins = static_cast<std::size_t>(std::lround((last - first) / bin_width)) + 1;
    const double scale = 1.0 / (sigma * std::sqrt(2.0));
    auto cdf = [&](double x) { return 0.5 * std::erfc(-(x - year_bc) * scale); };
    for (std::size_t k = 0; k < bins; ++k) {
        const double lo = first + static_cast<double>(k) * bin_width;
        out.bin_start.push_back(lo);
        out.mass.push_back(cdf(lo + bin_width) - cdf(lo));
    }
    return out;
}

std::size_t Histogram::total() const
{
    std::size_t n = 0;
    for (auto c : count) {
        n += c;
    }
    return n;
}

std::optional<double> Histogram::mode() const
{
    std::optional<double> best;
    std::size_t best_count = 0;
    for (std::size_t k = 0; k < count.size(); ++k) {
        if (count[k] > 0 && count[k] >= best_count) {
            best_count = count[k];
            best = bin_start[k];
        }
    }
    return best;
}

Histogram focus_histogram(std::span<const SiteRecord> sites, LonLat centroid, double radius_km, double bin_width,
                          const std::function<bool(LonLat)>& inside)
{
    if (!(bin_width > 0.0)) {
        throw std::invalid_argument("focus_histogram: bin width must be positive");
    }
    std::map<long, std::size_t> bins;
    for (const auto& s : sites) {
        const LonLat at{s.lon, s.lat};
        const bool selected = (inside && inside(at)) || great_circle_km(at, centroid) <= radius_km;
        if (selected) {
            ++bins[static_cast<long>(std::floor(s.median_bc / bin_width))];
        }
    }
    Histogram h;
    h.bin_width = bin_width;
    for (const auto& [b, c] : bins) {
        h.bin_start.push_back(static_cast<double>(b) * bin_width);
        h.count.push_back(c);
    }
    return h;
}

std::optional<double> oldest_site_bc(std::span<const SiteRecord> sites, LonLat center, double radius_km)
{
    std::optional<double> oldest;
    for (const auto& s : sites) {
        if (great_circle_km({s.lon, s.lat}, center) <= radius_km && (!oldest || s.median_bc > *oldest)) {
            oldest = s.median_bc;
        }
    }
    return oldest;
}

std::vector<ImmigrantEntry> immigrant_map(std::span<const TransitionRecord> transitions)
{
    std::vector<ImmigrantEntry> out;
    out.reserve(transitions.size());
    for (const auto& t : transitions) {
        ImmigrantEntry e;
        e.region = t.region;
        if (t.completion_bc) {
            e.fraction = t.immigrant_fraction.value_or(0.0);
        }
        out.push_back(e);
    }
    return out;
}

}  // namespace neolith::analysis
