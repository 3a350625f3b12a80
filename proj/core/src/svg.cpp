#include "neolith/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fmt/format.h>
#include <limits>

namespace neolith::svg {

namespace {

struct Rgb {
    double r, g, b;
};

// A perceptually ordered ramp, dark blue through green to yellow.
constexpr std::array<Rgb, 5> kRamp{{
    {68, 1, 84},
    {59, 82, 139},
    {33, 145, 140},
    {94, 201, 98},
    {253, 231, 37},
}};

std::string colour(double t)
{
    t = std::clamp(t, 0.0, 1.0) * static_cast<double>(kRamp.size() - 1);
    const auto k = std::min(static_cast<std::size_t>(t), kRamp.size() - 2);
    const double w = t - static_cast<double>(k);
    const auto& a = kRamp[k];
    const auto& b = kRamp[k + 1];
    auto mix = [w](double x, double y) { return static_cast<int>(std::lround(x + w * (y - x))); };
    return fmt::format("#{:02x}{:02x}{:02x}", mix(a.r, b.r), mix(a.g, b.g), mix(a.b, b.b));
}

}  // namespace

void choropleth(std::ostream& out, std::span<const MapCell> cells, double resolution_deg,
                std::span<const std::optional<double>> region_value, const ChoroplethStyle& style)
{
    double lon0 = std::numeric_limits<double>::infinity();
    double lat0 = lon0;
    double lon1 = -lon0;
    double lat1 = -lon0;
    for (const auto& c : cells) {
        lon0 = std::min(lon0, c.center.lon);
        lon1 = std::max(lon1, c.center.lon);
        lat0 = std::min(lat0, c.center.lat);
        lat1 = std::max(lat1, c.center.lat);
    }
    if (cells.empty()) {
        lon0 = lat0 = 0.0;
        lon1 = lat1 = 0.0;
    }
    const double ppd = style.pixels_per_degree;
    const double map_w = (lon1 - lon0 + resolution_deg) * ppd;
    const double map_h = (lat1 - lat0 + resolution_deg) * ppd;
    const double margin = 10.0;
    const double title_h = 24.0;
    const double bar_h = 40.0;
    const double width = std::max(map_w, 200.0) + 2 * margin;
    const double height = map_h + title_h + bar_h + 2 * margin;
    const double span = style.high > style.low ? style.high - style.low : 1.0;

    out << fmt::format(R"(<svg xmlns="http://www.w3.org/2000/svg" width="{:.0f}" height="{:.0f}">)", width, height)
        << '\n';
    out << fmt::format(R"(<text x="{}" y="{}" font-family="sans-serif" font-size="14">{}</text>)", margin,
                       margin + 14, style.title)
        << '\n';
    const double cell_px = resolution_deg * ppd;
    for (const auto& c : cells) {
        const double x = margin + (c.center.lon - lon0) * ppd;
        const double y = margin + title_h + (lat1 - c.center.lat) * ppd;
        std::optional<double> v;
        if (c.region >= 0 && static_cast<std::size_t>(c.region) < region_value.size()) {
            v = region_value[static_cast<std::size_t>(c.region)];
        }
        const auto fill = v ? colour((*v - style.low) / span) : std::string("#cccccc");
        out << fmt::format(R"(<rect x="{:.2f}" y="{:.2f}" width="{:.2f}" height="{:.2f}" fill="{}"/>)", x, y,
                           cell_px, cell_px, fill)
            << '\n';
    }

    const double bar_y = margin + title_h + map_h + 8;
    const int steps = 20;
    const double bar_w = 180.0;
    for (int k = 0; k < steps; ++k) {
        out << fmt::format(R"(<rect x="{:.2f}" y="{:.2f}" width="{:.2f}" height="10" fill="{}"/>)",
                           margin + k * bar_w / steps, bar_y, bar_w / steps + 0.5,
                           colour((k + 0.5) / steps))
            << '\n';
    }
    out << fmt::format(R"(<text x="{}" y="{:.2f}" font-family="sans-serif" font-size="10">{}</text>)", margin,
                       bar_y + 24, style.low)
        << '\n';
    out << fmt::format(
               R"(<text x="{:.2f}" y="{:.2f}" font-family="sans-serif" font-size="10" text-anchor="end">{}</text>)",
               margin + bar_w, bar_y + 24, style.high)
        << '\n';
    out << "</svg>\n";
}

}  // namespace neolith::svg
