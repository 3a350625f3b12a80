#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <string>

#include "neolith/geo.hpp"

namespace neolith::svg {

struct MapCell {
    geo::LonLat center;
    int region = 0;
};

struct ChoroplethStyle {
    std::string title;
    double low = 0.0;   // value mapped to the first colour stop
    double high = 1.0;  // value mapped to the last colour stop
    double pixels_per_degree = 12.0;
};

/// Fills each grid cell with the colour of its region's value; regions
/// without a value are drawn grey. A horizontal colour bar is appended.
void choropleth(std::ostream& out, std::span<const MapCell> cells, double resolution_deg,
                std::span<const std::optional<double>> region_value, const ChoroplethStyle& style);

}  // namespace neolith::svg
