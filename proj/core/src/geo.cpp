#include "neolith/geo.hpp"

#include <algorithm>
#include <cmath>

namespace neolith::geo {

double great_circle_km(LonLat a, LonLat b)
{
    const double phi1 = radians(a.lat);
    const double phi2 = radians(b.lat);
    const double dphi = phi2 - phi1;
    const double dlambda = radians(b.lon - a.lon);
    const double s1 = std::sin(dphi / 2.0);
    const double s2 = std::sin(dlambda / 2.0);
    double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
    h = std::clamp(h, 0.0, 1.0);
    return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(h));
}

double cell_area_km2(double lat_center, double resolution_deg)
{
    const double side = radians(resolution_deg);
    return kEarthRadiusKm * kEarthRadiusKm * side * side * std::cos(radians(lat_center));
}

double meridional_edge_km(double resolution_deg)
{
    return kEarthRadiusKm * radians(resolution_deg);
}

double zonal_edge_km(double lat_boundary, double resolution_deg)
{
    return kEarthRadiusKm * std::cos(radians(lat_boundary)) * radians(resolution_deg);
}

}  // namespace neolith::geo
