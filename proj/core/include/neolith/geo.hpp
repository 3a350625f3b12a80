#pragma once

namespace neolith::geo {

inline constexpr double kEarthRadiusKm = 6371.0;
inline constexpr double kPi = 3.14159265358979323846;

struct LonLat {
    double lon = 0.0;  // degrees east
    double lat = 0.0;  // degrees north
};

constexpr double radians(double degrees) { return degrees * kPi / 180.0; }

/// Haversine distance on a sphere of radius kEarthRadiusKm.
double great_circle_km(LonLat a, LonLat b);

/// Area of a lon/lat grid cell of the given angular size, cos-latitude weighted.
double cell_area_km2(double lat_center, double resolution_deg);

/// Length of the edge shared by two east-west neighbours (a meridian segment).
double meridional_edge_km(double resolution_deg);

/// Length of the edge shared by two north-south neighbours, at the boundary latitude.
double zonal_edge_km(double lat_boundary, double resolution_deg);

}  // namespace neolith::geo
