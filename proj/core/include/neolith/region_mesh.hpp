#pragma once

#include <optional>
#include <span>
#include <vector>

#include "neolith/geo.hpp"

namespace neolith::mesh {

struct GridCell {
    int index = 0;
    double lon = 0.0;
    double lat = 0.0;
    double area = 0.0;  // km^2
    double npp = 0.0;   // discriminant properties
    double gdd = 0.0;
    int row = 0;
    int col = 0;
};

enum class Connectivity { Four = 4, Eight = 8 };

/// Regular lon/lat raster with possibly missing cells (sea, outside domain).
class Grid {
public:
    /// Builds the grid from cell centres. The resolution is inferred from the
    /// smallest coordinate spacing when not given. Throws InputError on an
    /// empty set or duplicate cell positions.
    static Grid from_cells(std::span<const geo::LonLat> centers, std::span<const double> npp,
                           std::span<const double> gdd, std::optional<double> resolution_deg = std::nullopt);

    const std::vector<GridCell>& cells() const { return cells_; }
    std::size_t size() const { return cells_.size(); }
    double resolution() const { return resolution_; }

    /// Cell index at (row, col), or -1.
    int at(int row, int col) const;

    /// Neighbouring cell indices in ascending order.
    std::vector<int> neighbors(int cell, Connectivity connectivity) const;

private:
    std::vector<GridCell> cells_;
    std::vector<int> lookup_;  // rows_ * cols_ -> cell index or -1
    int rows_ = 0;
    int cols_ = 0;
    double resolution_ = 0.5;
};

struct Scales {
    double npp = 1.0;
    double gdd = 1.0;
};

/// Domain-wide standard deviations of npp and gdd; a zero spread maps to 1.
Scales default_scales(const Grid& grid);

/// 1 / (1 + |dnpp|/npp_scale + |dgdd|/gdd_scale), in (0, 1].
double similarity(double npp_a, double gdd_a, double npp_b, double gdd_b, const Scales& scales);
double similarity(const GridCell& a, const GridCell& b, const Scales& scales);

struct Neighbor {
    int region = 0;
    double boundary_km = 0.0;
};

struct Region {
    int id = 0;
    std::vector<int> cells;  // ascending cell indices
    double area = 0.0;       // km^2
    geo::LonLat centroid;    // area-weighted
    std::vector<Neighbor> neighbors;  // ascending region id
};

struct MeshOptions {
    double target_area = 130e3;  // km^2
    int max_iterations = 200;
    Connectivity connectivity = Connectivity::Four;
    std::optional<Scales> scales;  // default_scales() when absent
};

struct Mesh {
    std::vector<Region> regions;
    std::vector<int> cell_region;  // cell index -> region id
    int iterations = 0;
    bool converged = true;
};

/// Clusters cells by area-weighted biogeographic similarity, splits clusters
/// into 4-connected pieces, then attaches pieces below the target area to the
/// most similar adjacent cluster. Region ids follow the smallest member cell.
Mesh build_regions(const Grid& grid, const MeshOptions& options);

/// Assembles regions (members, area, centroid, neighbours) from a cell
/// partition; labels must be 0..k-1.
std::vector<Region> regions_from_partition(const Grid& grid, std::span<const int> cell_region);

/// Shared-boundary lengths between distinct regions over 4-adjacent cell pairs.
void compute_adjacency(std::vector<Region>& regions, const Grid& grid, std::span<const int> cell_region);

/// True when every region's cells form one 4-connected component.
bool is_contiguous(const Region& region, const Grid& grid);

}  // namespace neolith::mesh
