#include "neolith/region_mesh.hpp"

#include "neolith/errors.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <utility>

namespace neolith::mesh {

namespace {

double min_spacing(std::vector<double> values)
{
    std::sort(values.begin(), values.end());
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < values.size(); ++i) {
        const double d = values[i] - values[i - 1];
        if (d > 1e-9 && d < best) {
            best = d;
        }
    }
    return best;
}

double stddev(const std::vector<GridCell>& cells, double GridCell::*field)
{
    if (cells.empty()) {
        return 0.0;
    }
    double mean = 0.0;
    for (const auto& c : cells) {
        mean += c.*field;
    }
    mean /= static_cast<double>(cells.size());
    double var = 0.0;
    for (const auto& c : cells) {
        const double d = c.*field - mean;
        var += d * d;
    }
    return std::sqrt(var / static_cast<double>(cells.size()));
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(static_cast<std::size_t>(n))
    {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int x)
    {
        while (parent[static_cast<std::size_t>(x)] != x) {
            auto& p = parent[static_cast<std::size_t>(x)];
            p = parent[static_cast<std::size_t>(p)];
            x = p;
        }
        return x;
    }
};

// Relabels clusters so that every label is one 4-connected piece. Labels are
// assigned in ascending order of each piece's smallest cell.
std::vector<int> split_components(const Grid& grid, const std::vector<int>& cluster, int& count)
{
    const auto n = grid.size();
    std::vector<int> component(n, -1);
    count = 0;
    std::deque<int> queue;
    for (std::size_t start = 0; start < n; ++start) {
        if (component[start] >= 0) {
            continue;
        }
        component[start] = count;
        queue.push_back(static_cast<int>(start));
        while (!queue.empty()) {
            const int c = queue.front();
            queue.pop_front();
            for (int nb : grid.neighbors(c, Connectivity::Four)) {
                const auto u = static_cast<std::size_t>(nb);
                if (component[u] < 0 && cluster[u] == cluster[start]) {
                    component[u] = count;
                    queue.push_back(nb);
                }
            }
        }
        ++count;
    }
    return component;
}

// Attaches pieces below the target area to the adjacent piece with maximal
// area-weighted similarity of their area-weighted mean properties.
std::vector<int> merge_small(const Grid& grid, const std::vector<int>& component, int count,
                             double target_area, const Scales& scales)
{
    const auto k = static_cast<std::size_t>(count);
    std::vector<double> area(k, 0.0);
    std::vector<double> npp_sum(k, 0.0);
    std::vector<double> gdd_sum(k, 0.0);
    std::vector<std::set<int>> adjacent(k);
    const auto& cells = grid.cells();
    for (const auto& cell : cells) {
        const auto a = static_cast<std::size_t>(component[static_cast<std::size_t>(cell.index)]);
        area[a] += cell.area;
        npp_sum[a] += cell.area * cell.npp;
        gdd_sum[a] += cell.area * cell.gdd;
        for (int nb : grid.neighbors(cell.index, Connectivity::Four)) {
            const int b = component[static_cast<std::size_t>(nb)];
            if (b != static_cast<int>(a)) {
                adjacent[a].insert(b);
            }
        }
    }

    UnionFind merged(count);
    std::set<std::pair<double, int>> small;
    for (int c = 0; c < count; ++c) {
        if (area[static_cast<std::size_t>(c)] < target_area) {
            small.emplace(area[static_cast<std::size_t>(c)], c);
        }
    }

    while (!small.empty()) {
        const int victim = small.begin()->second;
        small.erase(small.begin());
        const auto v = static_cast<std::size_t>(victim);
        if (adjacent[v].empty()) {
            continue;  // isolated piece, kept as is
        }

        const double npp_v = npp_sum[v] / area[v];
        const double gdd_v = gdd_sum[v] / area[v];
        int best = -1;
        double best_weight = -1.0;
        for (int cand : adjacent[v]) {  // ascending ids: strict '>' keeps the lowest on ties
            const auto u = static_cast<std::size_t>(cand);
            const double s = similarity(npp_v, gdd_v, npp_sum[u] / area[u], gdd_sum[u] / area[u], scales);
            const double w = s * area[u] / (area[u] + target_area);
            if (w > best_weight) {
                best_weight = w;
                best = cand;
            }
        }

        const auto t = static_cast<std::size_t>(best);
        const bool target_was_small = area[t] < target_area;
        if (target_was_small) {
            small.erase({area[t], best});
        }
        area[t] += area[v];
        npp_sum[t] += npp_sum[v];
        gdd_sum[t] += gdd_sum[v];
        for (int other : adjacent[v]) {
            auto& set = adjacent[static_cast<std::size_t>(other)];
            set.erase(victim);
            if (other != best) {
                set.insert(best);
                adjacent[t].insert(other);
            }
        }
        adjacent[t].erase(best);
        adjacent[v].clear();
        merged.parent[v] = best;
        if (area[t] < target_area) {
            small.emplace(area[t], best);
        }
    }

    std::vector<int> label(grid.size());
    for (std::size_t c = 0; c < grid.size(); ++c) {
        label[c] = merged.find(component[c]);
    }
    return label;
}

}  // namespace

Grid Grid::from_cells(std::span<const geo::LonLat> centers, std::span<const double> npp,
                      std::span<const double> gdd, std::optional<double> resolution_deg)
{
    if (centers.empty()) {
        throw InputError("grid has no cells");
    }
    if (npp.size() != centers.size() || gdd.size() != centers.size()) {
        throw InputError("grid property arrays differ in length");
    }

    Grid grid;
    std::vector<double> lons;
    std::vector<double> lats;
    for (const auto& c : centers) {
        lons.push_back(c.lon);
        lats.push_back(c.lat);
    }
    if (resolution_deg) {
        grid.resolution_ = *resolution_deg;
    } else {
        const double r = std::min(min_spacing(lons), min_spacing(lats));
        grid.resolution_ = std::isfinite(r) ? r : 0.5;
    }
    if (!(grid.resolution_ > 0.0)) {
        throw InputError("grid resolution must be positive");
    }

    const double lon0 = *std::min_element(lons.begin(), lons.end());
    const double lat0 = *std::min_element(lats.begin(), lats.end());
    grid.cells_.reserve(centers.size());
    for (std::size_t i = 0; i < centers.size(); ++i) {
        GridCell cell;
        cell.index = static_cast<int>(i);
        cell.lon = centers[i].lon;
        cell.lat = centers[i].lat;
        cell.npp = npp[i];
        cell.gdd = gdd[i];
        cell.area = geo::cell_area_km2(cell.lat, grid.resolution_);
        cell.col = static_cast<int>(std::lround((cell.lon - lon0) / grid.resolution_));
        cell.row = static_cast<int>(std::lround((cell.lat - lat0) / grid.resolution_));
        grid.rows_ = std::max(grid.rows_, cell.row + 1);
        grid.cols_ = std::max(grid.cols_, cell.col + 1);
        grid.cells_.push_back(cell);
    }

    grid.lookup_.assign(static_cast<std::size_t>(grid.rows_) * static_cast<std::size_t>(grid.cols_), -1);
    for (const auto& cell : grid.cells_) {
        auto& slot = grid.lookup_[static_cast<std::size_t>(cell.row) * static_cast<std::size_t>(grid.cols_) +
                                  static_cast<std::size_t>(cell.col)];
        if (slot >= 0) {
            throw InputError("duplicate grid cell at lon " + std::to_string(cell.lon) + " lat " +
                             std::to_string(cell.lat));
        }
        slot = cell.index;
    }
    return grid;
}

int Grid::at(int row, int col) const
{
    if (row < 0 || col < 0 || row >= rows_ || col >= cols_) {
        return -1;
    }
    return lookup_[static_cast<std::size_t>(row) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(col)];
}

std::vector<int> Grid::neighbors(int cell, Connectivity connectivity) const
{
    const auto& c = cells_[static_cast<std::size_t>(cell)];
    std::vector<int> out;
    out.reserve(8);
    for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
            if (dr == 0 && dc == 0) {
                continue;
            }
            if (connectivity == Connectivity::Four && dr != 0 && dc != 0) {
                continue;
            }
            const int idx = at(c.row + dr, c.col + dc);
            if (idx >= 0) {
                out.push_back(idx);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

Scales default_scales(const Grid& grid)
{
    Scales s;
    s.npp = stddev(grid.cells(), &GridCell::npp);
    s.gdd = stddev(grid.cells(), &GridCell::gdd);
    if (!(s.npp > 0.0)) {
        s.npp = 1.0;
    }
    if (!(s.gdd > 0.0)) {
        s.gdd = 1.0;
    }
    return s;
}

double similarity(double npp_a, double gdd_a, double npp_b, double gdd_b, const Scales& scales)
{
    const double s = std::abs(npp_a - npp_b) / scales.npp + std::abs(gdd_a - gdd_b) / scales.gdd;
    return 1.0 / (1.0 + s);
}

double similarity(const GridCell& a, const GridCell& b, const Scales& scales)
{
    return similarity(a.npp, a.gdd, b.npp, b.gdd, scales);
}

Mesh build_regions(const Grid& grid, const MeshOptions& options)
{
    if (!(options.target_area > 0.0)) {
        throw InputError("target region area must be positive");
    }
    const Scales scales = options.scales.value_or(default_scales(grid));
    const auto n = grid.size();
    const auto& cells = grid.cells();

    std::vector<std::vector<int>> neighbors(n);
    for (std::size_t c = 0; c < n; ++c) {
        neighbors[c] = grid.neighbors(static_cast<int>(c), options.connectivity);
    }

    // Cluster ids are cell indices; every cluster starts as its own cell.
    std::vector<int> cluster(n);
    std::iota(cluster.begin(), cluster.end(), 0);
    std::vector<double> cluster_area(n);
    for (std::size_t c = 0; c < n; ++c) {
        cluster_area[c] = cells[c].area;
    }

    Mesh mesh;
    mesh.converged = false;
    for (int iter = 1; iter <= options.max_iterations; ++iter) {
        // Areas are frozen for the sweep; memberships update in ascending cell order.
        const std::vector<double> frozen_area = cluster_area;
        int changes = 0;
        for (std::size_t c = 0; c < n; ++c) {
            int best_cluster = -1;
            double best_weight = -1.0;
            for (int nb : neighbors[c]) {
                const int k = cluster[static_cast<std::size_t>(nb)];
                const double a = frozen_area[static_cast<std::size_t>(k)];
                const double w = similarity(cells[c], cells[static_cast<std::size_t>(nb)], scales) *
                                 a / (a + options.target_area);
                if (w > best_weight || (w == best_weight && k < best_cluster)) {
                    best_weight = w;
                    best_cluster = k;
                }
            }
            if (best_cluster >= 0 && best_cluster != cluster[c]) {
                cluster[c] = best_cluster;
                ++changes;
            }
        }
        std::fill(cluster_area.begin(), cluster_area.end(), 0.0);
        for (std::size_t c = 0; c < n; ++c) {
            cluster_area[static_cast<std::size_t>(cluster[c])] += cells[c].area;
        }
        mesh.iterations = iter;
        if (changes == 0) {
            mesh.converged = true;
            break;
        }
    }

    int pieces = 0;
    const auto component = split_components(grid, cluster, pieces);
    const auto merged = merge_small(grid, component, pieces, options.target_area, scales);

    // Renumber by smallest member cell.
    std::map<int, int> renumber;
    mesh.cell_region.resize(n);
    for (std::size_t c = 0; c < n; ++c) {
        auto [it, inserted] = renumber.try_emplace(merged[c], static_cast<int>(renumber.size()));
        mesh.cell_region[c] = it->second;
    }
    mesh.regions = regions_from_partition(grid, mesh.cell_region);
    return mesh;
}

std::vector<Region> regions_from_partition(const Grid& grid, std::span<const int> cell_region)
{
    if (cell_region.size() != grid.size()) {
        throw InputError("partition does not cover the grid");
    }
    int count = 0;
    for (int r : cell_region) {
        if (r < 0) {
            throw InputError("negative region label in partition");
        }
        count = std::max(count, r + 1);
    }
    std::vector<Region> regions(static_cast<std::size_t>(count));
    std::vector<double> lon_sum(regions.size(), 0.0);
    std::vector<double> lat_sum(regions.size(), 0.0);
    for (const auto& cell : grid.cells()) {
        const auto r = static_cast<std::size_t>(cell_region[static_cast<std::size_t>(cell.index)]);
        regions[r].cells.push_back(cell.index);
        regions[r].area += cell.area;
        lon_sum[r] += cell.area * cell.lon;
        lat_sum[r] += cell.area * cell.lat;
    }
    for (std::size_t r = 0; r < regions.size(); ++r) {
        regions[r].id = static_cast<int>(r);
        if (regions[r].cells.empty()) {
            throw InputError("region " + std::to_string(r) + " has no cells");
        }
        regions[r].centroid = {lon_sum[r] / regions[r].area, lat_sum[r] / regions[r].area};
    }
    compute_adjacency(regions, grid, cell_region);
    return regions;
}

void compute_adjacency(std::vector<Region>& regions, const Grid& grid, std::span<const int> cell_region)
{
    std::map<std::pair<int, int>, double> shared;
    const double res = grid.resolution();
    for (const auto& cell : grid.cells()) {
        const int ri = cell_region[static_cast<std::size_t>(cell.index)];
        const int east = grid.at(cell.row, cell.col + 1);
        if (east >= 0) {
            const int rj = cell_region[static_cast<std::size_t>(east)];
            if (rj != ri) {
                shared[std::minmax(ri, rj)] += geo::meridional_edge_km(res);
            }
        }
        const int north = grid.at(cell.row + 1, cell.col);
        if (north >= 0) {
            const int rj = cell_region[static_cast<std::size_t>(north)];
            if (rj != ri) {
                const double lat_edge = 0.5 * (cell.lat + grid.cells()[static_cast<std::size_t>(north)].lat);
                shared[std::minmax(ri, rj)] += geo::zonal_edge_km(lat_edge, res);
            }
        }
    }
    for (auto& region : regions) {
        region.neighbors.clear();
    }
    for (const auto& [pair, length] : shared) {
        regions[static_cast<std::size_t>(pair.first)].neighbors.push_back({pair.second, length});
        regions[static_cast<std::size_t>(pair.second)].neighbors.push_back({pair.first, length});
    }
    for (auto& region : regions) {
        std::sort(region.neighbors.begin(), region.neighbors.end(),
                  [](const Neighbor& a, const Neighbor& b) { return a.region < b.region; });
    }
}

bool is_contiguous(const Region& region, const Grid& grid)
{
    if (region.cells.empty()) {
        return false;
    }
    std::set<int> members(region.cells.begin(), region.cells.end());
    std::set<int> seen{region.cells.front()};
    std::deque<int> queue{region.cells.front()};
    while (!queue.empty()) {
        const int c = queue.front();
        queue.pop_front();
        for (int nb : grid.neighbors(c, Connectivity::Four)) {
            if (members.count(nb) && seen.insert(nb).second) {
                queue.push_back(nb);
            }
        }
    }
    return seen.size() == members.size();
}

}  // namespace neolith::mesh
