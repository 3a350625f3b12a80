#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "fixtures.hpp"
#include "neolith/dynamics.hpp"
#include "neolith/engine.hpp"
#include "neolith/region_mesh.hpp"

using namespace neolith;

namespace {

void BM_FitnessGradients(benchmark::State& state)
{
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<RegionState> s(1024);
    std::vector<Environment> e(1024);
    for (std::size_t k = 0; k < s.size(); ++k) {
        s[k] = {10.0 * u(rng), 0.05 + 8.0 * u(rng), u(rng), u(rng)};
        e[k] = {u(rng), 5.0 * u(rng), u(rng)};
    }
    const Parameters p;
    for (auto _ : state) {
        for (std::size_t k = 0; k < s.size(); ++k) {
            benchmark::DoNotOptimize(fitness_gradients(s[k], e[k], p));
        }
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(s.size()));
}
BENCHMARK(BM_FitnessGradients);

void BM_EngineStep(benchmark::State& state)
{
    const int regions = static_cast<int>(state.range(0));
    const int threads = static_cast<int>(state.range(1));
    const auto rg = fixtures::random_graph(regions, regions, 3);
    const RegionGraph g(rg.areas, rg.edges);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<RegionState> s;
    std::vector<Environment> env;
    for (int i = 0; i < regions; ++i) {
        s.push_back({u(rng), 1.0 + u(rng), u(rng), u(rng)});
        env.push_back({0.3 + 0.6 * u(rng), 5.0 * u(rng), u(rng)});
    }
    const Parameters p;
    for (auto _ : state) {
        benchmark::DoNotOptimize(step(g, s, env, p, 5.0, threads));
    }
    state.SetItemsProcessed(state.iterations() * regions);
}
BENCHMARK(BM_EngineStep)->Args({100, 1})->Args({1000, 1})->Args({1000, 4})->Args({10000, 1})->Args({10000, 4});

void BM_CorridorRun(benchmark::State& state)
{
    const auto c = fixtures::corridor(static_cast<int>(state.range(0)));
    const auto scenario = fixtures::corridor_scenario(ExchangeMode::Mixed);
    const auto env = EnvironmentSchedule::constant(c.env);
    const auto g = c.graph();
    for (auto _ : state) {
        benchmark::DoNotOptimize(run(scenario, g, env, Parameters{}));
    }
}
BENCHMARK(BM_CorridorRun)->Arg(40)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_BuildRegions(benchmark::State& state)
{
    const int side = static_cast<int>(state.range(0));
    std::mt19937_64 rng(9);
    std::normal_distribution<double> noise(0.0, 30.0);
    std::vector<geo::LonLat> centers;
    std::vector<double> npp;
    std::vector<double> gdd;
    for (int r = 0; r < side; ++r) {
        for (int c = 0; c < side; ++c) {
            centers.push_back({-10.0 + 0.5 * c, 30.0 + 0.5 * r});
            npp.push_back(200.0 + 8.0 * c + noise(rng));
            gdd.push_back(5000.0 - 40.0 * r + noise(rng));
        }
    }
    const auto grid = mesh::Grid::from_cells(centers, npp, gdd, 0.5);
    mesh::MeshOptions opt;
    opt.target_area = 130e3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mesh::build_regions(grid, opt));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(grid.size()));
}
BENCHMARK(BM_BuildRegions)->Arg(40)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
