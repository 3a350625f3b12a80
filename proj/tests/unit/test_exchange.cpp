#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "fixtures.hpp"
#include "neolith/engine.hpp"
#include "neolith/errors.hpp"
#include "neolith/exchange.hpp"

using namespace neolith;

TEST_CASE("equal influence gives no flux")
{
    CHECK(influence_flux({1.0, 2.0, 0.0, 0.0}, {2.0, 1.0, 0.0, 0.0}, 0.1, 1.0) == 0.0);
}

TEST_CASE("influence flux relaxes toward the pairwise mean")
{
    // T_i P_i = 1, T_j P_j = 3, coupling 0.1, sigma 1
    CHECK(influence_flux({1.0, 1.0, 0.0, 0.0}, {3.0, 1.0, 0.0, 0.0}, 0.1, 1.0) ==
          doctest::Approx(0.1).epsilon(1e-15));
}

TEST_CASE("influence flux is antisymmetric")
{
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    for (int k = 0; k < 1000; ++k) {
        const RegionState a{u(rng), u(rng), 0.0, 0.0};
        const RegionState b{u(rng), u(rng), 0.0, 0.0};
        const double c = u(rng) / 100.0;
        CHECK(influence_flux(a, b, c, 0.3) + influence_flux(b, a, c, 0.3) == 0.0);
    }
}

TEST_CASE("coupling is boundary over the geometric mean area")
{
    CHECK(coupling(50.0, 100.0, 400.0) == doctest::Approx(0.25));
    const std::vector<Edge> edges{{0, 1, 50.0}};
    const RegionGraph g({100.0, 400.0}, edges);
    REQUIRE(g.links().size() == 1);
    CHECK(g.links()[0].coupling == doctest::Approx(0.25));
}

TEST_CASE("region graph rejects malformed edges")
{
    const std::vector<Edge> self{{0, 0, 1.0}};
    CHECK_THROWS_AS(RegionGraph({1.0, 1.0}, self), InputError);
    const std::vector<Edge> out{{0, 2, 1.0}};
    CHECK_THROWS_AS(RegionGraph({1.0, 1.0}, out), InputError);
    const std::vector<Edge> twice{{0, 1, 1.0}, {1, 0, 2.0}};
    CHECK_THROWS_AS(RegionGraph({1.0, 1.0}, twice), InputError);
    const std::vector<Edge> ok{{0, 1, 1.0}};
    CHECK_THROWS_AS(RegionGraph({1.0, 0.0}, ok), InputError);
}

TEST_CASE("cultural diffusion of identical traits is zero")
{
    const std::vector<Edge> edges{{0, 1, 10.0}, {1, 2, 10.0}};
    const RegionGraph g({100.0, 100.0, 100.0}, edges);
    const std::vector<RegionState> s{{1.0, 2.0, 0.3, 0.5}, {4.0, 2.0, 0.3, 0.5}, {0.5, 2.0, 0.3, 0.5}};
    const auto fluxes = link_fluxes(g, s, 1.0);
    for (const auto& r : cultural_diffusion(g, s, fluxes, true)) {
        CHECK(r.technology == 0.0);
        CHECK(r.agro_share == 0.0);
        CHECK(r.economies_fraction == 0.0);
    }
}

TEST_CASE("a single donor pulls its receiver's traits")
{
    const std::vector<Edge> edges{{0, 1, 10.0}};
    const RegionGraph g({100.0, 100.0}, edges);
    const std::vector<RegionState> s{{1.0, 1.0, 0.1, 0.2}, {1.0, 2.0, 0.9, 0.7}};
    const std::vector<double> fluxes{0.01};  // toward region 0
    const auto r = cultural_diffusion(g, s, fluxes, false);
    CHECK(r[0].technology == doctest::Approx(0.01));
    CHECK(r[0].economies_fraction == doctest::Approx(0.005));
    CHECK(r[0].agro_share == 0.0);
    // The donor receives nothing.
    CHECK(r[1].technology == 0.0);
    CHECK(r[1].economies_fraction == 0.0);

    const auto with_q = cultural_diffusion(g, s, fluxes, true);
    CHECK(with_q[0].agro_share == doctest::Approx(0.008));
}

TEST_CASE("link fluxes point toward the weaker region")
{
    const std::vector<Edge> edges{{0, 1, 10.0}};
    const RegionGraph g({100.0, 100.0}, edges);
    const std::vector<RegionState> s{{1.0, 1.0, 0.0, 0.0}, {3.0, 1.0, 0.0, 0.0}};
    const auto f = link_fluxes(g, s, 1.0);
    CHECK(f[0] == doctest::Approx(influence_flux(s[0], s[1], 0.1, 1.0)));
    CHECK(f[0] > 0.0);
}

TEST_CASE("zero flux moves nobody")
{
    const std::vector<Edge> edges{{0, 1, 10.0}};
    const RegionGraph g({100.0, 300.0}, edges);
    const std::vector<RegionState> s{{1.0, 2.0, 0.1, 0.2}, {2.0, 1.0, 0.5, 0.6}};
    const auto d = demic_diffusion(g, s, std::vector<double>{0.0});
    CHECK(d.population_rate[0] == 0.0);
    CHECK(d.population_rate[1] == 0.0);
    CHECK(d.inflow[0].mass == 0.0);
}

TEST_CASE("demic exchange between equal areas is mass conserving")
{
    const double area = 250.0;
    const std::vector<Edge> edges{{0, 1, 10.0}};
    const RegionGraph g({area, area}, edges);
    const std::vector<RegionState> s{{1.0, 1.0, 0.2, 0.3}, {2.0, 1.0, 0.2, 0.3}};
    const auto d = demic_diffusion(g, s, std::vector<double>{0.01});
    CHECK(d.population_rate[0] == doctest::Approx(0.02).epsilon(1e-15));
    CHECK(d.population_rate[1] == doctest::Approx(-0.02).epsilon(1e-15));
    CHECK(d.population_rate[0] * area + d.population_rate[1] * area == 0.0);
    CHECK(d.inflow[0].mass == doctest::Approx(0.01 * 2.0 * area));
    CHECK(d.outflow[1] == doctest::Approx(0.01 * 2.0 * area));
    // Identical traits do not drift.
    CHECK(d.trait_rates[0].technology == 0.0);
    CHECK(d.trait_rates[0].agro_share == 0.0);
    CHECK(d.trait_rates[0].economies_fraction == 0.0);
}

TEST_CASE("migrant traits blend toward the donor in proportion to mass")
{
    const std::vector<Edge> edges{{0, 1, 10.0}};
    const RegionGraph g({100.0, 200.0}, edges);
    const std::vector<RegionState> s{{1.0, 1.0, 0.1, 0.2}, {2.0, 3.0, 0.9, 0.8}};
    const double f = 0.01;
    const auto d = demic_diffusion(g, s, std::vector<double>{f});
    const double weight = (2.0 * 200.0) / (1.0 * 100.0);
    CHECK(d.trait_rates[0].technology == doctest::Approx(f * (3.0 - 1.0) * weight));
    CHECK(d.trait_rates[0].agro_share == doctest::Approx(f * (0.9 - 0.1) * weight));
    CHECK(d.inflow[0].agro_share == doctest::Approx(0.9 * f * 2.0 * 200.0));
}

TEST_CASE("random exchange conserves total population exactly in rate")
{
    const auto rg = fixtures::random_graph(30, 25, 12);
    const RegionGraph g(rg.areas, rg.edges);
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<RegionState> s;
    for (std::size_t i = 0; i < g.size(); ++i) {
        s.push_back({5.0 * u(rng), 0.5 + 3.0 * u(rng), u(rng), u(rng)});
    }
    const auto d = demic_diffusion(g, s, link_fluxes(g, s, 0.02));
    long double total = 0.0L;
    long double scale = 0.0L;
    for (std::size_t i = 0; i < g.size(); ++i) {
        total += static_cast<long double>(d.population_rate[i]) * g.areas()[i];
        scale += std::abs(static_cast<long double>(d.population_rate[i]) * g.areas()[i]);
    }
    CHECK(std::abs(static_cast<double>(total)) <= 1e-12 * static_cast<double>(scale));
}

TEST_CASE("two closed regions equilibrate their influence monotonically")
{
    const std::vector<Edge> edges{{0, 1, 100.0}};
    const RegionGraph g({1e4, 1e4}, edges);
    Parameters p;
    p.growth_coefficient = 0.0;
    p.loss_coefficient = 0.0;
    p.flexibility = {0.0, 0.0, 0.0};
    std::vector<RegionState> s{{1.0, 1.0, 0.1, 0.1}, {5.0, 2.0, 0.1, 0.1}};
    const std::vector<Environment> env(2, Environment{0.5, 1.0, 1.0});
    const double initial_gap = std::abs(s[1].technology * s[1].population - s[0].technology * s[0].population);
    double gap = initial_gap;
    for (int k = 0; k < 100000; ++k) {
        s = step(g, s, env, p, 1.0).states;
        const double next = std::abs(s[1].technology * s[1].population - s[0].technology * s[0].population);
        CHECK(next <= gap);
        gap = next;
    }
    CHECK(gap < 1e-3 * initial_gap);
}

TEST_CASE("scenario modes switch exchange channels off")
{
    const Parameters p;
    const auto cultural = effective_parameters(p, ExchangeMode::CulturalOnly);
    CHECK(cultural.exchange_people == 0.0);
    CHECK(cultural.exchange_info == p.exchange_info);
    const auto demic = effective_parameters(p, ExchangeMode::DemicOnly);
    CHECK(demic.exchange_info == 0.0);
    CHECK(demic.exchange_people == p.exchange_people);
    const auto none = effective_parameters(p, ExchangeMode::None);
    CHECK(none.exchange_info == 0.0);
    CHECK(none.exchange_people == 0.0);
}

TEST_CASE("without people exchange populations change only locally")
{
    const std::vector<Edge> edges{{0, 1, 100.0}};
    const RegionGraph g({1e4, 1e4}, edges);
    Parameters p;
    p.growth_coefficient = 0.0;
    p.loss_coefficient = 0.0;
    p.exchange_people = 0.0;
    const std::vector<RegionState> s{{1.0, 1.0, 0.1, 0.1}, {5.0, 2.0, 0.7, 0.4}};
    const std::vector<Environment> env(2, Environment{0.5, 1.0, 1.0});
    const auto next = step(g, s, env, p, 1.0).states;
    CHECK(next[0].population == s[0].population);
    CHECK(next[1].population == s[1].population);
}

TEST_CASE("without information exchange traits move only by local adaptation and migrants")
{
    const std::vector<Edge> edges{{0, 1, 100.0}};
    const RegionGraph g({1e4, 1e4}, edges);
    Parameters p;
    p.flexibility = {0.0, 0.0, 0.0};
    p.exchange_info = 0.0;
    p.exchange_people = 0.0;
    const std::vector<RegionState> s{{1.0, 1.0, 0.1, 0.1}, {5.0, 2.0, 0.7, 0.4}};
    const std::vector<Environment> env(2, Environment{0.5, 1.0, 1.0});
    const auto next = step(g, s, env, p, 1.0).states;
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(next[i].technology == s[i].technology);
        CHECK(next[i].agro_share == s[i].agro_share);
        CHECK(next[i].economies_fraction == s[i].economies_fraction);
    }
}

TEST_CASE("the ledger credits a closed region entirely to local change")
{
    SourceLedger ledger(1);
    StepAccount a;
    a.agro_mass_before = 10.0;
    a.agro_mass_after = 12.0;
    ledger.attribute(std::vector<StepAccount>{a});
    CHECK(ledger.entry(0).local == doctest::Approx(2.0));
    const auto sh = ledger.shares(0);
    CHECK(sh.local == 1.0);
    CHECK(sh.demic == 0.0);
    CHECK(sh.cultural == 0.0);
}

TEST_CASE("the ledger clips a negative residual and rescales to the net gain")
{
    SourceLedger ledger(1);
    StepAccount a;
    a.agro_mass_before = 10.0;
    a.agro_mass_after = 11.0;
    a.immigrant_farmers = 1.5;
    a.cultural_agro_gain = 0.5;
    ledger.attribute(std::vector<StepAccount>{a});
    const auto& e = ledger.entry(0);
    CHECK(e.local == 0.0);
    CHECK(e.demic == doctest::Approx(0.75));
    CHECK(e.cultural == doctest::Approx(0.25));
    for (const double v : {e.demic, e.cultural, e.local}) {
        CHECK(v >= 0.0);
    }
}

TEST_CASE("ledger shares are zero before anything is credited")
{
    const SourceLedger ledger(2);
    const auto sh = ledger.shares(1);
    CHECK(sh.demic == 0.0);
    CHECK(sh.cultural == 0.0);
    CHECK(sh.local == 0.0);
}

TEST_CASE("cultural-only runs credit nothing to migrants")
{
    const auto c = fixtures::corridor(10);
    const auto result = run(fixtures::corridor_scenario(ExchangeMode::CulturalOnly), c.graph(),
                            EnvironmentSchedule::constant(c.env), Parameters{});
    for (std::size_t i = 0; i < result.ledger.size(); ++i) {
        CHECK(result.ledger.entry(static_cast<int>(i)).demic == 0.0);
    }
    for (const auto& snap : result.trajectory) {
        for (const auto& sh : snap.shares) {
            CHECK(sh.demic == 0.0);
        }
    }
}

TEST_CASE("demic-only shares close on a three-region chain")
{
    const auto c = fixtures::corridor(3);
    const auto result = run(fixtures::corridor_scenario(ExchangeMode::DemicOnly), c.graph(),
                            EnvironmentSchedule::constant(c.env), Parameters{});
    for (int i = 0; i < 3; ++i) {
        const auto sh = result.ledger.shares(i);
        CHECK(sh.demic + sh.cultural + sh.local == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(result.ledger.shares(2).demic > 0.0);
    for (const auto& snap : result.trajectory) {
        for (const auto& sh : snap.shares) {
            const double sum = sh.demic + sh.cultural + sh.local;
            CHECK((sum == 0.0 || std::abs(sum - 1.0) <= 1e-12));
        }
    }
}
