#include <doctest.h>

#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "fixtures.hpp"
#include "neolith/engine.hpp"
#include "neolith/errors.hpp"
#include "neolith/io.hpp"
#include "support/oracles.hpp"

using namespace neolith;

namespace {

const Environment kLand{0.6, 2.0, 1.0};

RegionGraph single_region() { return RegionGraph({1e4}, std::span<const Edge>{}); }

Parameters frozen_culture()
{
    Parameters p;
    p.flexibility = {0.0, 0.0, 0.0};
    return p;
}

Scenario closed(double span, double dt)
{
    Scenario s;
    s.mode = ExchangeMode::None;
    s.start_bc = 9500.0;
    s.end_bc = 9500.0 - span;
    s.dt = dt;
    s.output_interval = span;
    return s;
}

oracle::Coefs coefs(const Parameters& p)
{
    return {p.growth_coefficient, p.loss_coefficient, p.impact_coefficient, p.overhead_coefficient,
            p.loss_mitigation_scale};
}

std::string trajectory_csv(const RunResult& r)
{
    std::ostringstream out;
    io::write_trajectory(out, r.trajectory);
    io::write_transitions(out, r.transitions);
    io::write_ledger(out, r.trajectory);
    return out.str();
}

}  // namespace

TEST_CASE("initial states follow the scenario")
{
    const Scenario s;
    const std::vector<Environment> env{{0.5, 2.0, 1.0}, {0.5, 0.0, 1.0}, {0.5, 0.1, 1.0}};
    const auto st = initialize(s, env, Parameters{});
    CHECK(st[0].economies_fraction == doctest::Approx(0.125));
    CHECK(st[1].economies_fraction == 0.0);
    CHECK(st[2].economies_fraction == 1.0);
    for (const auto& x : st) {
        CHECK(x.population == 0.01);
        CHECK(x.technology == 1.0);
        CHECK(x.agro_share == 0.04);
        CHECK_FALSE(is_neolithic(x));
    }
    CHECK(subsistence_intensity(st[1], env[1]) == doctest::Approx(0.96));
}

TEST_CASE("a seed overrides one region's initial state")
{
    Scenario s;
    s.seed = Seed{1, 3.0, 4.0, 0.9, std::nullopt};
    const std::vector<Environment> env(3, kLand);
    const auto st = initialize(s, env, Parameters{});
    CHECK(st[1].population == 3.0);
    CHECK(st[1].technology == 4.0);
    CHECK(st[1].agro_share == 0.9);
    CHECK(st[1].economies_fraction == doctest::Approx(0.125));
    CHECK(st[0].technology == 1.0);
}

TEST_CASE("a zero step is the identity")
{
    const auto c = fixtures::corridor(5);
    const auto g = c.graph();
    const std::vector<RegionState> s{
        {1.0, 4.0, 0.9, 1.0}, {1.0, 1.0, 0.04, 0.2}, {0.5, 1.2, 0.1, 0.3}, {2.0, 1.0, 0.04, 0.2}, {1.0, 1.0, 0.5, 0.5}};
    const auto next = step(g, s, c.env, Parameters{}, 0.0).states;
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(next[i].population == s[i].population);
        CHECK(next[i].technology == s[i].technology);
        CHECK(next[i].agro_share == s[i].agro_share);
        CHECK(next[i].economies_fraction == s[i].economies_fraction);
    }
}

TEST_CASE("clipped steps keep every state in bounds for any step size")
{
    const auto rg = fixtures::random_graph(20, 15, 5);
    const RegionGraph g(rg.areas, rg.edges);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<RegionState> s;
    std::vector<Environment> env;
    for (std::size_t i = 0; i < g.size(); ++i) {
        s.push_back({10.0 * u(rng), 0.05 + 8.0 * u(rng), u(rng), u(rng)});
        env.push_back({u(rng), 5.0 * u(rng), u(rng)});
    }
    const Parameters p;
    for (double dt : {1.0, 50.0, 1e3, 1e5}) {
        for (const auto& r : step(g, s, env, p, dt).states) {
            CHECK(r.population >= 0.0);
            CHECK(r.technology >= p.technology_floor);
            CHECK(r.agro_share >= 0.0);
            CHECK(r.agro_share <= 1.0);
            CHECK(r.economies_fraction >= 0.0);
            CHECK(r.economies_fraction <= 1.0);
        }
    }
}

TEST_CASE("a non-finite rate aborts with the region id")
{
    const auto c = fixtures::corridor(4);
    std::vector<Environment> env = c.env;
    env[2].fep = std::numeric_limits<double>::quiet_NaN();
    const std::vector<RegionState> s(4, RegionState{1.0, 1.0, 0.04, 0.2});
    try {
        (void)step(c.graph(), s, env, Parameters{}, 1.0);
        FAIL("expected a numerical error");
    } catch (const NumericalError& e) {
        CHECK(e.region() == 2);
    }
}

TEST_CASE("a single closed region follows the population equation")
{
    // Reference: adaptive Dormand-Prince on dP/dt = r(P) P with frozen traits.
    const Parameters p = frozen_culture();
    const auto scenario = closed(500.0, 1.0 / 32.0);
    const auto st0 = initialize(scenario, std::vector<Environment>{kLand}, p);
    const oracle::Env oe{kLand.fep, kLand.pae, kLand.tli};
    const auto oc = coefs(p);
    const oracle::State frozen{0, st0[0].technology, st0[0].agro_share, st0[0].economies_fraction};

    using Vec = std::vector<double>;
    Vec y{st0[0].population};
    auto rhs = [&](const Vec& x, Vec& dxdt, double) {
        oracle::State s = frozen;
        s.P = x[0];
        dxdt[0] = static_cast<double>(oracle::growth_rate(s, oe, oc)) * x[0];
    };
    namespace ode = boost::numeric::odeint;
    ode::integrate_adaptive(ode::make_controlled<ode::runge_kutta_dopri5<Vec>>(1e-13, 1e-13), rhs, y, 0.0, 500.0,
                            0.1);

    const auto result = run(scenario, single_region(), EnvironmentSchedule::constant({kLand}), p);
    CHECK(result.steps == 16000);
    const double got = result.final_states[0].population;
    CHECK(std::abs(got - y[0]) / y[0] <= 1e-4);
    CHECK(got > st0[0].population);
}

TEST_CASE("halving the step size halves the error")
{
    const Parameters p;
    auto final_state = [&](double dt) {
        auto s = closed(400.0, dt);
        s.initial_population = 0.5;
        return run(s, single_region(), EnvironmentSchedule::constant({kLand}), p).final_states[0];
    };
    const auto ref = final_state(1.0 / 64.0);
    std::vector<double> errors;
    for (double dt : {4.0, 2.0, 1.0, 0.5}) {
        const auto x = final_state(dt);
        const double e = std::max({std::abs(x.population - ref.population) / ref.population,
                                   std::abs(x.technology - ref.technology) / ref.technology,
                                   std::abs(x.agro_share - ref.agro_share),
                                   std::abs(x.economies_fraction - ref.economies_fraction)});
        errors.push_back(e);
    }
    for (std::size_t k = 1; k < errors.size(); ++k) {
        const double ratio = errors[k - 1] / errors[k];
        CHECK(ratio > 1.6);
        CHECK(ratio < 2.6);
    }
    CHECK(errors.back() < 1e-2);
}

TEST_CASE("a closed region settles where the growth rate vanishes")
{
    const Parameters p = frozen_culture();
    const RegionState start{0.01, 1.0, 0.04, 0.125};
    const oracle::Env oe{kLand.fep, kLand.pae, kLand.tli};
    auto r_of = [&](double P) {
        return static_cast<double>(oracle::growth_rate(
            {P, start.technology, start.agro_share, start.economies_fraction}, oe, coefs(p)));
    };
    const double upper = kLand.fep / (p.impact_coefficient * std::sqrt(start.technology));
    REQUIRE(r_of(0.0) > 0.0);
    REQUIRE(r_of(upper) < 0.0);
    const auto bracket = boost::math::tools::bisect(
        r_of, 0.0, upper, [](double a, double b) { return std::abs(b - a) <= 1e-14 * std::max(1.0, std::abs(a)); });
    const double p_star = 0.5 * (bracket.first + bracket.second);

    std::vector<RegionState> s{start};
    const auto g = single_region();
    const std::vector<Environment> env{kLand};
    for (int k = 0; k < 40000; ++k) {
        s = step(g, s, env, p, 5.0).states;
    }
    CHECK(s[0].population == doctest::Approx(p_star).epsilon(1e-9));
}

TEST_CASE("the step-size guard rejects a step that is too large")
{
    const auto c = fixtures::corridor(6);
    auto s = fixtures::corridor_scenario(ExchangeMode::Mixed);
    s.dt = 20.0;
    s.output_interval = 100.0;
    CHECK_THROWS_AS(run(s, c.graph(), EnvironmentSchedule::constant(c.env), Parameters{}), NumericalError);

    // A looser guard accepts the same step.
    s.guard_fraction = 1.0;
    CHECK_NOTHROW(run(s, c.graph(), EnvironmentSchedule::constant(c.env), Parameters{}));
}

TEST_CASE("regions without potential economies never turn Neolithic without exchange")
{
    const std::vector<Environment> env{{0.9, 5.0, 1.0}, {0.9, 0.0, 1.0}, {0.9, 5.0, 0.0}};
    const std::vector<Edge> edges{{0, 1, 100.0}, {1, 2, 100.0}};
    const RegionGraph g({1e4, 1e4, 1e4}, edges);
    Scenario s;
    s.mode = ExchangeMode::None;
    const auto result = run(s, g, EnvironmentSchedule::constant(env), Parameters{});
    CHECK_FALSE(result.transitions[1].onset_bc.has_value());
    CHECK_FALSE(result.transitions[2].onset_bc.has_value());
    CHECK_FALSE(is_neolithic(result.final_states[1]));
    CHECK_FALSE(is_neolithic(result.final_states[2]));
}

TEST_CASE("onsets on a seeded corridor increase with distance in every exchange mode")
{
    const auto c = fixtures::corridor(15);
    for (auto mode : {ExchangeMode::Mixed, ExchangeMode::DemicOnly, ExchangeMode::CulturalOnly}) {
        const auto result = run(fixtures::corridor_scenario(mode), c.graph(), EnvironmentSchedule::constant(c.env),
                                Parameters{});
        for (std::size_t i = 1; i < result.transitions.size(); ++i) {
            REQUIRE(result.transitions[i].onset_bc.has_value());
            CHECK(*result.transitions[i].onset_bc < *result.transitions[i - 1].onset_bc);
        }
    }
}

TEST_CASE("cultural-only transitions have no immigrants")
{
    const auto c = fixtures::corridor(12);
    const auto result = run(fixtures::corridor_scenario(ExchangeMode::CulturalOnly), c.graph(),
                            EnvironmentSchedule::constant(c.env), Parameters{});
    int completed = 0;
    for (const auto& t : result.transitions) {
        if (t.completion_bc) {
            ++completed;
            REQUIRE(t.immigrant_fraction.has_value());
            CHECK(*t.immigrant_fraction == 0.0);
        }
    }
    CHECK(completed > 0);
}

TEST_CASE("onset precedes completion")
{
    const auto c = fixtures::corridor(12);
    for (auto mode : {ExchangeMode::Mixed, ExchangeMode::DemicOnly}) {
        const auto result = run(fixtures::corridor_scenario(mode), c.graph(), EnvironmentSchedule::constant(c.env),
                                Parameters{});
        for (const auto& t : result.transitions) {
            if (t.onset_bc && t.completion_bc) {
                CHECK(*t.onset_bc >= *t.completion_bc);
            }
            if (t.immigrant_fraction) {
                CHECK(*t.immigrant_fraction >= 0.0);
                CHECK(*t.immigrant_fraction <= 1.0);
            }
        }
    }
}

TEST_CASE("demic-only immigrant fractions are positive downstream")
{
    const auto c = fixtures::corridor(3);
    const auto result = run(fixtures::corridor_scenario(ExchangeMode::DemicOnly), c.graph(),
                            EnvironmentSchedule::constant(c.env), Parameters{});
    for (int i = 1; i < 3; ++i) {
        const auto& t = result.transitions[static_cast<std::size_t>(i)];
        REQUIRE(t.immigrant_fraction.has_value());
        CHECK(*t.immigrant_fraction > 0.0);
        CHECK(*t.immigrant_fraction <= 1.0);
    }
}

TEST_CASE("runs are bit-identical across repeats and thread counts")
{
    const auto c = fixtures::corridor(30);
    auto s = fixtures::corridor_scenario(ExchangeMode::Mixed);
    const auto a = trajectory_csv(run(s, c.graph(), EnvironmentSchedule::constant(c.env), Parameters{}));
    const auto b = trajectory_csv(run(s, c.graph(), EnvironmentSchedule::constant(c.env), Parameters{}));
    s.threads = 4;
    const auto t = trajectory_csv(run(s, c.graph(), EnvironmentSchedule::constant(c.env), Parameters{}));
    CHECK(a == b);
    CHECK(a == t);
}

TEST_CASE("exchange only adds Neolithic regions on a declining-suitability chain")
{
    // Suitability falls monotonically from the west end.
    std::vector<Environment> env;
    std::vector<double> areas;
    std::vector<Edge> edges;
    for (int i = 0; i < 10; ++i) {
        env.push_back({0.85 - 0.03 * i, 5.0 - 0.45 * i, 1.0 - 0.08 * i});
        areas.push_back(1e4);
        if (i > 0) {
            edges.push_back({i - 1, i, 100.0});
        }
    }
    const RegionGraph g(areas, edges);
    Scenario s;
    s.mode = ExchangeMode::None;
    const auto alone = run(s, g, EnvironmentSchedule::constant(env), Parameters{});
    s.mode = ExchangeMode::Mixed;
    const auto mixed = run(s, g, EnvironmentSchedule::constant(env), Parameters{});
    int alone_count = 0;
    for (std::size_t i = 0; i < env.size(); ++i) {
        if (is_neolithic(alone.final_states[i])) {
            ++alone_count;
            CHECK(is_neolithic(mixed.final_states[i]));
        }
    }
    CHECK(alone_count > 0);
}

TEST_CASE("the absolute completion rule uses the fixed threshold")
{
    const auto c = fixtures::corridor(5);
    auto s = fixtures::corridor_scenario(ExchangeMode::Mixed);
    s.completion = CompletionRule::Absolute;
    s.completion_level = 0.6;
    s.output_interval = s.dt;
    const auto result = run(s, c.graph(), EnvironmentSchedule::constant(c.env), Parameters{});
    const auto& t = result.transitions[3];
    REQUIRE(t.completion_bc.has_value());
    // The snapshot just after completion has Q above the level; the one before is below.
    for (std::size_t k = 1; k < result.trajectory.size(); ++k) {
        const auto& before = result.trajectory[k - 1];
        const auto& after = result.trajectory[k];
        if (before.year_bc >= *t.completion_bc && after.year_bc < *t.completion_bc) {
            CHECK(before.states[3].agro_share <= 0.6);
            CHECK(after.states[3].agro_share > 0.6);
        }
    }
}

TEST_CASE("environment schedules pick the slice in force")
{
    EnvironmentSchedule sched;
    sched.add(8000.0, {Environment{0.2, 1.0, 1.0}});
    sched.add(9000.0, {Environment{0.1, 1.0, 1.0}});
    CHECK(sched.at(9500.0)[0].fep == 0.1);
    CHECK(sched.at(8500.0)[0].fep == 0.1);
    CHECK(sched.at(8000.0)[0].fep == 0.2);
    CHECK(sched.at(7000.0)[0].fep == 0.2);
    CHECK(sched.regions() == 1);
    CHECK_THROWS_AS(sched.add(7000.0, {kLand, kLand}), InputError);
}

TEST_CASE("exchange modes parse and print")
{
    for (auto m : {ExchangeMode::Mixed, ExchangeMode::DemicOnly, ExchangeMode::CulturalOnly, ExchangeMode::None}) {
        CHECK(parse_mode(to_string(m)) == m);
    }
    CHECK_THROWS_AS(parse_mode("sideways"), InputError);
}

TEST_CASE("scenario validation")
{
    Scenario s;
    CHECK_NOTHROW(s.validate());
    s.end_bc = s.start_bc;
    CHECK_THROWS_AS(s.validate(), InputError);
    s = Scenario{};
    s.dt = 0.0;
    CHECK_THROWS_AS(s.validate(), InputError);
    s = Scenario{};
    s.initial_agro_share = 1.5;
    CHECK_THROWS_AS(s.validate(), InputError);
}
