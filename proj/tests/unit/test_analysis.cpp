#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "fixtures.hpp"
#include "neolith/analysis.hpp"
#include "neolith/errors.hpp"
#include "support/oracles.hpp"

using namespace neolith;
using namespace neolith::analysis;

TEST_CASE("great-circle distances")
{
    CHECK(great_circle_km({12.0, 45.0}, {12.0, 45.0}) == 0.0);
    CHECK(great_circle_km({0.0, 0.0}, {1.0, 0.0}) == doctest::Approx(111.19492664455874).epsilon(1e-12));
    CHECK(great_circle_km({0.0, 0.0}, {180.0, 0.0}) == doctest::Approx(20015.086796020572).epsilon(1e-12));
}

TEST_CASE("great-circle distance is symmetric")
{
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> lon(-180.0, 180.0);
    std::uniform_real_distribution<double> lat(-90.0, 90.0);
    for (int k = 0; k < 1000; ++k) {
        const LonLat a{lon(rng), lat(rng)};
        const LonLat b{lon(rng), lat(rng)};
        CHECK(great_circle_km(a, b) == great_circle_km(b, a));
    }
}

TEST_CASE("exactly linear lags give the generating speed")
{
    std::vector<LagPoint> pts;
    for (int k = 0; k < 20; ++k) {
        const double d = 150.0 * k;
        pts.push_back({d, 8000.0 - d});
    }
    const auto r = lag_distance(pts, 8000.0);
    CHECK(r.fit.slope == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.fit.r2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.fit.n == 20);
}

TEST_CASE("two points define the line")
{
    const std::vector<LagPoint> pts{{100.0, 7900.0}, {900.0, 7500.0}};
    const auto r = lag_distance(pts, 8000.0);
    CHECK(r.fit.slope == doctest::Approx(2.0));
    CHECK(r.fit.intercept == doctest::Approx(-100.0));
    CHECK(r.fit.r2 == doctest::Approx(1.0));
}

TEST_CASE("a degenerate sample has no slope")
{
    const std::vector<LagPoint> same_age{{100.0, 7000.0}, {500.0, 7000.0}, {900.0, 7000.0}};
    CHECK_THROWS_AS(lag_distance(same_age, 8000.0), DegenerateFitError);
    const std::vector<double> x{1.0};
    CHECK_THROWS_AS(ordinary_least_squares(x, x), DegenerateFitError);
}

TEST_CASE("slope of a noisy cloud is recovered")
{
    const LonLat center{35.5, 33.9};
    const auto sites = fixtures::linear_sites(600, 0.72, 300.0, 20240611, center, 8500.0, 5000.0);
    std::vector<LagPoint> pts;
    for (const auto& s : sites) {
        pts.push_back({great_circle_km({s.lon, s.lat}, center), s.median_bc});
    }
    const auto r = lag_distance(pts, 8500.0);
    CHECK(std::abs(r.fit.slope - 0.72) / 0.72 <= 0.05);
    CHECK(r.fit.r2 > 0.0);
    CHECK(r.fit.r2 <= 1.0);
}

TEST_CASE("least squares matches the two-pass oracle on random data")
{
    std::mt19937_64 rng(77);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t size = 3 + static_cast<std::size_t>(trial);
        std::vector<double> x(size), y(size);
        const double slope = 5.0 * n(rng);
        for (std::size_t k = 0; k < size; ++k) {
            x[k] = 1000.0 + 300.0 * n(rng);
            y[k] = slope * x[k] + 50.0 * n(rng);
        }
        const auto fit = ordinary_least_squares(x, y);
        const auto want = oracle::two_pass_ols(x, y);
        CHECK(std::abs(fit.slope - static_cast<double>(want.slope)) <= 1e-12 * std::abs(static_cast<double>(want.slope)));
        CHECK(std::abs(fit.intercept - static_cast<double>(want.intercept)) <=
              1e-12 * std::max(1.0, std::abs(static_cast<double>(want.intercept))) * 1e3);
        CHECK(std::abs(fit.r2 - static_cast<double>(want.r2)) <= 1e-12);
        CHECK(fit.r2 >= 0.0);
        CHECK(fit.r2 <= 1.0);
    }
}

TEST_CASE("the early front is the low quantile of each distance bin")
{
    std::vector<LagPoint> pts;
    for (int k = 0; k <= 100; ++k) {
        pts.push_back({100.0, 8000.0 - 10.0 * k});  // lags 0..1000 in the first bin
        pts.push_back({700.0, 7000.0 - 10.0 * k});  // lags 1000..2000 in the second
    }
    const auto r = lag_distance(pts, 8000.0, LagOptions{500.0, 0.05});
    REQUIRE(r.front.size() == 2);
    CHECK(r.front[0].lower_km == 0.0);
    CHECK(r.front[0].upper_km == 500.0);
    CHECK(r.front[0].count == 101);
    CHECK(r.front[0].front_lag == doctest::Approx(50.0));
    CHECK(r.front[1].lower_km == 500.0);
    CHECK(r.front[1].front_lag == doctest::Approx(1050.0));
}

TEST_CASE("quantiles interpolate between order statistics")
{
    const std::vector<double> v{4.0, 1.0, 3.0, 2.0};
    CHECK(quantile(v, 0.0) == 1.0);
    CHECK(quantile(v, 1.0) == 4.0);
    CHECK(quantile(v, 0.5) == doctest::Approx(2.5));
    CHECK(quantile(v, 1.0 / 3.0) == doctest::Approx(2.0));
    CHECK_THROWS_AS(quantile({}, 0.5), std::invalid_argument);
}

TEST_CASE("quantiles are monotone and ignore sample order")
{
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-100.0, 100.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> v(37);
        for (auto& x : v) {
            x = u(rng);
        }
        auto shuffled = v;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        auto raised = v;
        for (auto& x : raised) {
            x += std::abs(u(rng));
        }
        double prev = -1e300;
        for (double p = 0.0; p <= 1.0; p += 0.01) {
            const double q = quantile(v, p);
            CHECK(q >= prev);
            CHECK(quantile(shuffled, p) == q);
            CHECK(quantile(raised, p) >= q);
            prev = q;
        }
    }
}

TEST_CASE("broadening scales with the square root of area")
{
    CHECK(broadening_sigma(360e3, 0.5, 1.0) == doctest::Approx(300.0).epsilon(1e-12));
    CHECK(broadening_sigma(4.0 * 360e3, 0.5, 1.0) == doctest::Approx(2.0 * broadening_sigma(360e3, 0.5, 1.0)));
    CHECK(broadening_sigma(360e3, 0.0, 1.0) == 0.0);
}

TEST_CASE("a zero-width kernel is a single bin")
{
    const auto d = broaden_timing(7234.0, broadening_sigma(1e5, 0.0), 100.0);
    REQUIRE(d.mass.size() == 1);
    CHECK(d.mass[0] == 1.0);
    CHECK(d.bin_start[0] == 7200.0);
}

TEST_CASE("one standard deviation holds about 68 percent of the kernel")
{
    const auto d = broaden_timing(8000.0, 200.0, 100.0);
    double inside = 0.0;
    double total = 0.0;
    for (std::size_t k = 0; k < d.mass.size(); ++k) {
        total += d.mass[k];
        if (d.bin_start[k] >= 7800.0 && d.bin_start[k] < 8200.0) {
            inside += d.mass[k];
        }
        CHECK(d.mass[k] >= 0.0);
    }
    CHECK(inside == doctest::Approx(0.6826894921370859).epsilon(1e-12));
    CHECK(std::abs(total - 1.0) <= 1e-9);
}

TEST_CASE("the timing kernel sums to one")
{
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> year(5000.0, 9000.0);
    std::uniform_real_distribution<double> sigma(1.0, 800.0);
    for (int k = 0; k < 200; ++k) {
        const auto d = broaden_timing(year(rng), sigma(rng), 50.0);
        const double total = std::accumulate(d.mass.begin(), d.mass.end(), 0.0);
        CHECK(std::abs(total - 1.0) <= 1e-9);
    }
}

TEST_CASE("focus histograms select sites by radius or region")
{
    const LonLat centroid{20.0, 45.0};
    SiteRecord at;
    at.lon = centroid.lon;
    at.lat = centroid.lat;
    at.median_bc = 6750.0;
    SiteRecord far = at;
    const auto p = fixtures::destination(centroid, 90.0, 201.0);
    far.lon = p.lon;
    far.lat = p.lat;
    const std::vector<SiteRecord> sites{at, far};

    const auto h = focus_histogram(sites, centroid, 200.0, 100.0);
    CHECK(h.total() == 1);
    const auto none_inside = focus_histogram(sites, centroid, 200.0, 100.0, [](LonLat) { return false; });
    CHECK(none_inside.total() == 1);
    const auto all_inside = focus_histogram(sites, centroid, 200.0, 100.0, [](LonLat) { return true; });
    CHECK(all_inside.total() == 2);
    CHECK(focus_histogram({}, centroid, 200.0, 100.0).total() == 0);
    CHECK_FALSE(focus_histogram({}, centroid, 200.0, 100.0).mode().has_value());
}

TEST_CASE("a site cluster peaks in its century")
{
    const LonLat centroid{20.0, 45.0};
    std::mt19937_64 rng(68);
    std::uniform_real_distribution<double> in_century(6700.0, 6799.0);
    std::uniform_real_distribution<double> spread(6000.0, 7500.0);
    std::uniform_real_distribution<double> bearing(0.0, 360.0);
    std::uniform_real_distribution<double> dist(0.0, 150.0);
    std::vector<SiteRecord> sites;
    for (int k = 0; k < 17; ++k) {
        SiteRecord s;
        const auto at = fixtures::destination(centroid, bearing(rng), dist(rng));
        s.lon = at.lon;
        s.lat = at.lat;
        s.median_bc = k < 9 ? in_century(rng) : spread(rng);
        sites.push_back(s);
    }
    const auto h = focus_histogram(sites, centroid, 200.0, 100.0);
    CHECK(h.total() == 17);
    REQUIRE(h.mode().has_value());
    CHECK(*h.mode() == 6700.0);
}

TEST_CASE("the data anchor is the oldest site near the centre")
{
    const LonLat c{35.5, 33.9};
    std::vector<SiteRecord> sites(3);
    sites[0].lon = c.lon;
    sites[0].lat = c.lat;
    sites[0].median_bc = 8200.0;
    sites[1] = sites[0];
    sites[1].median_bc = 8600.0;
    const auto away = fixtures::destination(c, 0.0, 500.0);
    sites[2].lon = away.lon;
    sites[2].lat = away.lat;
    sites[2].median_bc = 9900.0;
    CHECK(oldest_site_bc(sites, c, 200.0) == 8600.0);
    CHECK_FALSE(oldest_site_bc(std::vector<SiteRecord>{sites[2]}, c, 200.0).has_value());
}

TEST_CASE("immigrant maps flag regions that never complete")
{
    std::vector<TransitionRecord> t(3);
    t[0] = {0, 8000.0, 7900.0, 0.0};
    t[1] = {1, 7800.0, std::nullopt, std::nullopt};
    t[2] = {2, 7600.0, 7500.0, 0.4};
    const auto m = immigrant_map(t);
    REQUIRE(m.size() == 3);
    CHECK(m[0].fraction == 0.0);
    CHECK_FALSE(m[1].fraction.has_value());
    CHECK(m[2].fraction == 0.4);
}

TEST_CASE("a closed single region has no immigrants")
{
    const RegionGraph g({1e4}, std::span<const Edge>{});
    Scenario s;
    s.mode = ExchangeMode::Mixed;
    s.initial_population = 1.0;
    s.seed = Seed{0, std::nullopt, 4.0, 0.9, 1.0};
    const auto r = run(s, g, EnvironmentSchedule::constant({Environment{0.6, 2.0, 1.0}}), Parameters{});
    const auto m = immigrant_map(r.transitions);
    REQUIRE(m[0].fraction.has_value());
    CHECK(*m[0].fraction == 0.0);
}
