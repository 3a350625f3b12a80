// Writes the synthetic inputs used by the examples and end-to-end tests.
#include <CLI11.hpp>

#include <iostream>

#include "fixtures.hpp"
#include "neolith/errors.hpp"

namespace fx = neolith::fixtures;

int main(int argc, char** argv)
{
    CLI::App app{"synthetic fixtures for the neolith simulator"};
    std::string kind;
    std::string out = "fixtures";
    std::uint64_t seed = 42;
    int count = 600;
    double slope = 0.72;
    double noise = 300.0;
    app.add_option("kind", kind, "two-band, homogeneous, mediterranean, corridor, linear-sites, noisy-sites")
        ->required()
        ->check(CLI::IsMember({"two-band", "homogeneous", "mediterranean", "corridor", "linear-sites",
                               "noisy-sites"}));
    app.add_option("--out", out, "output directory");
    app.add_option("--seed", seed, "random seed for noisy fixtures");
    app.add_option("--count", count, "number of sites");
    app.add_option("--slope", slope, "site front speed, km/a");
    app.add_option("--noise", noise, "site age noise, years");
    CLI11_PARSE(app, argc, argv);

    try {
        const std::filesystem::path dir(out);
        if (kind == "two-band") {
            fx::write_climate(dir / "climate.csv", fx::two_band());
        } else if (kind == "homogeneous") {
            fx::write_climate(dir / "climate.csv", fx::homogeneous());
        } else if (kind == "mediterranean") {
            fx::write_climate(dir / "climate.csv", fx::mediterranean());
        } else if (kind == "corridor") {
            fx::write_corridor_case(dir);
        } else if (kind == "linear-sites") {
            fx::write_sites(dir / "sites.csv", fx::linear_sites(count, 1.0, 0.0, seed));
        } else {
            fx::write_sites(dir / "sites.csv", fx::linear_sites(count, slope, noise, seed));
        }
    } catch (const neolith::InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
