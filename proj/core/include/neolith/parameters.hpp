#pragma once

namespace neolith {

/// Per-trait adaptation speeds: the factor between a trait's rate of change
/// and the fitness gradient with respect to that trait.
struct Flexibility {
    double technology = 2.0;
    double agro_share = 1.0;
    double economies = 10.0;
};

/// Global model parameters. Defaults are a self-consistent calibration for
/// synthetic landscapes; real-data runs are expected to override them.
struct Parameters {
    // Relative growth rate and its damping terms.
    double growth_coefficient = 0.004;     // a^-1
    double loss_coefficient = 0.004;       // a^-1 (persons km^-2)^-1
    double impact_coefficient = 0.02;      // environmental impact of sqrt(T)*P
    double overhead_coefficient = 0.04;    // organisational overhead per unit technology
    double loss_mitigation_scale = 12.0;   // technology e-folding of the loss term

    Flexibility flexibility{};

    // Exchange coefficients, with and without resettlement of people.
    double exchange_people = 0.02;
    double exchange_info = 2.0;
    bool exchange_agro_share = false;  // let cultural contact transmit Q as well

    // Biogeographic transfer functions.
    double npp_food_peak = 1100.0;         // g m^-2 a^-1, FEP maximum
    double npp_domestication_peak = 550.0; // g m^-2 a^-1, LAE scale
    double continental_economies_max = 5.0;
    double gdd_saturation = 1500.0;        // degC day at which TLI reaches 1

    double technology_floor = 0.05;

    /// Throws InputError on negative or non-finite entries.
    void validate() const;
};

}  // namespace neolith
