#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "neolith/dynamics.hpp"
#include "neolith/exchange.hpp"
#include "neolith/parameters.hpp"

namespace neolith {

enum class ExchangeMode { Mixed, DemicOnly, CulturalOnly, None };

ExchangeMode parse_mode(std::string_view text);
std::string_view to_string(ExchangeMode mode);

/// Which threshold marks a local transition as complete.
enum class CompletionRule { RelativeToFinal, Absolute };

/// Initial-state override for one region, used to seed synthetic fixtures.
struct Seed {
    int region = -1;
    std::optional<double> population;
    std::optional<double> technology;
    std::optional<double> agro_share;
    std::optional<double> economies_fraction;
};

struct Scenario {
    ExchangeMode mode = ExchangeMode::Mixed;
    double start_bc = 9500.0;
    double end_bc = 3500.0;
    double dt = 5.0;                 // years
    double output_interval = 100.0;  // years between trajectory snapshots

    double initial_population = 0.01;
    double initial_technology = 1.0;
    double initial_agro_share = 0.04;
    double initial_economies = 0.25;  // N; f = min(1, N / PAE)
    std::optional<Seed> seed;

    CompletionRule completion = CompletionRule::RelativeToFinal;
    double completion_level = 0.9;

    int guard_steps = 10;
    double guard_fraction = 0.2;

    int threads = 1;

    /// Throws InputError when the time axis or step size is invalid.
    void validate() const;
};

/// Exchange coefficients after the scenario mode has been applied.
Parameters effective_parameters(const Parameters& params, ExchangeMode mode);

/// Step-wise constant environments keyed by the sim-BC year at which each
/// slice takes effect.
class EnvironmentSchedule {
public:
    static EnvironmentSchedule constant(std::vector<Environment> env);

    /// Slices may be added in any order; all must cover the same regions.
    void add(double year_bc, std::vector<Environment> env);

    /// The slice in force at `year_bc`: the youngest slice not younger than
    /// `year_bc`, or the oldest slice before the first boundary.
    const std::vector<Environment>& at(double year_bc) const;

    bool empty() const { return slices_.empty(); }
    std::size_t regions() const { return slices_.empty() ? 0 : slices_.front().second.size(); }

private:
    std::vector<std::pair<double, std::vector<Environment>>> slices_;  // descending year
};

/// Q = initial share, T = initial technology, f = min(1, N0 / PAE) (0 where
/// PAE = 0), P = initial density; then the seed override.
std::vector<RegionState> initialize(const Scenario& scenario, std::span<const Environment> env,
                                    const Parameters& params);

struct StepResult {
    std::vector<RegionState> states;
    std::vector<StepAccount> accounts;
    double guard_ratio = 0.0;  // largest |rate| dt relative to the variable's range
    int guard_region = -1;
};

/// One forward-Euler step of local adaptive dynamics plus exchange. Migrant
/// trait carryover is applied as mass-weighted mixing of resident and
/// immigrant traits, which is bounded for any step size. Throws
/// NumericalError on a non-finite rate.
StepResult step(const RegionGraph& graph, std::span<const RegionState> states, std::span<const Environment> env,
                const Parameters& params, double dt, int threads = 1);

struct TransitionRecord {
    int region = 0;
    std::optional<double> onset_bc;       // Q first exceeds 0.5
    std::optional<double> completion_bc;  // Q first exceeds the completion threshold
    std::optional<double> immigrant_fraction;  // demic share of the ledger at completion
};

struct Snapshot {
    double year_bc = 0.0;
    std::vector<RegionState> states;
    std::vector<SourceShares> shares;
    std::vector<double> economies;  // N = f PAE
};

struct RunResult {
    std::vector<Snapshot> trajectory;
    std::vector<TransitionRecord> transitions;
    SourceLedger ledger;
    std::vector<RegionState> final_states;
    int steps = 0;
};

/// Integrates a scenario from start to end and reports snapshots, transition
/// timing and source attribution. Throws NumericalError if the step-size guard
/// trips during the first `guard_steps` steps or a rate is non-finite.
RunResult run(const Scenario& scenario, const RegionGraph& graph, const EnvironmentSchedule& environment,
              const Parameters& params);

}  // namespace neolith
