#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "certificates.hpp"
#include "collision.hpp"
#include "distance.hpp"
#include "potential.hpp"

namespace kh {

// Dirac at (x0, v0); exact equilibrium samples; or Pareto-tailed positions
// in a uniform direction with Maxwellian velocities.
enum class InitialLaw
{
    Dirac,
    Equilibrium,
    HeavyTail,
};

const char* to_string(InitialLaw law);

// One experiment, read from an INI file with sections [scenario],
// [potential], [kernel], [simulation], [binning] and [output].
struct ExperimentConfig
{
    ScenarioKind scenario = ScenarioKind::TorusBGK;
    int d = 1;

    std::string potential = "";  // empty: the scenario default
    double potential_c = 1.0;
    double beta = 0.5;   // subgeometric-bgk: Phi = c <x>^{2 beta}
    double delta = 1.0;  // subgeometric-boltzmann: Phi = c <x>^{1 + delta}
    std::optional<DriftParams> declared_drift;

    double kernel_gamma = 0.0;
    double kernel_b0 = 0.0;

    std::size_t N = 100000;
    double t_final = 20.0;
    std::vector<double> snapshots;  // sorted, starts at 0
    std::uint64_t seed = 1;
    double dt = 1e-3;
    InitialLaw initial = InitialLaw::Dirac;
    // heavy-tail start: |x| = tail_scale U^{-1/tail_index}
    double tail_index = 2.5;
    double tail_scale = 1.0;
    Vec x0{};
    Vec v0{};
    double fit_t_min = 0.0;

    int bins = 64;
    double coverage = 0.999;

    std::string output_dir = "out";

    // ignored fields and other non-fatal remarks
    std::vector<std::string> warnings;
};

// key = value overrides; "section.key" or one of the short aliases
// d, N, t, seed, beta, delta.
using ConfigOverrides = std::vector<std::pair<std::string, std::string>>;

// Throws ConfigError naming the offending field.
ExperimentConfig parse_config_text(const std::string& text, const ConfigOverrides& overrides = {});
ExperimentConfig load_config(const std::string& path, const ConfigOverrides& overrides = {});

// Defaults for a named scenario with no file.
ExperimentConfig default_config(ScenarioKind kind, const ConfigOverrides& overrides = {});

// Geometric snapshot grid: 0, then count - 1 points from t_final / 200 to
// t_final.
std::vector<double> geometric_snapshots(double t_final, int count);

PotentialPtr make_potential(const ExperimentConfig& c);
CollisionKernelSpec make_kernel(const ExperimentConfig& c);
Scenario make_scenario(const ExperimentConfig& c);

} // namespace kh
