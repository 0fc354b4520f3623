#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "certificates.hpp"
#include "config.hpp"
#include "fit.hpp"
#include "parallel.hpp"

namespace kh {

struct SnapshotRow
{
    double t = 0;
    double tv = 0;
    double tv_stderr = 0;
    double wtv = 0;
    double wtv_stderr = 0;
    double bound = 0;   // certified bound on tv
    double wbound = 0;  // certified bound on wtv, +inf when none
};

struct FitOutcome
{
    std::optional<DecayFit> fit;
    std::string error;
};

struct RunReport
{
    Certificate certificate;
    std::string weight_name;
    double mu0_V = 0;
    double noise_floor = 0;
    double weighted_noise_floor = 0;
    std::vector<SnapshotRow> rows;
    FitOutcome tv_fit;
    FitOutcome wtv_fit;
    // tv - 3 stderr - noise floor above the bound
    int violations = 0;
    int weighted_violations = 0;
    // without the noise-floor allowance
    int literal_violations = 0;
    int literal_weighted_violations = 0;
};

// Certificate, simulation, distances and fits; writes nothing.
RunReport run_experiment(const ExperimentConfig& c, const Execution& exec = {});

std::string snapshots_csv(const std::vector<SnapshotRow>& rows);
std::string summary_text(const ExperimentConfig& c, const RunReport& r);

struct ValidationItem
{
    std::string check;
    bool ok = true;
    std::string message;
};

struct ValidationReport
{
    std::vector<ValidationItem> items;
    std::vector<std::string> warnings;
    bool ok() const;
    std::string text() const;
};

// Drift parameters by sampling, kernel positivity and binning coverage.
// Never simulates.
ValidationReport validate_experiment(const ExperimentConfig& c);

inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;
inline constexpr int exit_config = 2;
inline constexpr int exit_violation = 3;

// Command bodies for the CLI; they report on `out` and `err` and return the
// process exit code.
int command_run(const ExperimentConfig& c, const Execution& exec, std::ostream& out, std::ostream& err);
int command_validate(const ExperimentConfig& c, std::ostream& out);
int command_certificate(const ExperimentConfig& c, std::ostream& out, std::ostream& err);

} // namespace kh
