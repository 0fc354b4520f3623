#pragma once

#include <string>
#include <vector>

namespace kh {

enum class DecayModel
{
    Exponential,  // d = C e^{-rate t}
    Algebraic     // d = C (1 + t)^{-rate}
};

std::string to_string(DecayModel m);

struct DecayFit
{
    DecayModel model = DecayModel::Exponential;
    double rate = 0;
    double log_C = 0;
    double rate_stderr = 0;
    double r2 = 0;  // weighted coefficient of determination
    double t_lo = 0;
    double t_hi = 0;
    int points = 0;
};

// Weighted least squares of log d on t (exponential) or log(1 + t)
// (algebraic), weights (d / stderr)^2 with stderr / d floored at
// min_relative_error; all-zero stderrs give an unweighted fit. Points before t_min are skipped and
// the window closes at the first point with d < floor_factor * stderr or
// d < bias_floor.
DecayFit fit_decay(const std::vector<double>& times, const std::vector<double>& d,
                   const std::vector<double>& stderrs, DecayModel model, double t_min = 0.0,
                   double bias_floor = 0.0, double floor_factor = 5.0);

inline constexpr double min_relative_error = 1e-3;

} // namespace kh
