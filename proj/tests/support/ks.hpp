#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace kh::testing {

// Two-sided one-sample Kolmogorov-Smirnov statistic.
inline double ks_statistic(std::vector<double> xs, const std::function<double(double)>& cdf)
{
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0;
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
        double f = cdf(xs[i]);
        d = std::max({d, (i + 1) / n - f, f - i / n});
    }
    return d;
}

// Asymptotic p-value with the Stephens small-sample correction.
inline double ks_pvalue(double d, std::size_t n)
{
    double sn = std::sqrt(static_cast<double>(n));
    double lam = (sn + 0.12 + 0.11 / sn) * d;
    if (lam < 0.2)
        return 1.0;
    double sum = 0;
    for (int k = 1; k <= 100; ++k)
    {
        double term = 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lam * lam);
        sum += term;
        if (std::abs(term) < 1e-16)
            break;
    }
    return std::clamp(sum, 0.0, 1.0);
}

inline double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

} // namespace kh::testing
