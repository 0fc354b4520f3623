#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <utility>

#include <boost/math/tools/minima.hpp>

namespace kh {

struct Extremum
{
    double x = 0;
    double value = 0;
};

// Max of f on [lo, hi]: uniform grid of n cells, then Brent on the cells
// around the best grid point.
inline Extremum maximize_on_interval(const std::function<double(double)>& f, double lo, double hi,
                                     int n = 2000)
{
    Extremum best{lo, f(lo)};
    int best_i = 0;
    for (int i = 1; i <= n; ++i)
    {
        double x = lo + (hi - lo) * i / n;
        double y = f(x);
        if (y > best.value)
        {
            best = {x, y};
            best_i = i;
        }
    }
    double a = lo + (hi - lo) * std::max(0, best_i - 1) / n;
    double b = lo + (hi - lo) * std::min(n, best_i + 1) / n;
    if (b > a)
    {
        auto r = boost::math::tools::brent_find_minima([&](double x) { return -f(x); }, a, b, 52);
        if (-r.second > best.value)
            best = {r.first, -r.second};
    }
    return best;
}

inline Extremum minimize_on_interval(const std::function<double(double)>& f, double lo, double hi,
                                     int n = 2000)
{
    auto r = maximize_on_interval([&](double x) { return -f(x); }, lo, hi, n);
    return {r.x, -r.value};
}

// Golden-section search for the max of a unimodal f on [lo, hi].
inline Extremum golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                                   double tol = 1e-8, int max_iter = 200)
{
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - g * (b - a);
    double d = a + g * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int it = 0; it < max_iter && (b - a) > tol * (1.0 + std::abs(a) + std::abs(b)); ++it)
    {
        if (fc > fd)
        {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        }
        else
        {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    return fc > fd ? Extremum{c, fc} : Extremum{d, fd};
}

} // namespace kh
