#pragma once

#include <cmath>
#include <cstdint>

#include "domain.hpp"

namespace kh {

inline double radical_inverse(std::uint64_t i, unsigned base)
{
    double inv = 1.0 / base;
    double f = inv;
    double r = 0.0;
    while (i > 0)
    {
        r += f * static_cast<double>(i % base);
        i /= base;
        f *= inv;
    }
    return r;
}

// Halton point in [0,1)^k using the first k primes starting at prime_offset.
inline double halton(std::uint64_t i, int coord)
{
    static constexpr unsigned primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    return radical_inverse(i + 1, primes[coord % 12]);
}

// Quasi-random point in the radius-r ball of R^d built from Halton
// coordinates [first, first + d).
inline Vec halton_ball(std::uint64_t i, int d, double r, int first = 0)
{
    Vec u{};
    if (d == 1)
    {
        u[0] = r * (2.0 * halton(i, first) - 1.0);
        return u;
    }
    // radius from the volume CDF, direction from the remaining coordinates
    double rad = r * std::pow(halton(i, first), 1.0 / d);
    if (d == 2)
    {
        double a = 2.0 * M_PI * halton(i, first + 1);
        u[0] = rad * std::cos(a);
        u[1] = rad * std::sin(a);
        return u;
    }
    double z = 2.0 * halton(i, first + 1) - 1.0;
    double a = 2.0 * M_PI * halton(i, first + 2);
    double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    u[0] = rad * s * std::cos(a);
    u[1] = rad * s * std::sin(a);
    u[2] = rad * z;
    return u;
}

} // namespace kh
