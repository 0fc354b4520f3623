#pragma once

#include <cstdint>
#include <vector>

#include "domain.hpp"

namespace kh {

// Empirical law of the process: N particles plus per-particle stream state.
struct Ensemble
{
    int dim = 1;
    double t = 0.0;
    std::uint64_t seed = 0;
    std::vector<PhasePoint> points;
    std::vector<std::uint64_t> rng_block;
    std::vector<std::uint64_t> jumps;

    std::size_t size() const { return points.size(); }

    static Ensemble from_points(int d, std::vector<PhasePoint> pts, std::uint64_t seed,
                                double t = 0.0);
    // N copies of one phase point.
    static Ensemble dirac(int d, const PhasePoint& z, std::size_t n, std::uint64_t seed);
};

} // namespace kh
