#include "kinetic_harris/ensemble.hpp"

namespace kh {

Ensemble Ensemble::from_points(int d, std::vector<PhasePoint> pts, std::uint64_t seed, double t)
{
    check_dimension(d);
    Ensemble e;
    e.dim = d;
    e.t = t;
    e.seed = seed;
    e.rng_block.assign(pts.size(), 0);
    e.jumps.assign(pts.size(), 0);
    e.points = std::move(pts);
    return e;
}

Ensemble Ensemble::dirac(int d, const PhasePoint& z, std::size_t n, std::uint64_t seed)
{
    return from_points(d, std::vector<PhasePoint>(n, z), seed);
}

} // namespace kh
