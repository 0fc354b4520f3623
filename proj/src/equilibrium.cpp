#include "kinetic_harris/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kinetic_harris/errors.hpp"
#include "kinetic_harris/potential.hpp"

namespace kh {

namespace {
constexpr int envelope_cells = 4096;
constexpr double envelope_pad = 1.02;
constexpr double tail_level = 50.0;  // Phi(rmax) - Phi(0): neglected mass ~ e^{-50}
} // namespace

double equilibrium_normalizer(const Potential& phi, int d, const QuadratureConfig& q)
{
    if (!phi.drift_params())
        throw PreconditionViolated("equilibrium normalizer needs a confining potential");
    return radial_integral([&](double r) { return std::exp(-phi.radial_value(r)); }, d, q);
}

Equilibrium::Equilibrium(DomainSpec domain, const QuadratureConfig& q, double acceptance_floor)
    : domain_(std::move(domain)), quad_(q)
{
    if (domain_.is_torus())
        return;
    const Potential& phi = *domain_.potential;
    z_ = equilibrium_normalizer(phi, domain_.dim, q);
    phi0_ = phi.radial_value(0.0);
    rmax_ = phi.sublevel_radius(phi0_ + tail_level);
    cell_ = rmax_ / envelope_cells;
    height_.resize(envelope_cells);
    cumulative_.resize(envelope_cells);
    double total = 0.0;
    for (int i = 0; i < envelope_cells; ++i)
    {
        double h = 0.0;
        for (int k = 0; k <= 16; ++k)
            h = std::max(h, radial_weight(cell_ * (i + k / 16.0)));
        height_[i] = envelope_pad * h;
        total += height_[i] * cell_;
        cumulative_[i] = total;
    }
    double mass = z_ * std::exp(phi0_) / sphere_area(domain_.dim);
    acceptance_ = mass / total;
    if (acceptance_ < acceptance_floor)
        throw EnvelopeRejected("equilibrium envelope acceptance " + std::to_string(acceptance_) +
                               " below floor");
}

double Equilibrium::radial_weight(double r) const
{
    return std::pow(r, domain_.dim - 1) * std::exp(-(domain_.potential->radial_value(r) - phi0_));
}

Vec Equilibrium::sample_position(CounterRng& rng) const
{
    int d = domain_.dim;
    if (domain_.is_torus())
    {
        Vec x{};
        for (int i = 0; i < d; ++i)
            x[i] = rng.uniform();
        return wrap_torus(x, d);
    }
    double total = cumulative_.back();
    for (int attempt = 0; attempt < 1000; ++attempt)
    {
        double u = rng.uniform() * total;
        auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
        std::size_t cell = std::min<std::size_t>(it - cumulative_.begin(), cumulative_.size() - 1);
        double r = cell_ * (static_cast<double>(cell) + rng.uniform());
        double w = radial_weight(r);
        if (w > height_[cell])
            throw EnvelopeRejected("radial envelope violated at r = " + std::to_string(r));
        if (rng.uniform() * height_[cell] <= w)
            return r * sample_sphere(rng, d);
    }
    throw EnvelopeRejected("no equilibrium position accepted after 1000 proposals");
}

PhasePoint Equilibrium::sample(CounterRng& rng) const
{
    PhasePoint z;
    z.x = sample_position(rng);
    z.v = sample_maxwellian(rng, domain_.dim);
    return z;
}

double Equilibrium::position_density(const Vec& x) const
{
    if (domain_.is_torus())
        return 1.0;
    return std::exp(-domain_.potential->value(x)) / z_;
}

double Equilibrium::expect_radial(const std::function<double(double)>& f) const
{
    if (domain_.is_torus())
        throw PreconditionViolated("radial expectation is defined for whole space only");
    const Potential& phi = *domain_.potential;
    return radial_integral([&](double r) { return f(r) * std::exp(-phi.radial_value(r)); },
                           domain_.dim, quad_) /
           z_;
}

double Equilibrium::position_quantile_radius(double tail) const
{
    if (domain_.is_torus())
        return 0.5 * std::sqrt(static_cast<double>(domain_.dim));
    const Potential& phi = *domain_.potential;
    int d = domain_.dim;
    auto tail_mass = [&](double r0) {
        auto g = [&](double r) { return std::pow(r, d - 1) * std::exp(-phi.radial_value(r)); };
        return sphere_area(d) * integrate(g, r0, std::numeric_limits<double>::infinity(), quad_) / z_;
    };
    double lo = 0.0;
    double hi = 1.0;
    while (tail_mass(hi) > tail)
        hi *= 2.0;
    for (int i = 0; i < 100 && hi - lo > 1e-10 * hi; ++i)
    {
        double mid = 0.5 * (lo + hi);
        (tail_mass(mid) > tail ? lo : hi) = mid;
    }
    return hi;
}

Ensemble sample_equilibrium(const Equilibrium& eq, std::size_t n, std::uint64_t seed, StreamTag tag,
                            const Execution& exec)
{
    std::vector<PhasePoint> pts(n);
    parallel_for(n, exec, [&](std::size_t i) {
        CounterRng rng(seed, stream_id(tag, i));
        pts[i] = eq.sample(rng);
    });
    return Ensemble::from_points(eq.dim(), std::move(pts), seed);
}

} // namespace kh
