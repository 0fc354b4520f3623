#include "kinetic_harris/domain.hpp"

#include <numbers>
#include <stdexcept>

#include "kinetic_harris/errors.hpp"
#include "kinetic_harris/potential.hpp"

namespace kh {

void check_dimension(int d)
{
    if (d < 1 || d > max_dim)
        throw PreconditionViolated("dimension must be 1, 2 or 3");
}

DomainSpec DomainSpec::torus(int d)
{
    check_dimension(d);
    return DomainSpec{d, Geometry::Torus, nullptr};
}

DomainSpec DomainSpec::whole_space(int d, std::shared_ptr<const Potential> phi)
{
    check_dimension(d);
    if (!phi)
        throw PreconditionViolated("whole-space domain needs a potential");
    return DomainSpec{d, Geometry::WholeSpace, std::move(phi)};
}

double maxwellian_density_at_speed(double speed, int d)
{
    return std::pow(2.0 * std::numbers::pi, -0.5 * d) * std::exp(-0.5 * speed * speed);
}

double maxwellian_density(const Vec& v, int d)
{
    return std::pow(2.0 * std::numbers::pi, -0.5 * d) * std::exp(-0.5 * norm2(v));
}

Vec wrap_torus(const Vec& x, int d)
{
    Vec y = x;
    for (int i = 0; i < d; ++i)
    {
        double w = x[i] - std::floor(x[i]);
        // x slightly below an integer can round up to exactly 1
        y[i] = (w >= 1.0) ? 0.0 : w;
    }
    return y;
}

double sphere_area(int d)
{
    switch (d)
    {
        case 1: return 2.0;
        case 2: return 2.0 * std::numbers::pi;
        case 3: return 4.0 * std::numbers::pi;
    }
    return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

double ball_volume(int d, double r)
{
    return sphere_area(d) * std::pow(r, d) / d;
}

} // namespace kh
