#include "kinetic_harris/quadrature.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "kinetic_harris/domain.hpp"
#include "kinetic_harris/errors.hpp"

namespace kh {

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureConfig& cfg)
{
    if (a == b)
        return 0.0;
    double error = 0.0;
    double l1 = 0.0;
    double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, a, b, cfg.max_depth, cfg.rel_tol, &error, &l1);
    double allowed = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(value));
    if (!std::isfinite(value) || error > allowed)
    {
        throw NonConvergedQuadrature("quadrature on [" + std::to_string(a) + ", " +
                                     std::to_string(b) + "] reached error " +
                                     std::to_string(error));
    }
    return value;
}

double radial_integral(const std::function<double(double)>& f, int d, const QuadratureConfig& cfg)
{
    auto g = [&](double r) { return std::pow(r, d - 1) * f(r); };
    return sphere_area(d) *
           integrate(g, 0.0, std::numeric_limits<double>::infinity(), cfg);
}

} // namespace kh
