#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include "kinetic_harris/collision.hpp"
#include "kinetic_harris/errors.hpp"

namespace kh {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

template <class F>
double gk(F&& f, double a, double b)
{
    double err = 0;
    double val = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 20, 1e-10,
                                                                               &err);
    if (!std::isfinite(val) || err > std::max(1e-300, 1e-7 * std::abs(val)))
        throw NonConvergedQuadrature("Carleman kernel quadrature error " + std::to_string(err));
    return val;
}

// e^{-x} I_0(x)
double bessel_i0_scaled(double x)
{
    if (x < 600.0)
        return boost::math::cyl_bessel_i(0, x) * std::exp(-x);
    double ix = 1.0 / x;
    return (1.0 + ix / 8.0 + 9.0 * ix * ix / 128.0) / std::sqrt(2.0 * std::numbers::pi * x);
}

} // namespace

double log_gain_kernel_density(const CollisionOperator& op, const Vec& w, const Vec& v)
{
    const int d = op.dim();
    const double g = op.gamma();
    Vec p = v - w;
    double pn = norm(p);
    double p2 = pn * pn;
    auto bq = [&](double q2) { return op.b((q2 - p2) / (p2 + q2)); };
    if (d == 1)
        return -0.5 * v[0] * v[0] - 0.5 * std::log(2.0 * std::numbers::pi) + (g > 0 ? g * std::log(pn) : 0.0) +
               std::log(op.b(-1.0));
    if (pn == 0.0)
        return inf;
    Vec ph = (1.0 / pn) * p;
    double vpar = dot(v, ph);
    // the factor exp(-vpar^2/2) is pulled out of both integrals
    double lead = -0.5 * vpar * vpar;
    if (d == 2)
    {
        Vec e{-ph[1], ph[0], 0.0};
        double vperp = dot(v, e);
        auto f = [&](double t) {
            double s = vperp + t;
            return std::exp(-0.5 * s * s) / (2.0 * std::numbers::pi) *
                   std::pow(p2 + t * t, 0.5 * g) * bq(t * t);
        };
        double integral = gk(f, -inf, -vperp) + gk(f, -vperp, inf);
        return lead + std::log(2.0 / pn * integral);
    }
    double v2 = norm2(v);
    double a = std::sqrt(std::max(0.0, v2 - vpar * vpar));
    auto f = [&](double rho) {
        return std::exp(-0.5 * (rho - a) * (rho - a)) * 2.0 * std::numbers::pi *
               bessel_i0_scaled(rho * a) * std::pow(p2 + rho * rho, 0.5 * (g - 1.0)) *
               bq(rho * rho) * rho;
    };
    // the integrand is concentrated within a few units of rho = a
    double lo = std::max(0.0, a - 12.0);
    double hi = a + 12.0;
    double integral = gk(f, lo, hi) + gk(f, hi, inf);
    if (lo > 0.0)
        integral += gk(f, 0.0, lo);
    return lead + std::log(4.0 / pn * std::pow(2.0 * std::numbers::pi, -1.5) * integral);
}

double gain_kernel_density(const CollisionOperator& op, const Vec& w, const Vec& v)
{
    return std::exp(log_gain_kernel_density(op, w, v));
}

CarlemanBound carleman_lower_bound(double R_L, double r_L, const CollisionOperator& op, int grid)
{
    if (!(R_L > 0) || !(r_L > 0) || grid < 2)
        throw PreconditionViolated("carleman_lower_bound needs positive radii and grid >= 2");
    const int d = op.dim();
    CarlemanBound out;
    out.log_raw_min = inf;
    int n_angle = d == 1 ? 2 : grid;
    for (int i = 0; i < grid; ++i)
    {
        double wn = R_L * i / (grid - 1);
        for (int j = 0; j < grid; ++j)
        {
            double vn = r_L * j / (grid - 1);
            for (int k = 0; k < n_angle; ++k)
            {
                double th = std::numbers::pi * k / (n_angle - 1);
                Vec w{wn, 0.0, 0.0};
                Vec v{};
                if (d == 1)
                    v[0] = std::cos(th) * vn;
                else
                    v = {vn * std::cos(th), vn * std::sin(th), 0.0};
                double val = log_gain_kernel_density(op, w, v);
                if (val < out.log_raw_min)
                {
                    out.log_raw_min = val;
                    out.w_at_min = w;
                    out.v_at_min = v;
                }
            }
        }
    }
    out.log_alpha_L = std::log(0.95) + out.log_raw_min;
    out.raw_min = std::exp(out.log_raw_min);
    out.alpha_L = std::exp(out.log_alpha_L);
    return out;
}

} // namespace kh
