#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "kinetic_harris/certificates.hpp"
#include "kinetic_harris/errors.hpp"

namespace kh {

namespace {

constexpr double y_max = 700.0;

} // namespace

SubgeometricRate::SubgeometricRate(double q, double lambda, double C)
    : q_(q)
    , lambda_(lambda)
    , C_(C)
{
    if (!(q > 0) || !(q < 1))
        throw PreconditionViolated("subgeometric exponent q must lie in (0, 1)");
    if (!(lambda > 0) || !(C > 0))
        throw PreconditionViolated("subgeometric rate needs lambda > 0 and C > 0");
    int n = static_cast<int>(y_max / step_);
    cumulative_.resize(n + 1, 0.0);
    for (int k = 0; k < n; ++k)
        cumulative_[k + 1] = cumulative_[k] + segment(k * step_, (k + 1) * step_);
}

// int_{e^{y0}}^{e^{y1}} ds / phi(s) in the variable y = log s
double SubgeometricRate::segment(double y0, double y1) const
{
    auto f = [this](double y) { return std::exp(y) / (1.0 + std::exp(q_ * y)); };
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, y0, y1, 10, 1e-15);
}

double SubgeometricRate::H(double u) const
{
    if (!(u > 0))
        throw PreconditionViolated("H_phi needs u > 0");
    double y = std::log(u);
    if (y < 0)
        return -segment(y, 0.0);
    int k = std::min(static_cast<int>(y / step_), static_cast<int>(cumulative_.size()) - 1);
    return cumulative_[k] + segment(k * step_, y);
}

double SubgeometricRate::H_inverse(double h) const
{
    if (h < 0)
    {
        auto f = [&](double y) { return -segment(y, 0.0) - h; };
        double lo = -1.0;
        while (f(lo) > 0)
        {
            lo *= 2.0;
            if (lo < -700)
                throw PreconditionViolated("H_phi inverse below the range of H_phi");
        }
        std::uintmax_t it = 200;
        auto r = boost::math::tools::toms748_solve(f, lo, 0.0, boost::math::tools::eps_tolerance<double>(52), it);
        return std::exp(0.5 * (r.first + r.second));
    }
    auto pos = std::upper_bound(cumulative_.begin(), cumulative_.end(), h);
    if (pos == cumulative_.end())
        return std::numeric_limits<double>::infinity();
    int k = static_cast<int>(pos - cumulative_.begin()) - 1;
    double y0 = k * step_;
    auto f = [&](double y) { return cumulative_[k] + segment(y0, y) - h; };
    if (f(y0 + step_) <= 0)
        return std::exp(y0 + step_);
    std::uintmax_t it = 200;
    auto r = boost::math::tools::toms748_solve(f, y0, y0 + step_,
                                               boost::math::tools::eps_tolerance<double>(52), it);
    return std::exp(0.5 * (r.first + r.second));
}

double SubgeometricRate::bound(double t, double mu_V) const
{
    double u = H_inverse(lambda_ * t);
    if (!std::isfinite(u))
        return 0.0;
    return C_ * (std::max(mu_V, 1.0) / u + 1.0 / phi(u));
}

double SubgeometricRate::log_slope(double t, double mu_V) const
{
    const double h = 1e-4;
    double up = std::log(bound(t * std::exp(h), mu_V));
    double dn = std::log(bound(t * std::exp(-h), mu_V));
    return (up - dn) / (2.0 * h);
}

double H_half_closed_form(double u)
{
    double r = std::sqrt(u);
    return 2.0 * (r - 1.0) - 2.0 * std::log((1.0 + r) / 2.0);
}

} // namespace kh
