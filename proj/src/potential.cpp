#include "kinetic_harris/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "kinetic_harris/errors.hpp"
#include "kinetic_harris/quasirandom.hpp"

namespace kh {

double DriftParams::growth(double r) const
{
    return bracket ? std::pow(1.0 + r * r, 0.5 * p) : std::pow(r, p);
}

Vec Potential::gradient(const Vec& x) const
{
    double r = norm(x);
    if (r == 0.0)
        return Vec{};
    return (radial_slope(r) / r) * x;
}

Vec Potential::hessian_apply(const Vec& x, const Vec& y) const
{
    double r = norm(x);
    if (r < 1e-12)
        return radial_curvature(0.0) * y;
    double tangential = radial_slope(r) / r;
    double radial = radial_curvature(r);
    Vec u = (1.0 / r) * x;
    return tangential * y + ((radial - tangential) * dot(u, y)) * u;
}

double Potential::max_on_ball(double R) const
{
    double best = std::max(radial_value(0.0), radial_value(R));
    constexpr int n = 256;
    for (int i = 1; i < n; ++i)
        best = std::max(best, radial_value(R * i / n));
    return best;
}

double Potential::sublevel_radius(double level) const
{
    if (radial_value(0.0) > level)
        return 0.0;
    double hi = 1.0;
    while (radial_value(hi) <= level)
    {
        hi *= 2.0;
        if (hi > 1e12)
            throw PreconditionViolated("potential is not confining at level " + std::to_string(level));
    }
    double lo = hi / 2.0;
    if (radial_value(lo) > level)
        lo = 0.0;
    auto f = [&](double r) { return radial_value(r) - level; };
    std::uintmax_t iters = 200;
    auto tol = boost::math::tools::eps_tolerance<double>(50);
    auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, tol, iters);
    return b;
}

std::optional<double> Potential::upper_growth(double) const { return std::nullopt; }

std::optional<DriftParams> Potential::drift_params_for(double p, bool bracket) const
{
    if (auto natural = drift_params(); natural && natural->p == p && natural->bracket == bracket)
        return natural;

    auto ratio = [&](double r) { return r * radial_slope(r) / radial_value(r); };
    double gamma2 = 0.5 * ratio(1e4);
    DriftParams probe{0, gamma2, 0, p, bracket};
    auto leftover = [&](double r) {
        return (r * radial_slope(r) - gamma2 * radial_value(r)) / probe.growth(r);
    };
    double l1 = leftover(1e3);
    double l2 = leftover(1e4);
    if (!(gamma2 > 0) || !(l1 > 0) || l2 < 0.9 * l1)
        return std::nullopt;
    double gamma1 = std::min(1.0, 0.5 * std::min(l1, l2));
    double A = drift_offset(*this, gamma1, gamma2, p, bracket);
    return DriftParams{gamma1, gamma2, A, p, bracket};
}

double drift_offset(const Potential& phi, double gamma1, double gamma2, double p, bool bracket)
{
    DriftParams dp{gamma1, gamma2, 0, p, bracket};
    auto gap = [&](double r) {
        return gamma1 * dp.growth(r) + gamma2 * phi.radial_value(r) - r * phi.radial_slope(r);
    };
    constexpr int n = 4000;
    constexpr double rmax = 1e4;
    double best = gap(0.0);
    double best_r = 0.0;
    for (int i = 1; i <= n; ++i)
    {
        double s = static_cast<double>(i) / n;
        double r = rmax * s * s * s;
        double g = gap(r);
        if (g > best)
        {
            best = g;
            best_r = r;
        }
    }
    if (best_r > 0.5 * rmax)
        throw DriftParamsMissing("drift inequality gap does not decay; exponent too large for potential");
    // refine locally around the grid maximum
    double lo = std::max(0.0, best_r * 0.8 - 1e-3);
    double hi = best_r * 1.25 + 1e-3;
    auto neg = [&](double r) { return -gap(r); };
    auto [r_star, f_star] = boost::math::tools::brent_find_minima(neg, lo, hi, 52);
    best = std::max(best, -f_star);
    (void)r_star;
    double A = std::max(0.0, best);
    return A + 1e-9 * (1.0 + A);
}

DriftCheck check_drift_params(const Potential& phi, const DriftParams& dp, int d, int samples,
                              double radius)
{
    DriftCheck out;
    out.worst_margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i)
    {
        Vec x = (i == 0) ? Vec{} : halton_ball(static_cast<std::uint64_t>(i), d, radius);
        double r = norm(x);
        double lhs = dot(x, phi.gradient(x));
        double rhs = dp.gamma1 * dp.growth(r) + dp.gamma2 * phi.value(x) - dp.A;
        double margin = lhs - rhs;
        // relative slack for rounding at large |x|
        double scale = 1e-12 * (std::abs(lhs) + std::abs(rhs) + 1.0);
        if (margin < out.worst_margin)
        {
            out.worst_margin = margin;
            out.worst_x = x;
        }
        if (margin < -scale)
            out.ok = false;
        ++out.samples;
    }
    return out;
}

// -- quadratic --------------------------------------------------------------

QuadraticPotential::QuadraticPotential(double c) : c_(c)
{
    if (!(c >= 0))
        throw PreconditionViolated("quadratic potential needs c >= 0");
}

std::optional<DriftParams> QuadraticPotential::drift_params() const
{
    if (c_ <= 0)
        return std::nullopt;
    // x . grad Phi = c|x|^2 = (c/2)|x|^2 + Phi
    return DriftParams{0.5 * c_, 1.0, 0.0, 2.0, false};
}

std::optional<double> QuadraticPotential::upper_growth(double p) const
{
    if (p >= 2.0)
        return 0.5 * c_;
    return std::nullopt;
}

// -- quartic ----------------------------------------------------------------

QuarticPotential::QuarticPotential(double c) : c_(c)
{
    if (!(c > 0))
        throw PreconditionViolated("quartic potential needs c > 0");
}

std::optional<DriftParams> QuarticPotential::drift_params() const
{
    // c r^4 >= r^2 + 2 Phi - 1/(2c), the gap peaking at r^2 = 1/c
    return DriftParams{1.0, 2.0, 0.5 / c_, 2.0, false};
}

// -- c <x>^p ----------------------------------------------------------------

BracketPowerPotential::BracketPowerPotential(double c, double p, std::string name)
    : c_(c), p_(p), name_(std::move(name))
{
    if (!(c > 0))
        throw PreconditionViolated("bracket potential needs c > 0");
    if (!(p > 0 && p <= 2))
        throw PreconditionViolated("bracket potential exponent must lie in (0, 2]");
}

std::shared_ptr<BracketPowerPotential> BracketPowerPotential::subquadratic(double c, double beta)
{
    if (!(beta > 0 && beta < 1))
        throw PreconditionViolated("subquadratic potential needs beta in (0, 1)");
    return std::make_shared<BracketPowerPotential>(c, 2.0 * beta, "subquadratic");
}

std::shared_ptr<BracketPowerPotential> BracketPowerPotential::sublinear_plus(double c, double delta)
{
    if (!(delta > 0 && delta <= 1))
        throw PreconditionViolated("sub-linear-plus potential needs delta in (0, 1]");
    return std::make_shared<BracketPowerPotential>(c, 1.0 + delta, "sublinear-plus");
}

double BracketPowerPotential::radial_value(double r) const
{
    return c_ * std::pow(1.0 + r * r, 0.5 * p_);
}

double BracketPowerPotential::radial_slope(double r) const
{
    return c_ * p_ * r * std::pow(1.0 + r * r, 0.5 * p_ - 1.0);
}

double BracketPowerPotential::radial_curvature(double r) const
{
    double s = 1.0 + r * r;
    return c_ * p_ * std::pow(s, 0.5 * p_ - 2.0) * (1.0 + (p_ - 1.0) * r * r);
}

double BracketPowerPotential::grad_sup(double R) const
{
    // r (1+r^2)^{p/2-1} increases for p >= 1; otherwise it peaks at 1/sqrt(1-p)
    double r = R;
    if (p_ < 1.0)
        r = std::min(R, 1.0 / std::sqrt(1.0 - p_));
    return radial_slope(r);
}

double BracketPowerPotential::hess_sup(double) const
{
    // both Hessian eigenvalues are bounded by c p for p <= 2, attained at 0
    return c_ * p_;
}

std::optional<DriftParams> BracketPowerPotential::drift_params() const
{
    // x . grad Phi = c p (<x>^p - <x>^{p-2}) >= (c p / 2) <x>^p + (p/2) Phi - c p
    return DriftParams{0.5 * c_ * p_, 0.5 * p_, c_ * p_, p_, true};
}

std::optional<double> BracketPowerPotential::upper_growth(double p) const
{
    if (p >= p_)
        return c_;
    return std::nullopt;
}

// -- declared ---------------------------------------------------------------

DeclaredDriftPotential::DeclaredDriftPotential(PotentialPtr base, DriftParams declared)
    : base_(std::move(base)), declared_(declared)
{
}

std::optional<DriftParams> DeclaredDriftPotential::drift_params_for(double p, bool bracket) const
{
    if (declared_.p == p && declared_.bracket == bracket)
        return declared_;
    return base_->drift_params_for(p, bracket);
}

} // namespace kh
