#include "kinetic_harris/collision.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "kinetic_harris/errors.hpp"

namespace kh {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
constexpr double moment_rel_tol = 1e-11;

template <class F>
double gk(F&& f, double a, double b)
{
    double err = 0;
    double l1 = 0;
    double val = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, a, b, 12, moment_rel_tol, &err, &l1);
    if (!std::isfinite(val) || err > std::max(1e-12, 1e-8 * std::abs(val)))
        throw NonConvergedQuadrature("collision moment quadrature error " + std::to_string(err));
    return val;
}

template <class F>
double gauss_fixed(F&& f, double a, double b)
{
    return boost::math::quadrature::gauss<double, 40>::integrate(f, a, b);
}

template <class F>
double gk_inner(F&& f, double a, double b)
{
    double err = 0;
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 10, 1e-13,
                                                                        &err);
}

// e^{-x} I_nu(x) for nu = 0, 1
double bessel_i_scaled(int nu, double x)
{
    if (x < 600.0)
        return boost::math::cyl_bessel_i(nu, x) * std::exp(-x);
    // Hankel expansion, terms (4 nu^2 - (2j - 1)^2) / (8 j x)
    double mu = 4.0 * nu * nu;
    double term = 1.0;
    double series = 1.0;
    for (int j = 1; j < 30; ++j)
    {
        term *= -(mu - (2.0 * j - 1.0) * (2.0 * j - 1.0)) / (8.0 * j * x);
        series += term;
        if (std::abs(term) < 1e-17 * std::abs(series))
            break;
    }
    return series / std::sqrt(2.0 * std::numbers::pi * x);
}

} // namespace

CollisionKernelSpec CollisionKernelSpec::hard_spheres(double gamma, double b0)
{
    CollisionKernelSpec s;
    s.gamma = gamma;
    s.form = AngularForm::Uniform;
    s.b0 = b0;
    return s;
}

CollisionKernelSpec CollisionKernelSpec::tabulated(double gamma, std::vector<double> table)
{
    CollisionKernelSpec s;
    s.gamma = gamma;
    s.form = AngularForm::TabulatedEven;
    s.b_table = std::move(table);
    return s;
}

CollisionOperator::CollisionOperator(const CollisionKernelSpec& spec, int d, double table_speed,
                                     int table_nodes)
    : spec_(spec), d_(d), table_speed_(table_speed)
{
    check_dimension(d);
    if (!(spec_.gamma >= 0))
        throw PreconditionViolated("collision kernel needs gamma >= 0");
    if (spec_.form == AngularForm::Uniform)
    {
        if (spec_.b0 <= 0)
            spec_.b0 = 1.0 / sphere_area(d);
        b_lower_ = b_upper_ = spec_.b0;
    }
    else
    {
        if (spec_.b_table.size() < 2)
            throw PreconditionViolated("tabulated angular kernel needs at least two values");
        auto [lo, hi] = std::minmax_element(spec_.b_table.begin(), spec_.b_table.end());
        b_lower_ = *lo;
        b_upper_ = *hi;
    }
    if (!(b_lower_ > 0))
        throw PreconditionViolated("angular kernel must be bounded below by a positive constant");

    // angular mass and mean cosine
    double m0 = 0;
    double m1 = 0;
    if (d == 1)
    {
        m0 = b(1.0) + b(-1.0);
        m1 = b(1.0) - b(-1.0);
    }
    else if (d == 2)
    {
        m0 = gk([&](double th) { return b(std::cos(th)); }, 0.0, 2.0 * std::numbers::pi);
        m1 = gk([&](double th) { return b(std::cos(th)) * std::cos(th); }, 0.0,
                2.0 * std::numbers::pi);
    }
    else
    {
        m0 = 2.0 * std::numbers::pi * gk([&](double z) { return b(z); }, -1.0, 1.0);
        m1 = 2.0 * std::numbers::pi * gk([&](double z) { return b(z) * z; }, -1.0, 1.0);
    }
    mass_ = m0;
    mean_cos_ = m1 / m0;
    gaussian_moment_ = std::pow(2.0, 0.5 * spec_.gamma) * std::tgamma(0.5 * (d + spec_.gamma)) /
                       std::tgamma(0.5 * d);

    double h = table_speed_ / (table_nodes - 1);
    for (int which = 0; which < 4; ++which)
    {
        std::vector<double> values(table_nodes);
#pragma omp parallel for schedule(dynamic, 16)
        for (int i = 0; i < table_nodes; ++i)
            values[i] = moment_quadrature(h * i, which);
        // moments 0..2 are even in s, the drift moment is odd
        double left = which < 3 ? 0.0 : std::numeric_limits<double>::quiet_NaN();
        tables_.emplace_back(values.begin(), values.end(), 0.0, h, left);
    }
}

double CollisionOperator::b(double z) const
{
    if (spec_.form == AngularForm::Uniform)
        return spec_.b0;
    const auto& t = spec_.b_table;
    double pos = std::min(1.0, std::abs(z)) * static_cast<double>(t.size() - 1);
    std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(pos), t.size() - 2);
    double f = pos - static_cast<double>(i);
    return (1.0 - f) * t[i] + f * t[i + 1];
}

double CollisionOperator::moment_quadrature(double s, int which) const
{
    // Polar coordinates for u = v - v* = r (c e + ...), so that
    // |v*|^2 = a + 2 k (1 - c) with a = (s - r)^2 and k = s r. The angular
    // integral is done in closed form except for the |v*| moment in d = 2.
    double g = spec_.gamma;
    auto angular = [&](double r) {
        double a = (s - r) * (s - r);
        double k = s * r;
        double ea = std::exp(-0.5 * a);
        if (d_ == 1)
        {
            double em = std::exp(-0.5 * (a + 4.0 * k));
            switch (which)
            {
                case 0: return ea + em;
                case 1: return ea * std::sqrt(a) + em * (s + r);
                case 2: return ea * a + em * (a + 4.0 * k);
                default: return r * (ea - em);
            }
        }
        if (d_ == 2)
        {
            // int_0^pi e^{-k (1 - cos th)} (1, cos th) d th
            double i0 = std::numbers::pi * bessel_i_scaled(0, k);
            double i1 = std::numbers::pi * bessel_i_scaled(1, k);
            switch (which)
            {
                case 0: return ea * i0;
                case 1: {
                    // the integrand is a Gaussian of width k^{-1/2} in th for
                    // large k; fixed Gauss rules on [0, 8 k^{-1/2}] and the rest
                    auto f = [&](double th) {
                        double t = 1.0 - std::cos(th);
                        return std::exp(-0.5 * a - k * t) * std::sqrt(a + 2.0 * k * t);
                    };
                    double cut = std::min(std::numbers::pi, 8.0 / std::sqrt(std::max(k, 1e-300)));
                    double v = gauss_fixed(f, 0.0, cut);
                    if (cut < std::numbers::pi)
                        v += gauss_fixed(f, cut, std::numbers::pi);
                    return v;
                }
                case 2: return ea * (a * i0 + 2.0 * k * (i0 - i1));
                default: return ea * r * i1;
            }
        }
        // int_0^2 e^{-k t} (1, t) dt with t = 1 - c
        double j0;
        double j1;
        if (k < 1e-3)
        {
            j0 = 2.0 - 2.0 * k + 4.0 * k * k / 3.0 - 2.0 * k * k * k / 3.0;
            j1 = 2.0 - 8.0 * k / 3.0 + 2.0 * k * k - 16.0 * k * k * k / 15.0;
        }
        else
        {
            double e2 = std::exp(-2.0 * k);
            j0 = -std::expm1(-2.0 * k) / k;
            j1 = (1.0 - e2 * (1.0 + 2.0 * k)) / (k * k);
        }
        switch (which)
        {
            case 0: return ea * j0;
            case 1:
                if (k < 1e-3)
                    return gk_inner([&](double t) {
                        return std::exp(-0.5 * a - k * t) * std::sqrt(a + 2.0 * k * t);
                    }, 0.0, 2.0);
                // (1/2k) int_a^{a+4k} e^{-y/2} sqrt(y) dy
                return std::pow(2.0, 1.5) * std::tgamma(1.5) / (2.0 * k) *
                       (boost::math::gamma_q(1.5, 0.5 * a) -
                        boost::math::gamma_q(1.5, 0.5 * a + 2.0 * k));
            case 2: return ea * (a * j0 + 2.0 * k * j1);
            default: return ea * r * (j0 - j1);
        }
    };
    // radial density factor r^{d-1} |S^{d-2}| (2 pi)^{-d/2}, halved for d = 1
    double norm_c = d_ == 1 ? 1.0 / std::sqrt(2.0 * std::numbers::pi)
                  : d_ == 2 ? 1.0 / std::numbers::pi
                            : std::pow(2.0 * std::numbers::pi, -0.5);
    auto radial = [&](double r) {
        double rg = g == 0.0 ? 1.0 : std::pow(r, g);
        return norm_c * rg * std::pow(r, d_ - 1) * angular(r);
    };
    double hi = s + 40.0;
    if (s == 0.0)
        return gk(radial, 0.0, hi);
    return gk(radial, 0.0, s) + gk(radial, s, hi);
}

double CollisionOperator::table_or_quadrature(const Spline& sp, double s, int which) const
{
    if (s <= table_speed_)
        return sp(s);
    return moment_quadrature(s, which);
}

double CollisionOperator::rel_speed_moment(double s) const
{
    if (spec_.gamma == 0.0)
        return 1.0;
    return table_or_quadrature(tables_[0], s, 0);
}

double CollisionOperator::speed_moment(double s) const
{
    return table_or_quadrature(tables_[1], s, 1);
}

double CollisionOperator::energy_moment(double s) const
{
    if (spec_.gamma == 0.0)
        return static_cast<double>(d_);
    return table_or_quadrature(tables_[2], s, 2);
}

double CollisionOperator::drift_moment(double s) const
{
    if (spec_.gamma == 0.0)
        return s;
    return table_or_quadrature(tables_[3], s, 3);
}

double CollisionOperator::thinning_bound(double segment_energy, double phi_inf) const
{
    if (spec_.gamma == 0.0)
        return mass_;
    double speed = std::sqrt(2.0 * std::max(0.0, segment_energy - phi_inf));
    return 1.01 * kappa_at_speed(speed);
}

std::pair<Vec, Vec> CollisionOperator::collide(const Vec& v, const Vec& v_star, const Vec& sigma)
{
    Vec mid = 0.5 * (v + v_star);
    double half = 0.5 * norm(v - v_star);
    return {mid + half * sigma, mid - half * sigma};
}

Vec CollisionOperator::sample_partner(const Vec& v, CounterRng& rng, int* proposals) const
{
    double g = spec_.gamma;
    if (g == 0.0)
    {
        if (proposals)
            *proposals = 1;
        return sample_maxwellian(rng, d_);
    }
    // Proposal M(v*) (|v|^g + |v*|^g): |v - v*|^g <= c (|v|^g + |v*|^g)
    // with c = max(1, 2^{g-1}), so the acceptance ratio below is <= 1.
    double a = std::pow(norm(v), g);
    double c = g > 1.0 ? std::pow(2.0, g - 1.0) : 1.0;
    double shape = 0.5 * (d_ + g);
    for (int k = 1; k <= max_proposals; ++k)
    {
        Vec vs;
        if (rng.uniform() * (a + gaussian_moment_) < a)
            vs = sample_maxwellian(rng, d_);
        else
            vs = std::sqrt(2.0 * rng.gamma(shape)) * sample_sphere(rng, d_);
        double denom = c * (a + std::pow(norm(vs), g));
        double accept = denom > 0 ? std::pow(norm(v - vs), g) / denom : 0.0;
        if (rng.uniform() < accept)
        {
            if (proposals)
                *proposals = k;
            return vs;
        }
    }
    throw EnvelopeRejected("collision partner rejected " + std::to_string(max_proposals) +
                           " times in a row");
}

Vec CollisionOperator::sample_sigma(const Vec& uhat, CounterRng& rng) const
{
    if (spec_.form == AngularForm::Uniform)
        return sample_sphere(rng, d_);
    for (int k = 0; k < max_proposals; ++k)
    {
        Vec s = sample_sphere(rng, d_);
        if (rng.uniform() * b_upper_ <= b(dot(s, uhat)))
            return s;
    }
    throw EnvelopeRejected("angular sampler rejected too often");
}

CollisionOperator::Sample CollisionOperator::sample(const Vec& v, CounterRng& rng) const
{
    Sample out;
    out.v_star = sample_partner(v, rng, &out.proposals);
    Vec u = v - out.v_star;
    double un = norm(u);
    out.sigma = un > 0 ? sample_sigma((1.0 / un) * u, rng) : sample_sphere(rng, d_);
    auto [vp, vsp] = collide(v, out.v_star, out.sigma);
    out.v_post = vp;
    out.v_star_post = vsp;
    return out;
}

} // namespace kh
