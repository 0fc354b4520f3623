#include "kinetic_harris/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kinetic_harris/errors.hpp"
#include "kinetic_harris/optimize.hpp"
#include "kinetic_harris/potential.hpp"
#include "kinetic_harris/quasirandom.hpp"

namespace kh {

namespace {

constexpr double sup_pad = 1e-9;

double pad_up(double k) { return k + sup_pad * (1.0 + std::abs(k)); }

DriftParams require_drift(const Potential& phi, double p, bool bracket)
{
    auto dp = phi.drift_params_for(p, bracket);
    if (!dp)
        throw DriftParamsMissing("potential " + phi.name() + " has no drift parameters for growth " +
                                 std::string(bracket ? "<x>^" : "|x|^") + std::to_string(p));
    return *dp;
}

void require_nonnegative(const Potential& phi)
{
    if (phi.lower_bound() < 0)
        throw PreconditionViolated("drift constants assume Phi >= 0");
}

// sup_{t >= 0} k t^q - t / 4 for q in (0, 1)
double power_gap_sup(double k, double q)
{
    if (k <= 0)
        return 0.0;
    double t = std::pow(4.0 * k * q, 1.0 / (1.0 - q));
    return k * std::pow(t, q) - 0.25 * t;
}

// Largest r with bound(r) >= floor, scanning by doubling; bound must decrease
// eventually.
double radius_until_below(const std::function<double(double)>& bound, double floor)
{
    double r = 1.0;
    while (r < 1e8 && (bound(r) >= floor || bound(2.0 * r) >= bound(r)))
        r *= 2.0;
    return r;
}

double mean_chi(int d)
{
    return std::sqrt(2.0) * std::tgamma(0.5 * (d + 1)) / std::tgamma(0.5 * d);
}

} // namespace

std::string to_string(LyapunovForm f)
{
    switch (f)
    {
        case LyapunovForm::TorusBGKTrivial: return "torus-bgk-trivial";
        case LyapunovForm::TorusBoltzmannV2: return "torus-boltzmann-v2";
        case LyapunovForm::ConfinedBGK: return "confined-bgk";
        case LyapunovForm::ConfinedBoltzmann: return "confined-boltzmann";
        case LyapunovForm::SubgeometricBGK: return "subgeometric-bgk";
        case LyapunovForm::SubgeometricBoltzmann: return "subgeometric-boltzmann";
        default: return "custom";
    }
}

LyapunovSpec LyapunovSpec::torus_bgk_trivial()
{
    LyapunovSpec s;
    s.form = LyapunovForm::TorusBGKTrivial;
    s.c0 = 1;
    s.c_phi = 0;
    s.c_kin = 0;
    return s;
}

LyapunovSpec LyapunovSpec::torus_boltzmann_v2()
{
    LyapunovSpec s;
    s.form = LyapunovForm::TorusBoltzmannV2;
    s.c_phi = 0;
    s.c_kin = 2;
    return s;
}

LyapunovSpec LyapunovSpec::confined_bgk()
{
    LyapunovSpec s;
    s.form = LyapunovForm::ConfinedBGK;
    s.c0 = 1;
    s.a = 0.25;
    s.b = 0.125;
    return s;
}

LyapunovSpec LyapunovSpec::confined_boltzmann(double alpha, double beta)
{
    LyapunovSpec s;
    s.form = LyapunovForm::ConfinedBoltzmann;
    s.a = alpha;
    s.b = beta;
    return s;
}

LyapunovSpec LyapunovSpec::subgeometric_bgk()
{
    LyapunovSpec s = confined_bgk();
    s.form = LyapunovForm::SubgeometricBGK;
    return s;
}

LyapunovSpec LyapunovSpec::subgeometric_boltzmann(double alpha, double beta)
{
    LyapunovSpec s;
    s.form = LyapunovForm::SubgeometricBoltzmann;
    s.a = alpha;
    s.b = beta;
    s.bracket_weights = true;
    return s;
}

LyapunovSpec LyapunovSpec::kinetic_energy()
{
    LyapunovSpec s;
    s.c_phi = 0;
    return s;
}

void LyapunovSpec::validate() const
{
    if (c0 < 0 || c_phi < 0 || c_kin < 0 || b < 0)
        throw ConstraintViolated("Lyapunov coefficients must be nonnegative");
    if (a != 0)
    {
        // |a X.v| <= c_kin |v|^2/2 + b Y needs a^2 < 2 c_kin b (plain) or
        // 4 a^2 < b for the bracket form with c_kin = 1.
        bool ok = bracket_weights ? 4.0 * a * a < b * c_kin : a * a < 2.0 * b * c_kin;
        if (!ok)
            throw ConstraintViolated(bracket_weights ? "need 4 a^2 < b" : "need a^2 < 2 b");
    }
    if (!(q > 0) || q > 1)
        throw ConstraintViolated("drift exponent q must lie in (0, 1]");
}

double LyapunovSpec::eval(const PhasePoint& z, const Potential* phi) const
{
    double v = c0 + 0.5 * c_kin * norm2(z.v);
    if (phi && c_phi != 0)
        v += c_phi * phi->value(z.x);
    if (a != 0 || b != 0)
    {
        if (bracket_weights)
        {
            double bx = bracket(z.x);
            v += a * dot(z.x, z.v) / bx + b * bx;
        }
        else
        {
            v += a * dot(z.x, z.v) + b * norm2(z.x);
        }
    }
    return v;
}

namespace {

// Transport part T* V = v . grad_x V - grad Phi . grad_v V.
double transport_part(const LyapunovSpec& s, const PhasePoint& z, const Potential* phi)
{
    Vec g = phi ? phi->gradient(z.x) : Vec{};
    double vg = dot(z.v, g);
    double out = (s.c_phi - s.c_kin) * vg;
    if (s.a == 0 && s.b == 0)
        return out;
    double v2 = norm2(z.v);
    double xv = dot(z.x, z.v);
    if (s.bracket_weights)
    {
        double bx = bracket(z.x);
        double b3 = bx * bx * bx;
        out += s.a * (v2 / bx - xv * xv / b3 - dot(z.x, g) / bx);
        out += s.b * xv / bx;
    }
    else
    {
        out += s.a * (v2 - dot(z.x, g));
        out += 2.0 * s.b * xv;
    }
    return out;
}

Vec weight_field(const LyapunovSpec& s, const Vec& x)
{
    if (s.bracket_weights)
        return (1.0 / bracket(x)) * x;
    return x;
}

const Potential* potential_of(const DomainSpec& domain)
{
    return domain.is_torus() ? nullptr : domain.potential.get();
}

} // namespace

double generator_apply_bgk(const LyapunovSpec& spec, const PhasePoint& z, const DomainSpec& domain)
{
    const int d = domain.dim;
    // L*(|v|^2) = d - |v|^2, L*(X . v) = -X . v, L* of x-only terms is 0
    double out = 0.5 * spec.c_kin * (d - norm2(z.v));
    if (spec.a != 0)
        out -= spec.a * dot(weight_field(spec, z.x), z.v);
    return out + transport_part(spec, z, potential_of(domain));
}

double generator_apply_boltzmann(const LyapunovSpec& spec, const PhasePoint& z,
                                 const DomainSpec& domain, const CollisionOperator& op)
{
    const double gb = op.momentum_transfer();
    double s = norm(z.v);
    double out = 0.0;
    if (spec.c_kin != 0)
        out += 0.5 * spec.c_kin * gb * (op.energy_moment(s) - s * s * op.rel_speed_moment(s));
    if (spec.a != 0 && s > 0)
        out -= spec.a * gb * op.drift_moment(s) * dot(weight_field(spec, z.x), z.v) / s;
    return out + transport_part(spec, z, potential_of(domain));
}

double generator_apply(const LyapunovSpec& spec, const PhasePoint& z, const ProcessSpec& process)
{
    if (process.kind == ProcessKind::BGK)
        return generator_apply_bgk(spec, z, process.domain);
    return generator_apply_boltzmann(spec, z, process.domain, *process.collision);
}

// -- drift constants ----------------------------------------------------------

LyapunovSpec drift_constants_confined_bgk(const Potential& phi, int d)
{
    require_nonnegative(phi);
    DriftParams dp = require_drift(phi, 2.0, false);
    LyapunovSpec s = LyapunovSpec::confined_bgk();
    const double lam = std::min({dp.gamma1, dp.gamma2, 1.0}) / 4.0;
    // U V + lam V, maximized over v at fixed x (completion of squares):
    // F(r) = d/2 + lam + lam Phi - r Phi'/4 + (lam/8 + lam^2/(16 (1 - 2 lam))) r^2
    const double quad = lam / 8.0 + lam * lam / (16.0 * (1.0 - 2.0 * lam));
    auto F = [&](double r) {
        return 0.5 * d + lam + lam * phi.radial_value(r) - 0.25 * r * phi.radial_slope(r) + quad * r * r;
    };
    // beyond r1 the drift inequality puts F below F(0)
    double kappa = 0.25 * dp.gamma1 - quad;
    double r1 = std::sqrt(std::max(0.0, 0.25 * dp.A - lam * phi.radial_value(0.0)) / kappa);
    double hi = 1.01 * std::max(1.0, r1);
    Extremum best = maximize_on_interval(F, 0.0, hi, 4000);
    s.lambda = lam;
    s.K = pad_up(best.value);
    s.q = 1.0;
    s.audit = {{"gamma1", dp.gamma1, "potential drift inequality"},
               {"gamma2", dp.gamma2, "potential drift inequality"},
               {"A", dp.A, "potential drift inequality"},
               {"a", s.a, "Lyapunov cross coefficient"},
               {"b", s.b, "Lyapunov position coefficient"},
               {"lambda", lam, "min(gamma1, gamma2, 1) / 4"},
               {"K", s.K, "sup of U V + lambda V after completing the square in v"},
               {"K_argmax_r", best.x, "radius attaining K"}};
    s.validate();
    return s;
}

BoltzmannMomentBounds boltzmann_moment_bounds(const CollisionOperator& op, double s_max)
{
    const double g = op.gamma();
    const int d = op.dim();
    BoltzmannMomentBounds b;
    b.gamma_b = op.momentum_transfer();
    auto w = [&](double s) { return 1.0 + std::pow(s, g); };
    auto br = [&](double s, double e) { return std::pow(1.0 + s * s, 0.5 * e); };
    const int n = 1500;
    const double lo_pad = 1.0 - 1e-6;
    const double hi_pad = 1.0 + 1e-6;
    // the limits as s -> infinity close each extremum
    double lim_n = g > 0 ? 1.0 : 0.5;
    double lim_p1 = (g > 0 ? 1.0 : 0.5) * mean_chi(d);
    double lim_m = (g > 0 ? 1.0 : 0.5) * d;
    b.A0 = lo_pad * std::min(lim_n, minimize_on_interval([&](double s) {
        return op.rel_speed_moment(s) / w(s); }, 0.0, s_max, n).value);
    b.C1 = hi_pad * std::max(lim_p1, maximize_on_interval([&](double s) {
        return op.speed_moment(s) / w(s); }, 0.0, s_max, n).value);
    b.C2 = hi_pad * std::max(lim_m, maximize_on_interval([&](double s) {
        return op.energy_moment(s) / w(s); }, 0.0, s_max, n).value);
    double inf_ratio = std::min(1.0, minimize_on_interval([&](double s) {
        return op.rel_speed_moment(s) / br(s, g); }, 0.0, s_max, n).value);
    b.alpha1 = lo_pad * 0.5 * b.gamma_b * inf_ratio;
    auto gap = [&](double s) {
        return b.gamma_b * (op.energy_moment(s) - s * s * op.rel_speed_moment(s)) +
               b.alpha1 * br(s, g + 2.0);
    };
    Extremum e2 = maximize_on_interval(gap, 0.0, s_max, n);
    if (e2.x > 0.9 * s_max)
        throw NonConvergedQuadrature("energy moment bound not attained inside the speed window");
    b.alpha2 = pad_up(e2.value);
    b.C_xv = hi_pad * b.gamma_b * std::max(1.0, maximize_on_interval([&](double s) {
        return std::abs(op.drift_moment(s)) / br(s, g + 1.0); }, 0.0, s_max, n).value);
    return b;
}

LyapunovSpec drift_constants_torus_boltzmann(const CollisionOperator& op)
{
    BoltzmannMomentBounds mb = boltzmann_moment_bounds(op);
    LyapunovSpec s = LyapunovSpec::torus_boltzmann_v2();
    const double gb = mb.gamma_b;
    const double lam_max = mb.A0 * gb;
    const double slope = mb.C1 * (1.0 + 0.5 * gb);
    const double eps_max = lam_max / slope;

    // exact U V = gamma_b (m(s) - s^2 n(s)) tabulated once
    const int n = 6000;
    const double s_max = 60.0;
    std::vector<double> sv(n + 1);
    std::vector<double> base(n + 1);
    for (int i = 0; i <= n; ++i)
    {
        double x = s_max * i / n;
        sv[i] = x;
        base[i] = gb * (op.energy_moment(x) - x * x * op.rel_speed_moment(x));
    }
    auto K_of = [&](double lam) {
        double k = -std::numeric_limits<double>::infinity();
        for (int i = 0; i <= n; ++i)
            k = std::max(k, base[i] + lam * sv[i] * sv[i]);
        return k;
    };
    auto lam_of = [&](double eps) { return lam_max - eps * slope; };
    Extremum best = golden_section_max([&](double eps) {
        double lam = lam_of(eps);
        return lam * lam / K_of(lam);
    }, 1e-6 * eps_max, (1.0 - 1e-6) * eps_max);
    const double lam = lam_of(best.x);
    Extremum k = maximize_on_interval([&](double x) {
        return gb * (op.energy_moment(x) - x * x * op.rel_speed_moment(x)) + lam * x * x;
    }, 0.0, s_max, 3000);
    if (k.x > 0.9 * s_max)
        throw NonConvergedQuadrature("torus Boltzmann drift gap not attained inside the speed window");
    s.lambda = lam;
    s.K = pad_up(std::max(k.value, K_of(lam)));
    s.audit = {{"gamma_b", gb, "momentum transfer m_b (1 - mean cosine) / 2"},
               {"A0", mb.A0, "inf E|v-v*|^gamma / (1 + |v|^gamma)"},
               {"C1", mb.C1, "sup E|v-v*|^gamma |v*| / (1 + |v|^gamma)"},
               {"C2", mb.C2, "sup E|v-v*|^gamma |v*|^2 / (1 + |v|^gamma)"},
               {"epsilon", best.x, "Young splitting, maximizes lambda^2 / K"},
               {"lambda", lam, "A0 gamma_b - epsilon C1 (1 + gamma_b / 2)"},
               {"K", s.K, "sup over speeds of U V + lambda |v|^2"}};
    return s;
}

LyapunovSpec drift_constants_confined_boltzmann(const Potential& phi, const CollisionOperator& op)
{
    require_nonnegative(phi);
    const double g = op.gamma();
    DriftParams dp = require_drift(phi, g + 2.0, true);
    BoltzmannMomentBounds mb = boltzmann_moment_bounds(op);
    const double c = 2.0 + mb.C_xv;
    const double p = (g + 2.0) / (g + 1.0);
    const double eps_max = std::pow(mb.alpha1 * (g + 2.0) / (4.0 * c * (g + 1.0)), (g + 1.0) / (g + 2.0));
    const double eps = 0.9 * eps_max;
    const double alpha_max = std::pow(dp.gamma1 * (g + 2.0) * std::pow(eps, g + 2.0) / c, 1.0 / (g + 1.0));
    const double alpha = std::min({0.9 * alpha_max, 0.25 * mb.alpha1, 0.49});
    const double beta = alpha;
    const double a_v = 0.5 * mb.alpha1 - alpha - c * std::pow(eps, p) * (g + 1.0) / (g + 2.0);
    const double a_x = alpha * dp.gamma1 - c * std::pow(alpha, g + 2.0) / ((g + 2.0) * std::pow(eps, g + 2.0));
    if (!(a_v > 0) || !(a_x > 0))
        throw ConstraintViolated("confined Boltzmann smallness conditions failed");
    const double lam = std::min({a_v / (0.5 + 0.5 * alpha), a_x / (1.5 * alpha), alpha * dp.gamma2});
    const double K_proof = mb.alpha2 / 2.0 + alpha * dp.A;

    // Exact U V + lam V reduced to (|x|, |v|): the x.v terms are linear in the
    // cosine, so their sup is |coefficient|.
    const double gb = mb.gamma_b;
    auto inner = [&](double s) {
        double B = std::abs(-alpha * gb * op.drift_moment(s) + (2.0 * beta + lam * alpha) * s);
        auto h = [&](double r) {
            return -alpha * r * phi.radial_slope(r) + lam * phi.radial_value(r) + lam * beta * r * r + r * B;
        };
        auto bound = [&](double r) {
            return alpha * dp.A - alpha * dp.gamma1 * std::pow(1.0 + r * r, 0.5 * (g + 2.0)) +
                   lam * beta * r * r + r * B;
        };
        double hi = radius_until_below(bound, h(0.0) - 1.0);
        double part = maximize_on_interval(h, 0.0, hi, 1000).value;
        return 0.5 * gb * (op.energy_moment(s) - s * s * op.rel_speed_moment(s)) +
               (alpha + 0.5 * lam) * s * s + part;
    };
    Extremum num = maximize_on_interval(inner, 0.0, 40.0, 400);
    const double K_num = pad_up(num.value) + 1e-6 * std::abs(num.value);
    LyapunovSpec s = LyapunovSpec::confined_boltzmann(alpha, beta);
    s.lambda = lam;
    s.K = std::min(K_proof, K_num);
    s.q = 1.0;
    s.audit = {{"gamma1", dp.gamma1, "drift inequality with <x>^{gamma+2}"},
               {"gamma2", dp.gamma2, "drift inequality with <x>^{gamma+2}"},
               {"A", dp.A, "drift inequality with <x>^{gamma+2}"},
               {"gamma_b", gb, "momentum transfer"},
               {"alpha1", mb.alpha1, "L*(|v|^2) <= -alpha1 <v>^{gamma+2} + alpha2"},
               {"alpha2", mb.alpha2, "L*(|v|^2) <= -alpha1 <v>^{gamma+2} + alpha2"},
               {"C_xv", mb.C_xv, "|L*(x.v)| <= C_xv <v>^{gamma+1} |x|"},
               {"epsilon", eps, "0.9 of the velocity sign threshold"},
               {"alpha", alpha, "min(0.9 alpha_max, alpha1/4, 0.49), beta = alpha"},
               {"lambda", lam, "quadratic form equivalence"},
               {"K_proof", K_proof, "alpha2/2 + alpha A"},
               {"K_numeric", K_num, "sup of exact U V + lambda V over (|x|, |v|)"},
               {"K", s.K, "min(K_proof, K_numeric)"}};
    s.validate();
    return s;
}

LyapunovSpec drift_constants_subgeometric_bgk(const Potential& phi, int d, double beta)
{
    if (!(beta > 0) || !(beta < 1))
        throw PreconditionViolated("subgeometric exponent beta must lie in (0, 1)");
    require_nonnegative(phi);
    DriftParams dp = require_drift(phi, 2.0 * beta, true);
    LyapunovSpec s = LyapunovSpec::subgeometric_bgk();
    const double q = beta;
    const double lam = std::min({dp.gamma1, dp.gamma2, 1.0}) / 4.0;
    // V <= 1 + Phi + 5|v|^2/8 + |x|^2/4 and subadditivity of t^q split the
    // sup of U V + lam V^q into a velocity and a position part.
    const double vel = power_gap_sup(lam * std::pow(0.625, q), q);
    auto h = [&](double r) {
        return lam * std::pow(phi.radial_value(r), q) + lam * std::pow(0.25, q) * std::pow(r, 2.0 * q) -
               0.25 * r * phi.radial_slope(r);
    };
    const double c_r = 0.25 * dp.gamma1 - lam * std::pow(0.25, q);
    const double cq = std::pow(q, q / (1.0 - q)) - std::pow(q, 1.0 / (1.0 - q));
    double need = (lam * cq + 0.25 * dp.A - h(0.0)) / c_r;
    double r_hi = 1.0;
    if (need > 0)
        r_hi = std::max(1.0, std::sqrt(std::max(0.0, std::pow(need, 1.0 / q) - 1.0)));
    r_hi *= 1.01;
    Extremum pos = maximize_on_interval([&](double u) { return h(r_hi * u * u * u); }, 0.0, 1.0, 20000);
    s.lambda = lam;
    s.q = q;
    s.K = pad_up(0.5 * d + lam + vel + pos.value);
    s.audit = {{"gamma1", dp.gamma1, "drift inequality with <x>^{2 beta}"},
               {"gamma2", dp.gamma2, "drift inequality with <x>^{2 beta}"},
               {"A", dp.A, "drift inequality with <x>^{2 beta}"},
               {"q", q, "drift exponent, phi(s) = 1 + s^q"},
               {"lambda", lam, "min(gamma1, gamma2, 1) / 4"},
               {"K_velocity", vel, "sup of lambda (5/8)^q |v|^{2q} - |v|^2/4"},
               {"K_position", pos.value, "sup of lambda (Phi^q + |x|^{2q}/4^q) - x.grad Phi/4"},
               {"K", s.K, "d/2 + lambda + K_velocity + K_position"}};
    s.validate();
    return s;
}

LyapunovSpec drift_constants_subgeometric_boltzmann(const Potential& phi, const CollisionOperator& op,
                                                    double delta)
{
    if (!(delta > 0))
        throw PreconditionViolated("subgeometric Boltzmann needs delta > 0");
    require_nonnegative(phi);
    const double g = op.gamma();
    DriftParams dp = require_drift(phi, 1.0 + delta, true);
    auto g3 = phi.upper_growth(1.0 + delta);
    if (!g3)
        throw DriftParamsMissing("subgeometric Boltzmann needs Phi <= gamma3 <x>^{1+delta}");
    BoltzmannMomentBounds mb = boltzmann_moment_bounds(op);
    const double q = delta / (1.0 + delta);
    const double beta = mb.alpha1 / 8.0;
    const double alpha = std::min(0.9 * std::sqrt(beta) / 2.0, mb.alpha1 / (8.0 * (mb.C_xv + 1.0)));
    const double lam = 0.5 * alpha * dp.gamma1 / (std::pow(*g3, q) + std::pow(beta, q));
    auto vel = [&](double s) {
        return lam * std::pow(0.5 * s * s + alpha * s, q) -
               0.25 * mb.alpha1 * std::pow(1.0 + s * s, 0.5 * (g + 2.0));
    };
    Extremum ev = maximize_on_interval(vel, 0.0, 40.0, 4000);
    LyapunovSpec s = LyapunovSpec::subgeometric_boltzmann(alpha, beta);
    s.lambda = lam;
    s.q = q;
    s.K = pad_up(mb.alpha2 / 2.0 + alpha * dp.A + std::max(0.0, ev.value));
    s.audit = {{"gamma1", dp.gamma1, "drift inequality with <x>^{1+delta}"},
               {"gamma2", dp.gamma2, "drift inequality with <x>^{1+delta}"},
               {"gamma3", *g3, "Phi <= gamma3 <x>^{1+delta}"},
               {"A", dp.A, "drift inequality with <x>^{1+delta}"},
               {"alpha1", mb.alpha1, "L*(|v|^2) <= -alpha1 <v>^{gamma+2} + alpha2"},
               {"alpha2", mb.alpha2, "L*(|v|^2) <= -alpha1 <v>^{gamma+2} + alpha2"},
               {"C_xv", mb.C_xv, "|L*(x.v)| <= C_xv <v>^{gamma+1} |x|"},
               {"alpha", alpha, "cross coefficient, 4 alpha^2 < beta"},
               {"beta", beta, "alpha1 / 8"},
               {"q", q, "delta / (1 + delta)"},
               {"lambda", lam, "alpha gamma1 / (2 (gamma3^q + beta^q))"},
               {"K", s.K, "alpha2/2 + alpha A + velocity remainder"}};
    s.validate();
    return s;
}

// -- checks -------------------------------------------------------------------

DriftGridReport check_drift_on_grid(const LyapunovSpec& spec, const ProcessSpec& process, int points,
                                    double radius, double tol, const Execution& exec)
{
    const int d = process.dim();
    const Potential* phi = potential_of(process.domain);
    std::vector<double> margin(points);
    std::vector<PhasePoint> where(points);
    parallel_for(static_cast<std::size_t>(points), exec, [&](std::size_t i) {
        PhasePoint z;
        if (process.domain.is_torus())
            for (int k = 0; k < d; ++k)
                z.x[k] = halton(i, k);
        else
            z.x = halton_ball(i, d, radius, 0);
        z.v = halton_ball(i, d, radius, 3);
        double uv = generator_apply(spec, z, process);
        double v = spec.eval(z, phi);
        double rhs = spec.lambda * std::pow(std::max(0.0, v), spec.q);
        double m = uv + rhs - spec.K;
        // relative slack for rounding in large terms
        margin[i] = m - tol * (1.0 + std::abs(uv) + rhs + spec.K);
        where[i] = z;
    });
    DriftGridReport rep;
    rep.points = points;
    rep.worst_margin = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < points; ++i)
    {
        if (margin[i] > 0)
            ++rep.violations;
        if (margin[i] > rep.worst_margin)
        {
            rep.worst_margin = margin[i];
            rep.worst = where[i];
        }
    }
    return rep;
}

EmpiricalDriftReport empirical_drift_check(const ProcessSpec& process, const LyapunovSpec& spec,
                                           const Ensemble& start, double horizon, int steps,
                                           const Execution& exec)
{
    const Potential* phi = potential_of(process.domain);
    auto V = [&](const PhasePoint& z) { return spec.eval(z, phi); };
    EmpiricalDriftReport rep;
    Ensemble e = start;
    double v0 = 0;
    for (int k = 0; k <= steps; ++k)
    {
        double t = start.t + horizon * k / steps;
        if (k > 0)
            e = simulate(e, process, t, exec);
        MeanEstimate m = ensemble_mean(e, V, exec);
        if (k == 0)
            v0 = m.mean;
        double dt = t - start.t;
        double env = spec.q == 1.0 && spec.lambda > 0
                         ? std::exp(-spec.lambda * dt) * v0 + spec.K / spec.lambda
                         : v0 + spec.K * dt;
        rep.times.push_back(t);
        rep.mean.push_back(m.mean);
        rep.stderr_.push_back(m.stderr_);
        rep.envelope.push_back(env);
        if (m.mean > env + 3.0 * m.stderr_)
            rep.pass = false;
    }
    return rep;
}

} // namespace kh
