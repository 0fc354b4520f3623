#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "kinetic_harris/certificates.hpp"
#include "kinetic_harris/errors.hpp"
#include "kinetic_harris/optimize.hpp"

namespace kh {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

double log_maxwellian(double speed, int d)
{
    return -0.5 * d * std::log(2.0 * std::numbers::pi) - 0.5 * speed * speed;
}

double log_ball_volume(int d, double r)
{
    return std::log(sphere_area(d) / d) + d * std::log(r);
}

// min over the velocity direction of V at |x| = r, |v| = s
double weight_min(const LyapunovSpec& w, const Potential* phi, double r, double s)
{
    double X = w.bracket_weights ? r / std::sqrt(1.0 + r * r) : r;
    double Y = w.bracket_weights ? std::sqrt(1.0 + r * r) : r * r;
    double p = (phi && w.c_phi != 0) ? w.c_phi * phi->radial_value(r) : 0.0;
    return w.c0 + p + 0.5 * w.c_kin * s * s - std::abs(w.a) * X * s + w.b * Y;
}

// Last point of [0, hi] where g <= level, from a scan and bisection.
double last_below(const std::function<double(double)>& g, double level, double hi, int n = 4000)
{
    double last = -1;
    for (int i = 0; i <= n; ++i)
    {
        double r = hi * i / n;
        if (g(r) <= level)
            last = r;
    }
    if (last < 0)
        return 0.0;
    double lo = last;
    double up = std::min(hi, last + hi / n);
    for (int it = 0; it < 100 && up - lo > 1e-12 * (1.0 + up); ++it)
    {
        double mid = 0.5 * (lo + up);
        (g(mid) <= level ? lo : up) = mid;
    }
    return up;
}

// Doubles r until g(r) > level and keeps growing past it.
double grow_until_above(const std::function<double(double)>& g, double level)
{
    double r = 1.0;
    while (r < 1e9 && (g(r) <= level || g(2.0 * r) <= level))
        r *= 2.0;
    if (r >= 1e9)
        throw PreconditionViolated("weight does not confine: sublevel set is unbounded");
    return 2.0 * r;
}

} // namespace

SmallSetRadii small_set_radii(const LyapunovSpec& spec, const Potential* phi, double level)
{
    SmallSetRadii out;
    auto gx = [&](double r) {
        // min over s of the quadratic in s
        double X = spec.bracket_weights ? r / std::sqrt(1.0 + r * r) : r;
        double s = spec.c_kin > 0 ? std::abs(spec.a) * X / spec.c_kin : 0.0;
        return weight_min(spec, phi, r, s);
    };
    if (phi)
        out.x = 1.01 * last_below(gx, level, grow_until_above(gx, level));
    double xr = out.x;
    auto gv = [&](double s) {
        if (!phi)
            return weight_min(spec, nullptr, 0.0, s);
        return minimize_on_interval([&](double r) { return weight_min(spec, phi, r, s); }, 0.0,
                                    std::max(xr, 1e-9), 400)
            .value;
    };
    out.v = 1.01 * last_below(gv, level, grow_until_above(gv, level), 1000);
    return out;
}

double equilibrium_mean(const LyapunovSpec& spec, const Equilibrium& eq)
{
    const int d = eq.dim();
    double m = spec.c0 + 0.5 * spec.c_kin * d;
    if (eq.domain().is_torus())
        return m;
    const Potential& phi = *eq.domain().potential;
    if (spec.c_phi != 0)
        m += spec.c_phi * eq.expect_radial([&](double r) { return phi.radial_value(r); });
    if (spec.b != 0)
    {
        if (spec.bracket_weights)
            m += spec.b * eq.expect_radial([](double r) { return std::sqrt(1.0 + r * r); });
        else
            m += spec.b * eq.expect_radial([](double r) { return r * r; });
    }
    return m;
}

LyapunovSpec statement_weight(bool bracket)
{
    LyapunovSpec w;
    w.form = LyapunovForm::Custom;
    w.c0 = 1.0;
    w.c_phi = 1.0;
    w.c_kin = 1.0;
    w.a = 0.0;
    w.b = 1.0;
    w.bracket_weights = bracket;
    return w;
}

double weight_ratio_sup(const LyapunovSpec& num, const LyapunovSpec& den, const Potential* phi)
{
    // Both weights are affine in cos(x, v), so the ratio is monotone in it
    // and its sup sits at cos = +-1. Radii run over a log grid.
    std::vector<double> grid{0.0};
    for (int i = 0; i <= 240; ++i)
        grid.push_back(std::pow(10.0, -3.0 + 7.0 * i / 240.0));
    double best = 0.0;
    for (double r : grid)
    {
        if (!phi && r > 0)
            break;
        for (double s : grid)
        {
            for (int sign = -1; sign <= 1; sign += 2)
            {
                PhasePoint z;
                z.x[0] = r;
                z.v[0] = sign * s;
                double a = num.eval(z, phi);
                double b = den.eval(z, phi);
                if (b > 0)
                    best = std::max(best, a / b);
            }
        }
    }
    return 1.01 * best;
}

MinorisationCertificate doeblin_alpha_confined(ProcessKind kind, const Potential& phi,
                                               const CollisionOperator* op, int d, double t,
                                               double K_support, const FlowConfig& cfg,
                                               int jacobian_net, int carleman_grid)
{
    check_dimension(d);
    if (!(t > 0) || !(K_support > 0))
        throw PreconditionViolated("confined minorisation needs t > 0 and K > 0");
    if (kind == ProcessKind::LinearBoltzmann && !op)
        throw PreconditionViolated("linear Boltzmann minorisation needs a collision operator");
    const double phi_inf = phi.lower_bound();
    double H_max = phi.max_on_ball(K_support) + 0.5 * K_support * K_support;
    double R = std::max(phi.sublevel_radius(H_max), K_support);
    double t1 = shooting_time_bound(R, phi);
    double b_max = std::min(t, t1 * (1.0 - 1e-6));
    double C_R = phi.grad_sup(R);
    double phi_R = phi.max_on_ball(R);

    auto eps_of = [&](double R2) {
        double e = std::min(R / (2.0 * R2), R2 / (2.0 * R));
        if (C_R > 0)
            e = std::min(e, std::sqrt(R) / (2.0 * std::sqrt(C_R)));
        return e;
    };
    auto rate_bound = [&](double R2) {
        if (kind == ProcessKind::BGK)
            return 1.0;
        double E0 = phi_R + 0.5 * R2 * R2;
        double Rp = 1.01 * std::sqrt(2.0 * (E0 - phi_inf));
        double vmax = std::max(Rp, R2);
        return op->thinning_bound(phi_R + 0.5 * vmax * vmax, phi_inf);
    };
    // Window choice ignores the Jacobian factor, which is computed once for
    // the chosen window.
    auto objective = [&](double a) {
        double R2 = 4.0 * R / a;
        double eps = eps_of(R2);
        double b = std::min(b_max, t - eps);
        if (!(b > a))
            return -inf;
        return -t * rate_bound(R2) + 2.0 * log_maxwellian(R2, d) + std::log(eps) + std::log(b - a);
    };
    if (!(b_max > 0))
        throw ShootingHorizonExceeded("no admissible shooting window");
    auto best = maximize_on_interval(objective, b_max * 1e-3, b_max * (1.0 - 1e-9), 400);
    if (!std::isfinite(best.value))
        throw ShootingHorizonExceeded("no window [a, b] inside (0, t) with b <= t - eps for t = " +
                                      std::to_string(t));
    double a = best.x;
    double R2 = 4.0 * R / a;
    double eps = eps_of(R2);
    double b = std::min(b_max, t - eps);

    double E0 = phi_R + 0.5 * R2 * R2;
    double Rprime = 1.01 * std::sqrt(2.0 * (E0 - phi_inf));
    double jac = jacobian_det_sup(R, R2, a, b, phi, d, cfg, jacobian_net);
    double M = jacobian_pad * jac;
    double C1 = rate_bound(R2);
    double log_alpha_L = 0;
    double R_L = 0;
    if (kind == ProcessKind::BGK)
    {
        log_alpha_L = log_maxwellian(R2, d);
    }
    else
    {
        R_L = Rprime;
        log_alpha_L = carleman_lower_bound(R_L, R2, *op, carleman_grid).log_alpha_L;
    }

    MinorisationCertificate m;
    m.t_star = t;
    m.log_density = -t * C1 + 2.0 * log_alpha_L - std::log(M) + std::log(eps) + std::log(b - a);
    m.log_alpha = m.log_density + log_ball_volume(d, 0.5 * R) + log_ball_volume(d, 0.5 * R2);
    m.nu = "uniform on B(R/2) x B(R2/2)";
    m.region = "|x|, |v| <= " + std::to_string(K_support);
    m.nu_x = 0.5 * R;
    m.nu_v = 0.5 * R2;
    m.audit = {
        {"K", K_support, "radius of the starting set"},
        {"H_max", H_max, "max energy on B(K) x B(K)"},
        {"R", R, "position radius of the energy sublevel set"},
        {"t1", t1, "shooting time bound at radius R"},
        {"a", a, "window start for the middle transport time"},
        {"b", b, "window end, <= min(t1, t - eps)"},
        {"R2", R2, "4R/a, shooting velocity radius"},
        {"E0", E0, "sup H on B(R) x B(R2)"},
        {"R_prime", Rprime, "velocity bound on the energy set"},
        {"M", M, "padded sup |det Jac_v X_s| over the window"},
        {"alpha_T", 1.0 / M, "1/M, transport lower bound"},
        {"eps", eps, "min{R/(2R2), sqrt(R)/(2 sqrt(C_R)), R2/(2R)}, final flow slack"},
        {"C1", C1, kind == ProcessKind::BGK ? "unit jump rate" : "jump-rate bound on the energy cutoff"},
        {"log_alpha_L", log_alpha_L,
         kind == ProcessKind::BGK ? "log Maxwellian at |v| = R2" : "log Carleman gain lower bound"},
        {"log_c", m.log_density, "log[e^{-t C1} alpha_L^2 alpha_T eps (b - a)]"},
        {"log_alpha", m.log_alpha, "log[c vol(B(R/2)) vol(B(R2/2))]"},
    };
    if (kind == ProcessKind::LinearBoltzmann)
        m.audit.insert(m.audit.begin() + 9, {"R_L", R_L, "pre-collision velocity radius"});
    return m;
}

} // namespace kh
