#include <algorithm>
#include <cmath>
#include <numbers>

#include "kinetic_harris/certificates.hpp"
#include "kinetic_harris/errors.hpp"
#include "kinetic_harris/optimize.hpp"

namespace kh {

namespace {

double log_maxwellian(double speed, int d)
{
    return -0.5 * d * std::log(2.0 * std::numbers::pi) - 0.5 * speed * speed;
}

double log_ball_volume(int d, double r)
{
    return std::log(sphere_area(d) / d) + d * std::log(r);
}

} // namespace

DoeblinRate doeblin_rate(double t_star, double alpha)
{
    if (!(t_star > 0))
        throw PreconditionViolated("doeblin_rate needs t* > 0");
    if (!(alpha > 0) || !(alpha < 1))
        throw PreconditionViolated("doeblin_rate needs alpha in (0, 1)");
    DoeblinRate r;
    r.t_star = t_star;
    r.alpha = alpha;
    r.lambda_rate = -std::log1p(-alpha) / t_star;
    r.prefactor = 1.0 / (1.0 - alpha);
    return r;
}

double DoeblinRate::bound(double t, double initial) const
{
    return initial * prefactor * std::exp(-lambda_rate * t);
}

double DoeblinRate::iterated_bound(double t, double initial) const
{
    double n = std::floor(t / t_star);
    return initial * std::exp(n * std::log1p(-alpha));
}

double torus_cover_radius(int d) { return 1.01 * std::sqrt(static_cast<double>(d)); }

double torus_delta_min(double t_star, int d)
{
    return 2.0 * torus_cover_radius(d) / (t_star / 3.0);
}

MinorisationCertificate doeblin_alpha_torus_bgk(double t_star, int d, double delta_L)
{
    check_dimension(d);
    if (!(t_star > 0))
        throw PreconditionViolated("torus minorisation needs t* > 0");
    double dmin = torus_delta_min(t_star, d);
    if (!(delta_L > dmin))
        throw ConstraintViolated("delta_L = " + std::to_string(delta_L) + " must exceed 2R/t0 = " +
                                 std::to_string(dmin));
    MinorisationCertificate m;
    m.t_star = t_star;
    double log_alpha_L = log_maxwellian(delta_L, d);
    m.log_density = -std::log(9.0) - t_star + (2.0 - d) * std::log(t_star) + 2.0 * log_alpha_L;
    m.log_alpha = m.log_density + log_ball_volume(d, delta_L);
    m.nu = "uniform on T^d x B(delta_L)";
    m.region = "everywhere";
    m.nu_v = delta_L;
    m.audit = {
        {"R", torus_cover_radius(d), "cover radius 1.01 sqrt(d), transport lower bound on the torus"},
        {"t0", t_star / 3.0, "t*/3"},
        {"delta_L", delta_L, "velocity radius, > 2R/t0"},
        {"alpha_L", std::exp(log_alpha_L), "Maxwellian at |v| = delta_L, gain lower bound"},
        {"c", m.density(), "(1/9) e^{-t*} t*^{2-d} alpha_L^2, density lower bound"},
        {"alpha", m.alpha(), "c vol(B(delta_L)), minorising mass"},
    };
    return m;
}

TorusBgkOptimum optimize_torus_bgk(int d, double t_lo, double t_hi)
{
    check_dimension(d);
    auto delta_for = [d](double t) {
        return std::max(1.01 * torus_delta_min(t, d), std::sqrt(0.5 * d));
    };
    auto log_rate = [&](double log_t) {
        double t = std::exp(log_t);
        auto m = doeblin_alpha_torus_bgk(t, d, delta_for(t));
        return std::log(-std::log1p(-m.alpha()) / t);
    };
    auto best = maximize_on_interval(log_rate, std::log(t_lo), std::log(t_hi), 400);
    TorusBgkOptimum out;
    out.t_star = std::exp(best.x);
    out.delta_L = delta_for(out.t_star);
    out.cert = doeblin_alpha_torus_bgk(out.t_star, d, out.delta_L);
    out.rate = doeblin_rate(out.t_star, out.cert.alpha());
    out.cert.audit.push_back({"lambda_rate", out.rate.lambda_rate, "-log(1 - alpha)/t*"});
    out.cert.audit.push_back({"prefactor", out.rate.prefactor, "1/(1 - alpha)"});
    return out;
}

MinorisationCertificate doeblin_alpha_torus_boltzmann(double t_star, double v_radius,
                                                      const CollisionOperator& op, double delta_L,
                                                      int carleman_grid)
{
    const int d = op.dim();
    if (!(t_star > 0) || !(v_radius > 0))
        throw PreconditionViolated("torus Boltzmann minorisation needs t* > 0 and a velocity radius");
    double dmin = torus_delta_min(t_star, d);
    if (!(delta_L > dmin))
        throw ConstraintViolated("delta_L = " + std::to_string(delta_L) + " must exceed 2R/t0 = " +
                                 std::to_string(dmin));
    double R_L = std::max(v_radius, delta_L);
    auto cb = carleman_lower_bound(R_L, delta_L, op, carleman_grid);
    // energy cutoff E0 = max(R^2, delta_L^2)/2 bounds the jump rate
    double C1 = op.thinning_bound(0.5 * R_L * R_L, 0.0);
    MinorisationCertificate m;
    m.t_star = t_star;
    m.log_density = -std::log(9.0) - t_star * C1 + (2.0 - d) * std::log(t_star) + 2.0 * cb.log_alpha_L;
    m.log_alpha = m.log_density + log_ball_volume(d, delta_L);
    m.nu = "uniform on T^d x B(delta_L)";
    m.region = "|v| <= " + std::to_string(v_radius);
    m.nu_v = delta_L;
    m.audit = {
        {"v_radius", v_radius, "velocity radius of the starting set"},
        {"delta_L", delta_L, "velocity radius, > 2R/t0 with R = 1.01 sqrt(d), t0 = t*/3"},
        {"R_L", R_L, "max(v_radius, delta_L), pre-collision radius for the gain bound"},
        {"log_alpha_L", cb.log_alpha_L, "log of the Carleman gain lower bound (padded 5%)"},
        {"C1", C1, "jump-rate bound on the energy set, energy cutoff"},
        {"log_c", m.log_density, "log[(1/9) e^{-t* C1} t*^{2-d} alpha_L^2]"},
        {"log_alpha", m.log_alpha, "log[c vol(B(delta_L))]"},
    };
    return m;
}

} // namespace kh
