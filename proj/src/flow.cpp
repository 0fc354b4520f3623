#include "kinetic_harris/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/special_functions/lambert_w.hpp>

#include "kinetic_harris/errors.hpp"
#include "kinetic_harris/potential.hpp"
#include "kinetic_harris/quasirandom.hpp"

namespace kh {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

bool force_free(const Potential& phi)
{
    return phi.grad_sup(1.0) == 0.0 && phi.hess_sup(1.0) == 0.0;
}

std::uint64_t step_count(double t, const FlowConfig& cfg)
{
    if (!(cfg.dt > 0))
        throw PreconditionViolated("flow step dt must be positive");
    double n = std::ceil(std::abs(t) / cfg.dt);
    if (n > static_cast<double>(cfg.max_steps))
        throw StepUnderflow("flow would need " + std::to_string(n) + " steps");
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(n));
}

using Mat = std::array<Vec, max_dim>;  // columns

double det(const Mat& m, int d)
{
    // m[j][i] is row i of column j
    switch (d)
    {
        case 1: return m[0][0];
        case 2: return m[0][0] * m[1][1] - m[1][0] * m[0][1];
        default:
            return m[0][0] * (m[1][1] * m[2][2] - m[2][1] * m[1][2]) -
                   m[1][0] * (m[0][1] * m[2][2] - m[2][1] * m[0][2]) +
                   m[2][0] * (m[0][1] * m[1][2] - m[1][1] * m[0][2]);
    }
}

} // namespace

double hamiltonian(const PhasePoint& z, const Potential& phi)
{
    return 0.5 * norm2(z.v) + phi.value(z.x);
}

PhasePoint verlet_flow(const PhasePoint& z, double t, const Potential& phi, const FlowConfig& cfg)
{
    PhasePoint out = z;
    if (t == 0.0)
        return out;
    if (force_free(phi))
    {
        out.x = z.x + t * z.v;
        return out;
    }
    std::uint64_t n = step_count(t, cfg);
    double h = t / static_cast<double>(n);
    double half = 0.5 * h;
    Vec g = phi.gradient(out.x);
    for (std::uint64_t k = 0; k < n; ++k)
    {
        out.v = out.v - half * g;
        out.x = out.x + h * out.v;
        g = phi.gradient(out.x);
        out.v = out.v - half * g;
    }
    return out;
}

PhasePoint flow(const PhasePoint& z, double t, const DomainSpec& domain, const FlowConfig& cfg)
{
    if (domain.is_torus())
    {
        PhasePoint out = z;
        out.x = wrap_torus(z.x + t * z.v, domain.dim);
        return out;
    }
    return verlet_flow(z, t, *domain.potential, cfg);
}

double existence_horizon(const Vec& x0, const Vec& v0, double lambda, double R, const Potential& phi)
{
    if (!(lambda > 1) || !(R > 0) || norm(x0) > R)
        throw PreconditionViolated("existence horizon needs lambda > 1, R > 0 and |x0| <= R");
    double speed = norm(v0);
    double c = phi.grad_sup(lambda * R);
    double t1 = speed > 0 ? (lambda - 1.0) * R / (2.0 * speed) : inf;
    double t2 = c > 0 ? std::sqrt((lambda - 1.0) * R) / std::sqrt(2.0 * c) : inf;
    return std::min(t1, t2);
}

double shooting_time_bound(double R, const Potential& phi)
{
    if (!(R > 0))
        throw PreconditionViolated("shooting bound needs R > 0");
    double c = phi.hess_sup(9.0 * R);
    double c2 = phi.grad_sup(2.0 * R);
    double c9 = phi.grad_sup(9.0 * R);
    // C t^2 e^{C t^2} = 1/4  <=>  C t^2 = W(1/4)
    double ta = c > 0 ? std::sqrt(boost::math::lambert_w0(0.25) / c) : inf;
    double tb = c2 > 0 ? std::sqrt(R) / std::sqrt(2.0 * c2) : inf;
    double tc = c9 > 0 ? 2.0 * std::sqrt(R) / std::sqrt(c9) : inf;
    return std::min({ta, tb, tc});
}

ShootingResult shoot(const Vec& x0, const Vec& x1, double t, const Potential& phi,
                     const FlowConfig& cfg, double tol, int max_iter)
{
    if (!(t > 0))
        throw PreconditionViolated("shooting time must be positive");
    ShootingResult res;
    Vec v = x1 - x0;
    double prev = -1.0;
    for (int k = 0; k < max_iter; ++k)
    {
        PhasePoint end = verlet_flow(PhasePoint{x0, (1.0 / t) * v}, t, phi, cfg);
        Vec r = end.x - x1;
        double step = norm(r);
        ++res.iterations;
        res.increments.push_back(step);
        res.v0 = v;
        res.residual = step;
        if (step <= tol)
            return res;
        // ratios of increments below rounding level carry no information
        if (prev > 1e-12 * (1.0 + norm(v)))
        {
            double ratio = step / prev;
            res.max_ratio = std::max(res.max_ratio, ratio);
            if (ratio > 0.5)
                throw NoContraction("shooting increments shrink by only " + std::to_string(ratio) +
                                    "; t is beyond the contraction range");
        }
        prev = step;
        v = v - r;
    }
    throw MaxIterations("shooting did not reach tolerance in " + std::to_string(max_iter) +
                        " iterations");
}

double jacobian_det_sup(double R, double R2, double a, double b, const Potential& phi, int d,
                        const FlowConfig& cfg, int net)
{
    if (!(b >= a) || !(a > 0))
        throw PreconditionViolated("jacobian window needs 0 < a <= b");
    std::uint64_t n = step_count(b, cfg);
    double h = b / static_cast<double>(n);
    double half = 0.5 * h;
    double sup = 0.0;
    for (int p = 0; p < net; ++p)
    {
        PhasePoint z{halton_ball(p, d, R, 0), halton_ball(p, d, R2, 3)};
        Mat jx{};
        Mat jv{};
        for (int j = 0; j < d; ++j)
            jv[j][j] = 1.0;
        Vec g = phi.gradient(z.x);
        for (std::uint64_t k = 1; k <= n; ++k)
        {
            for (int j = 0; j < d; ++j)
                jv[j] = jv[j] - half * phi.hessian_apply(z.x, jx[j]);
            z.v = z.v - half * g;
            z.x = z.x + h * z.v;
            for (int j = 0; j < d; ++j)
                jx[j] = jx[j] + h * jv[j];
            g = phi.gradient(z.x);
            z.v = z.v - half * g;
            for (int j = 0; j < d; ++j)
                jv[j] = jv[j] - half * phi.hessian_apply(z.x, jx[j]);
            double s = h * static_cast<double>(k);
            if (s >= a - 0.5 * h)
                sup = std::max(sup, std::abs(det(jx, d)));
        }
    }
    return sup;
}

TransportConstants transport_minorisation_constants(double R, double s, const Potential& phi, int d,
                                                    const FlowConfig& cfg, int net)
{
    if (!(R > 0) || !(s > 0))
        throw PreconditionViolated("transport constants need R > 0 and s > 0");
    TransportConstants tc;
    tc.R = R;
    tc.s = s;
    tc.R2 = 4.0 * R / s;
    tc.E0 = phi.max_on_ball(R) + 0.5 * tc.R2 * tc.R2;
    tc.Rprime = 1.01 * std::sqrt(2.0 * (tc.E0 - phi.lower_bound()));
    tc.jacobian_sup = jacobian_det_sup(R, tc.R2, s, s, phi, d, cfg, net);
    tc.M = jacobian_pad * tc.jacobian_sup;
    tc.alpha_T = 1.0 / tc.M;
    return tc;
}

} // namespace kh
