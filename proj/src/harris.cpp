#include <algorithm>
#include <cmath>
#include <limits>

#include "kinetic_harris/certificates.hpp"
#include "kinetic_harris/errors.hpp"
#include "kinetic_harris/optimize.hpp"

namespace kh {

namespace {

constexpr double ninf = -std::numeric_limits<double>::infinity();

// log(-log(1 - g)) from log g, accurate when g underflows
double log_neg_log1m(double log_g)
{
    if (log_g > -30.0)
        return std::log(-std::log1p(-std::exp(log_g)));
    return log_g;
}

void check_lyapunov(const LyapunovSpec& l)
{
    if (!(l.lambda > 0))
        throw PreconditionViolated("Harris certificate needs lambda > 0");
    if (l.q != 1.0)
        throw PreconditionViolated("Harris certificate needs a geometric drift (q = 1)");
}

} // namespace

HarrisContraction harris_contraction(double log_beta, double theta, double alpha_D, double D,
                                     double R, double alpha0)
{
    if (!(theta > 0) || !(theta < 1))
        throw PreconditionViolated("beta0 in (0, beta) violated: beta0/beta = " + std::to_string(theta));
    if (!(alpha_D > 0) || !(alpha_D < 1))
        throw PreconditionViolated("alpha_D in (0, 1) violated: alpha_D = " + std::to_string(alpha_D));
    if (!(D > 0))
        throw PreconditionViolated("D > 0 violated: D = " + std::to_string(D));
    double r_min = 2.0 * D / (1.0 - alpha_D);
    if (!(R > r_min))
        throw PreconditionViolated("R > 2D/(1 - alpha_D) violated: R = " + std::to_string(R) +
                                   ", 2D/(1 - alpha_D) = " + std::to_string(r_min));
    double a_lo = alpha_D + 2.0 * D / R;
    if (!(alpha0 > a_lo) || !(alpha0 < 1))
        throw PreconditionViolated("alpha0 in (alpha_D + 2D/R, 1) violated: alpha0 = " +
                                   std::to_string(alpha0) + ", lower end " + std::to_string(a_lo));
    HarrisContraction h;
    h.log_beta = log_beta;
    h.alpha0 = alpha0;
    h.log_beta0 = log_beta + std::log(theta);
    h.log_gamma = h.log_beta0 - std::log(D);
    double gap1 = log_beta + std::log1p(-theta);
    double log_Rg = std::log(R) + h.log_gamma;
    double gap2 = log_Rg + std::log1p(-alpha0) - std::log(2.0 + std::exp(log_Rg));
    h.log_gap = std::min(gap1, gap2);
    if (std::isnan(h.log_gap))
        h.log_gap = ninf;
    h.alpha_bar = 1.0 - std::exp(h.log_gap);
    h.log_neg_log_alpha_bar = log_neg_log1m(h.log_gap);
    return h;
}

HarrisContraction harris_contraction_linear(double beta, double beta0, double alpha_D, double D,
                                            double R, double alpha0)
{
    if (!(beta > 0) || !(beta < 1))
        throw PreconditionViolated("beta in (0, 1) violated: beta = " + std::to_string(beta));
    return harris_contraction(std::log(beta), beta0 / beta, alpha_D, D, R, alpha0);
}

double HarrisCertificate::log_bound(double t, double mu0_V, double mustar_V) const
{
    double n = std::floor(t / t_star);
    double r = t - n * t_star;
    double log_ab = -std::exp(contraction.log_neg_log_alpha_bar);
    double X = std::max(0.0, mu0_V) + std::max(0.0, mustar_V) + lyapunov.K * r;
    double log_2gX = std::log(2.0);
    if (X > 0)
        log_2gX += std::log1p(0.5 * std::exp(contraction.log_gamma + std::log(X)));
    // ||.||_{1+V} <= ||.||_{1+gamma V} / min(1, gamma)
    return n * log_ab + log_2gX - std::min(0.0, contraction.log_gamma);
}

HarrisCertificate harris_alpha_bar(const MinorisationCertificate& m, const LyapunovSpec& lyap,
                                   double R, double theta, double alpha0)
{
    check_lyapunov(lyap);
    if (m.level < R)
        throw PreconditionViolated("minorisation holds on {V <= " + std::to_string(m.level) +
                                   "}, smaller than the Harris level R = " + std::to_string(R));
    HarrisCertificate h;
    h.minorisation = m;
    h.lyapunov = lyap;
    h.t_star = m.t_star;
    h.alpha_D = std::exp(-lyap.lambda * m.t_star);
    h.D = lyap.K / lyap.lambda;
    h.R = R;
    h.contraction = harris_contraction(m.log_alpha, theta, h.alpha_D, h.D, R, alpha0);
    h.log_rate = h.contraction.log_neg_log_alpha_bar - std::log(h.t_star);
    const auto& c = h.contraction;
    h.audit = {
        {"t_star", h.t_star, "minorisation time"},
        {"alpha_D", h.alpha_D, "e^{-lambda t*}, discrete drift factor"},
        {"D", h.D, "K/lambda, discrete drift offset"},
        {"R", R, "small-set level, > 2D/(1 - alpha_D)"},
        {"log_beta", c.log_beta, "log minorisation mass on {V <= R}"},
        {"beta0_over_beta", theta, "tuning beta0 = theta beta"},
        {"alpha0", c.alpha0, "tuning in (alpha_D + 2D/R, 1)"},
        {"log_gamma", c.log_gamma, "log(beta0/D), weight of V in the contracted norm"},
        {"log_one_minus_alpha_bar", c.log_gap,
         "log(1 - alpha_bar), alpha_bar = max{1 - (beta - beta0), (2 + R gamma alpha0)/(2 + R gamma)}"},
        {"alpha_bar", c.alpha_bar, "contraction per step (rounded)"},
        {"log_rate", h.log_rate, "log(-log(alpha_bar)/t*)"},
    };
    return h;
}

HarrisCertificate harris_optimize_tuning(const MinorisationCertificate& m, const LyapunovSpec& lyap,
                                         double R)
{
    check_lyapunov(lyap);
    double alpha_D = std::exp(-lyap.lambda * m.t_star);
    double D = lyap.K / lyap.lambda;
    double a_lo = alpha_D + 2.0 * D / R;
    if (!(a_lo < 1))
        throw PreconditionViolated("R > 2D/(1 - alpha_D) violated at R = " + std::to_string(R));
    // the second branch only shrinks as alpha0 grows, so alpha0 sits just
    // above its lower end
    double alpha0 = a_lo + 1e-3 * (1.0 - a_lo);
    auto gap = [&](double theta) {
        return harris_contraction(m.log_alpha, theta, alpha_D, D, R, alpha0).log_gap;
    };
    double theta = 0.5;
    if (std::isfinite(m.log_alpha))
        theta = golden_section_max(gap, 1e-9, 1.0 - 1e-9, 1e-12).x;
    return harris_alpha_bar(m, lyap, R, theta, alpha0);
}

HarrisCertificate optimize_harris(const LyapunovSpec& lyap, const MinorisationBuilder& build,
                                  const std::vector<double>& t_grid,
                                  const std::vector<double>& level_factors)
{
    check_lyapunov(lyap);
    std::optional<HarrisCertificate> best;
    std::string last_error;
    for (double t : t_grid)
    {
        double alpha_D = std::exp(-lyap.lambda * t);
        double D = lyap.K / lyap.lambda;
        double r_min = 2.0 * D / (1.0 - alpha_D);
        for (double f : level_factors)
        {
            double R = f * r_min;
            try
            {
                auto m = build(R, t);
                auto h = harris_optimize_tuning(m, lyap, R);
                if (!best || h.log_rate > best->log_rate)
                    best = std::move(h);
            }
            catch (const Error& e)
            {
                last_error = e.what();
            }
        }
    }
    if (!best)
        throw ConstraintViolated("no admissible (t*, R) for the Harris certificate: " + last_error);
    return *best;
}

} // namespace kh
