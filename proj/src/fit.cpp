#include "kinetic_harris/fit.hpp"

#include <algorithm>
#include <cmath>

#include "kinetic_harris/errors.hpp"

namespace kh {

std::string to_string(DecayModel m)
{
    return m == DecayModel::Exponential ? "exponential" : "algebraic";
}

DecayFit fit_decay(const std::vector<double>& times, const std::vector<double>& d,
                   const std::vector<double>& stderrs, DecayModel model, double t_min,
                   double bias_floor, double floor_factor)
{
    if (times.size() != d.size() || (!stderrs.empty() && stderrs.size() != d.size()))
        throw PreconditionViolated("fit_decay: input lengths differ");
    std::vector<double> xs, ys, rel;
    DecayFit fit;
    fit.model = model;
    for (std::size_t i = 0; i < times.size(); ++i)
    {
        if (times[i] < t_min)
            continue;
        double se = stderrs.empty() ? 0.0 : stderrs[i];
        if (!(d[i] > 0) || d[i] < floor_factor * se || d[i] < bias_floor)
            break;
        if (xs.empty())
            fit.t_lo = times[i];
        fit.t_hi = times[i];
        xs.push_back(model == DecayModel::Exponential ? times[i] : std::log1p(times[i]));
        ys.push_back(std::log(d[i]));
        rel.push_back(se / d[i]);
    }
    const std::size_t n = xs.size();
    if (n < 5)
        throw InsufficientSignal("fit_decay: " + std::to_string(n) +
                                 " usable points above the noise floor, need 5");
    bool weighted = false;
    for (double r : rel)
        if (r > 0)
            weighted = true;
    std::vector<double> w(n, 1.0);
    if (weighted)
        for (std::size_t i = 0; i < n; ++i)
        {
            double r = std::max(rel[i], min_relative_error);
            w[i] = 1.0 / (r * r);
        }

    double sw = 0, sx = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i)
    {
        sw += w[i];
        sx += w[i] * xs[i];
        sy += w[i] * ys[i];
    }
    double mx = sx / sw;
    double my = sy / sw;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i)
    {
        double dx = xs[i] - mx;
        double dy = ys[i] - my;
        sxx += w[i] * dx * dx;
        sxy += w[i] * dx * dy;
        syy += w[i] * dy * dy;
    }
    if (!(sxx > 0))
        throw InsufficientSignal("fit_decay: degenerate time window");
    double slope = sxy / sxx;
    double rss = 0;
    for (std::size_t i = 0; i < n; ++i)
    {
        double r = ys[i] - my - slope * (xs[i] - mx);
        rss += w[i] * r * r;
    }
    fit.rate = -slope;
    fit.log_C = my - slope * mx;
    fit.r2 = syy > 0 ? 1.0 - rss / syy : 1.0;
    fit.rate_stderr = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
    fit.points = static_cast<int>(n);
    if (!(fit.rate > 0))
        throw InsufficientSignal("fit_decay: fitted rate " + std::to_string(fit.rate) + " is not positive");
    return fit;
}

} // namespace kh
