#include "kinetic_harris/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <parallel/algorithm>

#include <boost/math/special_functions/erf.hpp>

#include "kinetic_harris/errors.hpp"
#include "kinetic_harris/potential.hpp"
#include "kinetic_harris/quadrature.hpp"
#include "kinetic_harris/simulate.hpp"

namespace kh {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double edge(const BinningSpec& s, int axis, int i)
{
    return s.lo[axis] + (s.hi[axis] - s.lo[axis]) * i / s.bins;
}

// Folded edges: the outer bins reach to infinity.
double folded_edge(const BinningSpec& s, int axis, int i)
{
    if (i == 0)
        return -inf;
    if (i == s.bins)
        return inf;
    return edge(s, axis, i);
}

// Sum of |p - mu| (or its weighted version) from sorted keys: occupied bins
// are visited directly and the rest contribute their mu mass.
double l1_from_sorted(const std::vector<std::uint64_t>& keys, const BinnedReference& ref,
                      const BinWeight* w)
{
    const double n = static_cast<double>(keys.size());
    double total = w ? w->total : ref.total_mass();
    double acc = total;
    for (std::size_t i = 0; i < keys.size();)
    {
        std::size_t j = i;
        while (j < keys.size() && keys[j] == keys[i])
            ++j;
        double p = static_cast<double>(j - i) / n;
        double mu = ref.mass(keys[i]);
        double wt = w ? w->at(ref, keys[i]) : 1.0;
        acc += wt * (std::abs(p - mu) - mu);
        i = j;
    }
    return std::max(0.0, acc);
}

DistanceEstimate folded_estimate(const std::vector<std::uint64_t>& keys, const BinnedReference& ref,
                                 const BinWeight* w, const Execution& exec)
{
    DistanceEstimate out;
    std::vector<std::uint64_t> all = keys;
    if (exec.serial)
        std::sort(all.begin(), all.end());
    else
        __gnu_parallel::sort(all.begin(), all.end());
    out.value = l1_from_sorted(all, ref, w);
    const std::size_t n = keys.size();
    if (n < static_cast<std::size_t>(tv_folds) * 2)
        return out;
    std::vector<double> fold(tv_folds);
    for (int f = 0; f < tv_folds; ++f)
    {
        std::size_t a = n * f / tv_folds;
        std::size_t b = n * (f + 1) / tv_folds;
        std::vector<std::uint64_t> part(keys.begin() + a, keys.begin() + b);
        std::sort(part.begin(), part.end());
        fold[f] = l1_from_sorted(part, ref, w);
    }
    double mean = std::accumulate(fold.begin(), fold.end(), 0.0) / tv_folds;
    double ss = 0;
    for (double x : fold)
        ss += (x - mean) * (x - mean);
    out.stderr_ = std::sqrt(ss / (tv_folds - 1)) / std::sqrt(static_cast<double>(tv_folds));
    return out;
}

} // namespace

void BinningSpec::validate() const
{
    check_dimension(dim);
    if (bins < 2)
        throw ConfigError("binning needs at least 2 bins per axis");
    if (std::pow(static_cast<double>(bins), axes()) > 1.8e19)
        throw ConfigError("too many bins for 64-bit keys");
    for (int k = 0; k < axes(); ++k)
        if (!(hi[k] > lo[k]))
            throw ConfigError("binning box has an empty side");
}

BinningSpec BinningSpec::default_for(const Equilibrium& eq, int bins, double coverage)
{
    BinningSpec s;
    const int d = eq.dim();
    s.dim = d;
    s.bins = bins;
    // a 1% margin keeps the rounded coverage above the target
    double excluded = 0.99 * (1.0 - coverage);
    double v_share = eq.domain().is_torus() ? excluded : 0.5 * excluded;
    // each velocity axis loses at most v_share / d over its two tails
    double L = std::sqrt(2.0) * boost::math::erfc_inv(v_share / d);
    double r = eq.domain().is_torus() ? 0.0 : eq.position_quantile_radius(0.5 * excluded);
    for (int k = 0; k < d; ++k)
    {
        if (eq.domain().is_torus())
        {
            s.lo[k] = 0.0;
            s.hi[k] = 1.0;
        }
        else
        {
            s.lo[k] = -r;
            s.hi[k] = r;
        }
        s.lo[d + k] = -L;
        s.hi[d + k] = L;
    }
    return s;
}

BinnedReference::BinnedReference(const Equilibrium& eq, BinningSpec spec, double min_coverage)
    : eq_(&eq)
    , spec_(spec)
{
    spec_.validate();
    const int d = spec_.dim;
    if (d != eq.dim())
        throw ConfigError("binning dimension differs from the equilibrium");
    const bool torus = eq.domain().is_torus();
    if (!torus && d > 2)
        throw PreconditionViolated("binned distances in the whole space support d <= 2");
    total_bins_ = 1;
    for (int k = 0; k < spec_.axes(); ++k)
        total_bins_ *= static_cast<std::uint64_t>(spec_.bins);
    axis_mass_.assign(spec_.axes(), std::vector<double>(spec_.bins, 0.0));
    coverage_ = 1.0;
    for (int k = d; k < 2 * d; ++k)
    {
        for (int i = 0; i < spec_.bins; ++i)
        {
            double a = folded_edge(spec_, k, i);
            double b = folded_edge(spec_, k, i + 1);
            axis_mass_[k][i] = normal_cdf(b) - normal_cdf(a);
        }
        coverage_ *= normal_cdf(spec_.hi[k]) - normal_cdf(spec_.lo[k]);
    }
    if (torus)
    {
        for (int k = 0; k < d; ++k)
        {
            if (spec_.lo[k] != 0.0 || spec_.hi[k] != 1.0)
                throw ConfigError("torus binning must span the unit cell");
            std::fill(axis_mass_[k].begin(), axis_mass_[k].end(), 1.0 / spec_.bins);
        }
    }
    else
    {
        QuadratureConfig q;
        q.abs_tol = 1e-13;
        if (d == 1)
        {
            auto f = [&](double x) { return eq.position_density(Vec{x, 0.0, 0.0}); };
            for (int i = 0; i < spec_.bins; ++i)
                axis_mass_[0][i] = integrate(f, folded_edge(spec_, 0, i), folded_edge(spec_, 0, i + 1), q);
            coverage_ *= integrate(f, spec_.lo[0], spec_.hi[0], q);
        }
        else
        {
            auto cell = [&](double x0, double x1, double y0, double y1) {
                return integrate(
                    [&](double x) {
                        return integrate([&](double y) { return eq.position_density(Vec{x, y, 0.0}); },
                                         y0, y1, q);
                    },
                    x0, x1, q);
            };
            joint_position_.assign(static_cast<std::size_t>(spec_.bins) * spec_.bins, 0.0);
            for (int i = 0; i < spec_.bins; ++i)
                for (int j = 0; j < spec_.bins; ++j)
                    joint_position_[static_cast<std::size_t>(i) + spec_.bins * j] =
                        cell(folded_edge(spec_, 0, i), folded_edge(spec_, 0, i + 1),
                             folded_edge(spec_, 1, j), folded_edge(spec_, 1, j + 1));
            coverage_ *= cell(spec_.lo[0], spec_.hi[0], spec_.lo[1], spec_.hi[1]);
        }
    }
    if (total_bins_ <= max_enumerated_bins)
    {
        total_mass_ = 0;
        for (std::uint64_t k = 0; k < total_bins_; ++k)
            total_mass_ += mass(k);
    }
    if (coverage_ < min_coverage)
        throw BoxCoverageInsufficient("binning box holds " + std::to_string(coverage_) +
                                      " of the equilibrium mass, below " + std::to_string(min_coverage));
}

int BinnedReference::axis_index(int axis, double value) const
{
    double u = (value - spec_.lo[axis]) / (spec_.hi[axis] - spec_.lo[axis]);
    double f = std::floor(u * spec_.bins);
    if (!(f >= 0))
        return 0;
    if (f >= spec_.bins)
        return spec_.bins - 1;
    return static_cast<int>(f);
}

std::uint64_t BinnedReference::key(const PhasePoint& z) const
{
    const int d = spec_.dim;
    std::uint64_t k = 0;
    for (int a = 2 * d - 1; a >= 0; --a)
    {
        double value = a < d ? z.x[a] : z.v[a - d];
        k = k * spec_.bins + static_cast<std::uint64_t>(axis_index(a, value));
    }
    return k;
}

double BinnedReference::mass(std::uint64_t key) const
{
    const int d = spec_.dim;
    const auto B = static_cast<std::uint64_t>(spec_.bins);
    double m = 1.0;
    std::uint64_t pos = 0;
    std::uint64_t stride = 1;
    for (int a = 0; a < 2 * d; ++a)
    {
        auto i = static_cast<int>(key % B);
        key /= B;
        if (a < d && !joint_position_.empty())
        {
            pos += static_cast<std::uint64_t>(i) * stride;
            stride *= B;
            continue;
        }
        m *= axis_mass_[a][i];
    }
    if (!joint_position_.empty())
        m *= joint_position_[pos];
    return m;
}

PhasePoint BinnedReference::center(std::uint64_t key) const
{
    const int d = spec_.dim;
    const auto B = static_cast<std::uint64_t>(spec_.bins);
    PhasePoint z;
    for (int a = 0; a < 2 * d; ++a)
    {
        auto i = static_cast<int>(key % B);
        key /= B;
        double c = 0.5 * (edge(spec_, a, i) + edge(spec_, a, i + 1));
        (a < d ? z.x[a] : z.v[a - d]) = c;
    }
    return z;
}

std::vector<std::uint64_t> bin_keys(const Ensemble& e, const BinnedReference& ref, const Execution& exec)
{
    std::vector<std::uint64_t> keys(e.size());
    parallel_for(e.size(), exec, [&](std::size_t i) { keys[i] = ref.key(e.points[i]); });
    return keys;
}

std::vector<std::uint64_t> bin_keys_serial(const Ensemble& e, const BinnedReference& ref)
{
    std::vector<std::uint64_t> keys(e.size());
    for (std::size_t i = 0; i < e.size(); ++i)
        keys[i] = ref.key(e.points[i]);
    return keys;
}

double BinWeight::at(const BinnedReference& ref, std::uint64_t key) const
{
    return 1.0 + a * V.eval(ref.center(key), phi);
}

BinWeight make_bin_weight(const BinnedReference& ref, const LyapunovSpec& V, const Potential* phi,
                          double a)
{
    if (ref.bin_count() > max_enumerated_bins)
        throw PreconditionViolated("weighted distance needs at most 2^28 bins");
    BinWeight w;
    w.V = V;
    w.phi = phi;
    w.a = a;
    double total = 0;
    for (std::uint64_t k = 0; k < ref.bin_count(); ++k)
        total += w.at(ref, k) * ref.mass(k);
    w.total = total;
    return w;
}

DistanceEstimate estimate_tv(const Ensemble& e, const BinnedReference& ref, const Execution& exec)
{
    if (e.size() == 0)
        throw PreconditionViolated("empty ensemble");
    auto keys = bin_keys(e, ref, exec);
    return folded_estimate(keys, ref, nullptr, exec);
}

DistanceEstimate estimate_weighted_tv(const Ensemble& e, const BinnedReference& ref,
                                      const BinWeight& w, const Execution& exec)
{
    if (e.size() == 0)
        throw PreconditionViolated("empty ensemble");
    auto keys = bin_keys(e, ref, exec);
    return folded_estimate(keys, ref, &w, exec);
}

double tv_from_keys(std::vector<std::uint64_t> keys, const BinnedReference& ref, const BinWeight* w)
{
    std::sort(keys.begin(), keys.end());
    return l1_from_sorted(keys, ref, w);
}

double tv_between(const Ensemble& a, const Ensemble& b, const BinnedReference& ref,
                  const Execution& exec)
{
    auto ka = bin_keys(a, ref, exec);
    auto kb = bin_keys(b, ref, exec);
    std::sort(ka.begin(), ka.end());
    std::sort(kb.begin(), kb.end());
    const double na = static_cast<double>(ka.size());
    const double nb = static_cast<double>(kb.size());
    double acc = 0;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < ka.size() || j < kb.size())
    {
        std::uint64_t k = (j >= kb.size() || (i < ka.size() && ka[i] < kb[j])) ? ka[i] : kb[j];
        std::size_t ci = 0;
        std::size_t cj = 0;
        while (i < ka.size() && ka[i] == k)
        {
            ++i;
            ++ci;
        }
        while (j < kb.size() && kb[j] == k)
        {
            ++j;
            ++cj;
        }
        acc += std::abs(ci / na - cj / nb);
    }
    return acc;
}

namespace {

// mean absolute deviation of a Poisson(m) count
double poisson_mad(double m)
{
    double fl = std::floor(m);
    return std::exp(std::log(2.0) - m + (fl + 1.0) * std::log(m) - std::lgamma(fl + 1.0));
}

void check_enumerable(const BinnedReference& ref)
{
    if (ref.bin_count() > max_enumerated_bins)
        throw PreconditionViolated("noise floor needs at most 2^28 bins");
}

} // namespace

double noise_floor(const BinnedReference& ref, std::size_t n, const BinWeight* w)
{
    check_enumerable(ref);
    const double N = static_cast<double>(n);
    double acc = 0;
    for (std::uint64_t k = 0; k < ref.bin_count(); ++k)
    {
        double m = N * ref.mass(k);
        if (m > 0)
            acc += (w ? w->at(ref, k) : 1.0) * poisson_mad(m);
    }
    return acc / N;
}

double noise_floor_sd(const BinnedReference& ref, std::size_t n, const BinWeight* w)
{
    check_enumerable(ref);
    const double N = static_cast<double>(n);
    double acc = 0;
    for (std::uint64_t k = 0; k < ref.bin_count(); ++k)
    {
        double m = N * ref.mass(k);
        if (m <= 0)
            continue;
        double mad = poisson_mad(m);
        double wk = w ? w->at(ref, k) : 1.0;
        acc += wk * wk * std::max(0.0, m - mad * mad);
    }
    return std::sqrt(acc) / N;
}

} // namespace kh
