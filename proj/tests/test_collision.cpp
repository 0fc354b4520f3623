#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "kinetic_harris/collision.hpp"
#include "support/ks.hpp"
#include "support/operators.hpp"

using namespace kh;

TEST_CASE("sigma parametrization conserves momentum and energy")
{
    for (int d : {1, 2, 3})
    {
        const auto& op = *testing::shared_operator(d == 1 ? 0.0 : 1.0, d);
        CounterRng rng(11, static_cast<std::uint64_t>(d));
        double worst = 0;
        for (int i = 0; i < 20000; ++i)
        {
            Vec v = sample_maxwellian(rng, d);
            v = 2.0 * v;
            auto s = op.sample(v, rng);
            Vec p_in = v + s.v_star;
            Vec p_out = s.v_post + s.v_star_post;
            double e_in = norm2(v) + norm2(s.v_star);
            double e_out = norm2(s.v_post) + norm2(s.v_star_post);
            worst = std::max({worst, norm(p_in - p_out), std::abs(e_in - e_out) / std::max(1.0, e_in)});
        }
        CHECK(worst <= 1e-13);
    }
}

TEST_CASE("Maxwell molecules map a Maxwellian to a Maxwellian")
{
    CollisionOperator op(CollisionKernelSpec::hard_spheres(0.0), 3);
    CounterRng rng(5, 0);
    std::vector<double> xs;
    for (int i = 0; i < 20000; ++i)
        xs.push_back(op.sample_post(sample_maxwellian(rng, 3), rng)[0]);
    double D = testing::ks_statistic(xs, testing::std_normal_cdf);
    CHECK(testing::ks_pvalue(D, xs.size()) > 0.01);
}

TEST_CASE("hard spheres leave kappa M invariant for the jump chain")
{
    // pre-collision v ~ kappa M by rejection; the post-collision law must match
    CollisionOperator op(CollisionKernelSpec::hard_spheres(1.0), 3);
    CounterRng rng(6, 0);
    const double kmax = op.kappa_at_speed(7.0);
    std::vector<double> pre, post;
    while (pre.size() < 20000)
    {
        Vec v = sample_maxwellian(rng, 3);
        if (norm(v) > 7.0 || rng.uniform() * kmax > op.kappa(v))
            continue;
        pre.push_back(norm(v));
        post.push_back(norm(op.sample_post(v, rng)));
    }
    // two-sample KS on the speeds, independent halves to avoid pairing
    std::vector<double> a(pre.begin(), pre.begin() + 10000);
    std::vector<double> b(post.begin() + 10000, post.end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double D = 0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size())
    {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        D = std::max(D, std::abs(double(i) / a.size() - double(j) / b.size()));
    }
    CHECK(testing::ks_pvalue(D, a.size() * b.size() / (a.size() + b.size())) > 0.01);
}

TEST_CASE("kappa agrees with the noncentral chi mean for gamma = 1, d = 3")
{
    CollisionOperator op(CollisionKernelSpec::hard_spheres(1.0), 3);
    for (double s : {0.0, 0.3, 1.0, 2.5, 6.0})
    {
        // E |v - Z| for Z ~ N(0, I_3), |v| = s
        double exact = s == 0 ? 2.0 * std::sqrt(2.0 / std::numbers::pi)
                              : std::sqrt(2.0 / std::numbers::pi) * std::exp(-0.5 * s * s) +
                                    (s + 1.0 / s) * std::erf(s / std::sqrt(2.0));
        CHECK(op.rel_speed_moment(s) == doctest::Approx(exact).epsilon(1e-7));
        CHECK(op.moment_quadrature(s, 0) == doctest::Approx(exact).epsilon(1e-9));
    }
}

TEST_CASE("Maxwell molecules have constant rate equal to the angular mass")
{
    const auto& op = *testing::shared_operator(0.0, 2);
    for (double s : {0.0, 1.0, 5.0})
        CHECK(op.kappa_at_speed(s) == doctest::Approx(op.angular_mass()).epsilon(1e-10));
}

TEST_CASE("the gain kernel is a rate density of mass kappa")
{
    // int k(w -> v) dv = kappa(w), checked in d = 2 by polar quadrature
    const auto& op = *testing::shared_operator(0.0, 2);
    Vec w{0.7, -0.3, 0};
    double total = 0;
    const int nr = 400, na = 256;
    const double rmax = 9.0;
    for (int i = 0; i < nr; ++i)
    {
        double r = (i + 0.5) * rmax / nr;
        for (int j = 0; j < na; ++j)
        {
            double a = 2.0 * std::numbers::pi * (j + 0.5) / na;
            total += gain_kernel_density(op, w, Vec{r * std::cos(a), r * std::sin(a), 0}) * r;
        }
    }
    total *= (rmax / nr) * (2.0 * std::numbers::pi / na);
    CHECK(total == doctest::Approx(op.kappa(w)).epsilon(5e-3));
}

TEST_CASE("log gain density is consistent with the density")
{
    CollisionOperator op(CollisionKernelSpec::hard_spheres(1.0), 3);
    Vec w{0.5, 0.2, -0.1};
    Vec v{-0.4, 1.0, 0.3};
    CHECK(std::exp(log_gain_kernel_density(op, w, v)) ==
          doctest::Approx(gain_kernel_density(op, w, v)).epsilon(1e-12));
    CHECK(std::isfinite(log_gain_kernel_density(op, Vec{0, 0, 0}, Vec{40.0, 0, 0})));
}

TEST_CASE("the Carleman bound sits below the density on its grid")
{
    const auto& op = *testing::shared_operator(1.0, 2);
    auto c = carleman_lower_bound(2.0, 1.0, op, 7);
    CHECK(c.alpha_L > 0);
    CHECK(c.alpha_L <= c.raw_min);
    CHECK(c.raw_min <= gain_kernel_density(op, Vec{2.0, 0, 0}, Vec{0, 1.0, 0}) * (1 + 1e-12));
}
