#include <doctest.h>

#include <cmath>
#include <memory>
#include <vector>

#include "kinetic_harris/distance.hpp"
#include "kinetic_harris/errors.hpp"
#include "kinetic_harris/fit.hpp"
#include "kinetic_harris/potential.hpp"

using namespace kh;

namespace {

double total_mass(const BinnedReference& ref)
{
    double s = 0;
    for (std::uint64_t k = 0; k < ref.bin_count(); ++k)
        s += ref.mass(k);
    return s;
}

Ensemble box_law(double lo, double hi, std::size_t n, std::uint64_t seed)
{
    CounterRng rng(seed, 0);
    std::vector<PhasePoint> pts(n);
    for (auto& p : pts)
    {
        p.x[0] = lo + (hi - lo) * rng.uniform();
        p.v[0] = rng.normal();
    }
    return Ensemble::from_points(1, pts, seed);
}

} // namespace

TEST_CASE("bin masses sum to one and the box covers the requested mass")
{
    Equilibrium torus(DomainSpec::torus(1));
    BinnedReference a(torus, BinningSpec::default_for(torus, 32));
    CHECK(total_mass(a) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(a.coverage() >= 0.999);

    auto quad = std::make_shared<QuadraticPotential>(1.0);
    Equilibrium whole(DomainSpec::whole_space(1, quad));
    BinnedReference b(whole, BinningSpec::default_for(whole, 32));
    CHECK(total_mass(b) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(b.coverage() >= 0.999);

    Equilibrium whole2(DomainSpec::whole_space(2, quad));
    BinnedReference c(whole2, BinningSpec::default_for(whole2, 8));
    CHECK(total_mass(c) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("a box missing equilibrium mass is rejected")
{
    Equilibrium torus(DomainSpec::torus(1));
    auto spec = BinningSpec::default_for(torus, 16);
    spec.lo[1] = -1.0;
    spec.hi[1] = 1.0;
    CHECK_THROWS_AS(BinnedReference(torus, spec), BoxCoverageInsufficient);
}

TEST_CASE("disjoint laws are at distance 2")
{
    Equilibrium torus(DomainSpec::torus(1));
    BinnedReference ref(torus, BinningSpec::default_for(torus, 64));
    auto a = box_law(0.0, 0.5, 50000, 1);
    auto b = box_law(0.5, 1.0, 50000, 2);
    CHECK(tv_between(a, b, ref) == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(tv_between(a, a, ref) == 0.0);
}

TEST_CASE("a Dirac mass is nearly singular to the equilibrium")
{
    Equilibrium torus(DomainSpec::torus(1));
    BinnedReference ref(torus, BinningSpec::default_for(torus, 64));
    auto e = Ensemble::dirac(1, PhasePoint{{0.3, 0, 0}, {0.2, 0, 0}}, 1000, 1);
    double tv = estimate_tv(e, ref).value;
    CHECK(tv == doctest::Approx(2.0 - 2.0 * ref.mass(ref.key(e.points[0]))).epsilon(1e-14));
    CHECK(tv > 1.99);
}

TEST_CASE("weighted distance reduces and dominates")
{
    auto quad = std::make_shared<QuadraticPotential>(1.0);
    Equilibrium eq(DomainSpec::whole_space(1, quad));
    BinnedReference ref(eq, BinningSpec::default_for(eq, 32));
    auto e = sample_equilibrium(eq, 20000, 9, StreamTag::Initial);
    for (auto& p : e.points)
        p.x[0] += 0.3;

    LyapunovSpec zero;
    zero.c_phi = 0;
    zero.c_kin = 0;
    auto w0 = make_bin_weight(ref, zero, quad.get());
    CHECK(estimate_weighted_tv(e, ref, w0).value == estimate_tv(e, ref).value);

    LyapunovSpec V = LyapunovSpec::kinetic_energy();
    V.c_phi = 1.0;
    auto w = make_bin_weight(ref, V, quad.get());
    CHECK(estimate_weighted_tv(e, ref, w).value >= estimate_tv(e, ref).value);
    // total of the weight is E_mu[1 + V] up to binning of the centers
    CHECK(w.total == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("serial and parallel binning agree")
{
    Equilibrium torus(DomainSpec::torus(2));
    BinnedReference ref(torus, BinningSpec::default_for(torus, 16));
    auto e = sample_equilibrium(torus, 30000, 5);
    CHECK(bin_keys(e, ref, Execution{3, false}) == bin_keys_serial(e, ref));
    auto a = estimate_tv(e, ref, Execution{3, false});
    auto b = estimate_tv(e, ref, Execution{0, true});
    CHECK(a.value == b.value);
    CHECK(a.stderr_ == b.stderr_);
}

TEST_CASE("noise floor predicts the equilibrium-sample TV and scales as N^{-1/2}")
{
    Equilibrium torus(DomainSpec::torus(1));
    BinnedReference ref(torus, BinningSpec::default_for(torus, 32));
    double small = estimate_tv(sample_equilibrium(torus, 25000, 1), ref).value;
    double large = estimate_tv(sample_equilibrium(torus, 100000, 2), ref).value;
    CHECK(small == doctest::Approx(noise_floor(ref, 25000)).epsilon(0.1));
    CHECK(large == doctest::Approx(noise_floor(ref, 100000)).epsilon(0.1));
    CHECK(small / large == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("noise floor sd matches the spread of equilibrium-sample TV")
{
    auto phi = std::make_shared<QuadraticPotential>(1.0);
    Equilibrium eq(DomainSpec::whole_space(1, phi));
    BinnedReference ref(eq, BinningSpec::default_for(eq));
    const std::size_t n = 50000;
    std::vector<double> tv;
    for (std::uint64_t s = 0; s < 40; ++s)
        tv.push_back(estimate_tv(sample_equilibrium(eq, n, 500 + s), ref).value);
    double mean = 0, var = 0;
    for (double x : tv)
        mean += x / tv.size();
    for (double x : tv)
        var += (x - mean) * (x - mean) / (tv.size() - 1);
    // 40 draws pin the sd to about 11%
    CHECK(std::sqrt(var) == doctest::Approx(noise_floor_sd(ref, n)).epsilon(0.3));
    CHECK(mean == doctest::Approx(noise_floor(ref, n)).epsilon(0.02));
}

TEST_CASE("decay fits recover exact models")
{
    std::vector<double> t, de, da;
    for (int i = 0; i < 12; ++i)
    {
        t.push_back(0.5 * i);
        de.push_back(3.0 * std::exp(-0.7 * t.back()));
        da.push_back(1.0 / (1.0 + t.back()));
    }
    auto fe = fit_decay(t, de, {}, DecayModel::Exponential);
    CHECK(fe.rate == doctest::Approx(0.7).epsilon(1e-6));
    CHECK(std::exp(fe.log_C) == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(fe.r2 == doctest::Approx(1.0));
    auto fa = fit_decay(t, da, {}, DecayModel::Algebraic);
    CHECK(fa.rate == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("decay fit under 5% noise: accurate rates and calibrated intervals")
{
    int covered = 0;
    double worst = 0;
    for (int rep = 0; rep < 100; ++rep)
    {
        CounterRng rng(77, static_cast<std::uint64_t>(rep));
        std::vector<double> t, d, se;
        for (int i = 0; i < 20; ++i)
        {
            double ti = 0.25 * i;
            double exact = 3.0 * std::exp(-0.7 * ti);
            t.push_back(ti);
            d.push_back(exact * (1.0 + 0.05 * rng.normal()));
            se.push_back(0.05 * exact);
        }
        auto f = fit_decay(t, d, se, DecayModel::Exponential);
        worst = std::max(worst, std::abs(f.rate - 0.7) / 0.7);
        if (std::abs(f.rate - 0.7) <= 1.96 * f.rate_stderr)
            ++covered;
    }
    CHECK(worst <= 0.05);
    CHECK(covered >= 88);
}

TEST_CASE("the fit window stops at the noise floor")
{
    std::vector<double> t{0, 1, 2, 3, 4, 5, 6, 7};
    std::vector<double> d{1, 0.5, 0.25, 0.125, 0.0625, 0.03, 0.03, 0.03};
    std::vector<double> se(8, 0.01);
    auto f = fit_decay(t, d, se, DecayModel::Exponential);
    CHECK(f.t_hi == 4.0);
    CHECK(f.points == 5);
    CHECK_THROWS_AS(fit_decay(t, d, se, DecayModel::Exponential, 1.0), InsufficientSignal);
    CHECK_THROWS_AS(fit_decay(t, d, se, DecayModel::Exponential, 0.0, 0.1), InsufficientSignal);
}
