#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kinetic_harris/certificates.hpp"
#include "kinetic_harris/errors.hpp"

using namespace kh;

TEST_CASE("Doeblin rate from alpha and t*")
{
    auto r = doeblin_rate(1.0, 1.0 - std::exp(-1.0));
    CHECK(r.lambda_rate == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.prefactor == doctest::Approx(std::exp(1.0)).epsilon(1e-14));
    // the continuous bound dominates the iterated contraction
    for (double t : {0.0, 0.5, 1.0, 2.7, 10.0})
        CHECK(r.bound(t) >= r.iterated_bound(t) * (1 - 1e-14));
}

TEST_CASE("torus BGK minorisation constant matches its closed form")
{
    for (int d : {1, 2, 3})
    {
        double t = 2.5;
        double delta = std::max(1.01 * torus_delta_min(t, d), std::sqrt(0.5 * d));
        auto m = doeblin_alpha_torus_bgk(t, d, delta);
        double M = std::pow(2.0 * std::numbers::pi, -0.5 * d) * std::exp(-0.5 * delta * delta);
        double c = std::exp(-t) * std::pow(t, 2.0 - d) * M * M / 9.0;
        double vol = d == 1 ? 2.0 * delta : d == 2 ? std::numbers::pi * delta * delta
                                                   : 4.0 / 3.0 * std::numbers::pi * std::pow(delta, 3);
        CHECK(m.density() == doctest::Approx(c).epsilon(1e-12));
        CHECK(m.alpha() == doctest::Approx(c * vol).epsilon(1e-12));
        CHECK(torus_delta_min(t, d) == doctest::Approx(2.0 * 1.01 * std::sqrt(double(d)) / (t / 3.0)));
    }
}

TEST_CASE("optimized torus BGK certificate beats a fixed t*")
{
    auto best = optimize_torus_bgk(1);
    double t = 1.0;
    double delta = std::max(1.01 * torus_delta_min(t, 1), std::sqrt(0.5));
    auto fixed = doeblin_rate(t, doeblin_alpha_torus_bgk(t, 1, delta).alpha());
    CHECK(best.rate.lambda_rate >= fixed.lambda_rate);
    CHECK(best.rate.lambda_rate > 0);
}

TEST_CASE("Harris contraction matches a direct evaluation")
{
    double beta = 0.5, beta0 = 0.25, D = 1.0, R = 10.0, aD = 0.5, a0 = 0.8;
    auto h = harris_contraction_linear(beta, beta0, aD, D, R, a0);
    double gamma = beta0 / D;
    double expected = std::max(1.0 - (beta - beta0), (2.0 + R * gamma * a0) / (2.0 + R * gamma));
    CHECK(expected == doctest::Approx(8.0 / 9.0));
    CHECK(h.alpha_bar == doctest::Approx(expected).epsilon(1e-14));
    CHECK(std::exp(h.log_gamma) == doctest::Approx(gamma));
}

TEST_CASE("Harris preconditions name the violated inequality")
{
    CHECK_THROWS_WITH_AS(harris_contraction_linear(0.5, 0.25, 0.5, 1.0, 3.9, 0.99),
                         doctest::Contains("R > 2D/(1 - alpha_D)"), PreconditionViolated);
    CHECK_THROWS_WITH_AS(harris_contraction_linear(0.5, 0.25, 0.5, 1.0, 10.0, 0.6),
                         doctest::Contains("alpha0"), PreconditionViolated);
    CHECK_THROWS_AS(harris_contraction_linear(0.5, 0.6, 0.5, 1.0, 10.0, 0.8), PreconditionViolated);
}

TEST_CASE("log-domain Harris agrees with the linear form and survives underflow")
{
    auto lin = harris_contraction_linear(1e-3, 5e-4, 0.5, 1.0, 10.0, 0.8);
    auto lg = harris_contraction(std::log(1e-3), 0.5, 0.5, 1.0, 10.0, 0.8);
    CHECK(lg.log_gap == doctest::Approx(lin.log_gap).epsilon(1e-13));
    auto tiny = harris_contraction(-5000.0, 0.5, 0.5, 1.0, 10.0, 0.8);
    CHECK(std::isfinite(tiny.log_gap));
    CHECK(tiny.log_neg_log_alpha_bar == doctest::Approx(tiny.log_gap));
    CHECK(tiny.log_gap < -5000.0);
}

TEST_CASE("H_phi for q = 1/2 matches its closed form and inverts")
{
    SubgeometricRate r(0.5);
    for (double u : {0.05, 0.3, 1.0, 2.0, 10.0, 1e4, 1e8, 1e14})
    {
        CHECK(std::abs(r.H(u) - H_half_closed_form(u)) <= 1e-10 * std::max(1.0, std::abs(H_half_closed_form(u))));
        double back = r.H_inverse(r.H(u));
        CHECK(std::abs(back - u) <= 1e-9 * u);
    }
}

TEST_CASE("subgeometric bound decays with slope -q/(1-q)")
{
    for (double q : {0.3, 0.5, 0.7})
    {
        SubgeometricRate r(q);
        double expected = -q / (1.0 - q);
        CHECK(r.asymptotic_exponent() == doctest::Approx(-expected));
        CHECK(std::abs(r.log_slope(1e6, 1.0) - expected) <= 0.02 * std::abs(expected));
    }
    SubgeometricRate r(0.5);
    CHECK(r.bound(0.0, 1.0) >= 2.0);
    CHECK(r.bound(10.0, 1.0) < r.bound(1.0, 1.0));
}

TEST_CASE("scenario names round-trip")
{
    for (auto k : {ScenarioKind::TorusBGK, ScenarioKind::TorusBoltzmann, ScenarioKind::ConfinedBGK,
                   ScenarioKind::ConfinedBoltzmann, ScenarioKind::SubgeometricBGK,
                   ScenarioKind::SubgeometricBoltzmann})
        CHECK(scenario_from_string(to_string(k)) == k);
    CHECK_FALSE(scenario_from_string("torus"));
}

TEST_CASE("torus BGK certificate assembly and audit")
{
    Scenario s;
    Equilibrium eq(s.domain());
    auto c = assemble_certificate(s, eq);
    CHECK(c.kind == CertificateKind::Doeblin);
    CHECK(c.tv_bound(0.0, 1.0) >= 2.0);
    auto text = format_audit(c);
    CHECK(text.find("lambda_rate = ") != std::string::npos);
    CHECK(text.find("  # ") != std::string::npos);
}
