#include <doctest.h>

#include <cmath>
#include <memory>

#include "kinetic_harris/lyapunov.hpp"
#include "kinetic_harris/potential.hpp"
#include "support/operators.hpp"

using namespace kh;

TEST_CASE("confined BGK drift holds on a grid with lambda = min(gamma1, gamma2, 1)/4")
{
    auto phi = std::make_shared<QuadraticPotential>(1.0);
    auto spec = drift_constants_confined_bgk(*phi, 1);
    auto dp = *phi->drift_params();
    CHECK(spec.lambda == doctest::Approx(std::min({dp.gamma1, dp.gamma2, 1.0}) / 4.0));
    auto rep = check_drift_on_grid(spec, ProcessSpec::bgk(DomainSpec::whole_space(1, phi)), 10000, 50.0, 1e-12);
    CHECK(rep.violations == 0);
}

TEST_CASE("BGK generator on the kinetic energy is the closed form")
{
    auto V = LyapunovSpec::kinetic_energy();
    for (int d : {1, 2, 3})
    {
        PhasePoint z{{0.1, 0.2, 0.3}, {1.5, -0.5, 2.0}};
        for (int i = d; i < 3; ++i)
            z.v[i] = 0;
        // L*(|v|^2/2) = d/2 - |v|^2/2, transport does not act on it
        double expected = 0.5 * d - 0.5 * norm2(z.v);
        CHECK(generator_apply_bgk(V, z, DomainSpec::torus(d)) == doctest::Approx(expected).epsilon(1e-14));
    }
}

TEST_CASE("torus Boltzmann drift constants make |v|^2 a Lyapunov function")
{
    auto op = testing::shared_operator(1.0, 2);
    auto spec = drift_constants_torus_boltzmann(*op);
    CHECK(spec.lambda > 0);
    auto rep = check_drift_on_grid(spec, ProcessSpec::boltzmann(DomainSpec::torus(2), op), 2000, 12.0, 1e-9);
    CHECK(rep.violations == 0);
}

TEST_CASE("declared drift parameters are checked by sampling")
{
    QuadraticPotential phi(1.0);
    DriftParams good{0.5, 1.0, 0.0, 2.0, false};
    CHECK(check_drift_params(phi, good, 2).ok);
    DriftParams bad{1.0, 1.0, 0.0, 2.0, false};
    auto r = check_drift_params(phi, bad, 2);
    CHECK_FALSE(r.ok);
    CHECK(norm(r.worst_x) > 0);
}
