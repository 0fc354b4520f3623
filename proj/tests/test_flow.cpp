#include <doctest.h>

#include <cmath>
#include <memory>

#include "kinetic_harris/flow.hpp"
#include "kinetic_harris/potential.hpp"

using namespace kh;

namespace {

double harmonic_error(double dt, double t)
{
    auto phi = std::make_shared<QuadraticPotential>(1.0);
    FlowConfig cfg;
    cfg.dt = dt;
    PhasePoint z{{1.0, 0, 0}, {0.5, 0, 0}};
    PhasePoint e = flow(z, t, DomainSpec::whole_space(1, phi), cfg);
    double x = std::cos(t) + 0.5 * std::sin(t);
    double v = -std::sin(t) + 0.5 * std::cos(t);
    return std::max(std::abs(e.x[0] - x), std::abs(e.v[0] - v));
}

} // namespace

TEST_CASE("verlet matches the harmonic closed form at second order")
{
    double e1 = harmonic_error(1e-3, 10.0);
    double e2 = harmonic_error(5e-4, 10.0);
    CHECK(e1 <= 1e-4);
    CHECK(e1 / e2 >= 3.5);
    CHECK(e1 / e2 <= 4.5);
}

TEST_CASE("torus flow is exact free transport")
{
    FlowConfig cfg;
    PhasePoint z{{0.25, 0.5, 0}, {0.3, -1.7, 0}};
    PhasePoint e = flow(z, 2.0, DomainSpec::torus(2), cfg);
    CHECK(e.x[0] == doctest::Approx(0.85).epsilon(1e-14));
    CHECK(e.x[1] == doctest::Approx(std::fmod(0.5 - 3.4 + 4.0, 1.0)).epsilon(1e-14));
    CHECK(e.v[1] == -1.7);
}

TEST_CASE("verlet flow is reversible and conserves energy")
{
    auto phi = std::make_shared<QuarticPotential>(1.0);
    FlowConfig cfg;
    cfg.dt = 1e-3;
    auto dom = DomainSpec::whole_space(2, phi);
    PhasePoint z{{0.7, -0.2, 0}, {0.1, 1.1, 0}};
    PhasePoint e = flow(z, 3.0, dom, cfg);
    CHECK(std::abs(hamiltonian(e, *phi) - hamiltonian(z, *phi)) < 1e-5);
    PhasePoint back = flow(e, -3.0, dom, cfg);
    CHECK(back.x[0] == doctest::Approx(z.x[0]).epsilon(1e-10));
    CHECK(back.v[1] == doctest::Approx(z.v[1]).epsilon(1e-10));
}

TEST_CASE("shooting recovers v0 = t x1 / sin t for the harmonic potential")
{
    auto phi = std::make_shared<QuadraticPotential>(1.0);
    FlowConfig cfg;
    cfg.dt = 1e-4;
    double R = 1.0;
    double t = 0.9 * shooting_time_bound(R, *phi);
    Vec x1{0.6, 0, 0};
    auto s = shoot(Vec{0, 0, 0}, x1, t, *phi, cfg, 1e-12, 50);
    CHECK(s.residual <= 1e-10);
    CHECK(s.iterations <= 25);
    CHECK(s.max_ratio <= 0.26);
    // the iteration solves for v = t v0; dt = 1e-4 keeps the Verlet error
    // below the tolerance
    CHECK(s.v0[0] == doctest::Approx(t * x1[0] / std::sin(t)).epsilon(1e-8));
}
