#include <doctest.h>

#include <cmath>
#include <cstring>
#include <memory>

#include "kinetic_harris/equilibrium.hpp"
#include "kinetic_harris/potential.hpp"
#include "kinetic_harris/simulate.hpp"
#include "support/operators.hpp"

using namespace kh;

namespace {

bool identical(const Ensemble& a, const Ensemble& b)
{
    return a.size() == b.size() &&
           std::memcmp(a.points.data(), b.points.data(), a.size() * sizeof(PhasePoint)) == 0 &&
           a.rng_block == b.rng_block && a.jumps == b.jumps;
}

void check_worker_independence(const ProcessSpec& p, const Ensemble& start, double t)
{
    auto serial = simulate_serial(start, p, t);
    Execution one{1, false};
    Execution three{3, false};
    CHECK(identical(serial, simulate(start, p, t, one)));
    CHECK(identical(serial, simulate(start, p, t, three)));
    // chained legs: same worker independence
    auto mid = simulate_serial(start, p, 0.5 * t);
    CHECK(identical(simulate_serial(mid, p, t), simulate(simulate(start, p, 0.5 * t, three), p, t, one)));
}

} // namespace

TEST_CASE("OpenMP kernel is bit-identical to the serial loop")
{
    auto quad = std::make_shared<QuadraticPotential>(1.0);
    auto op2 = testing::shared_operator(1.0, 2);
    auto op1 = testing::shared_operator(0.0, 1);
    PhasePoint z{{0.3, 0.6, 0}, {1.0, -2.0, 0}};
    SUBCASE("torus BGK")
    {
        check_worker_independence(ProcessSpec::bgk(DomainSpec::torus(2)), Ensemble::dirac(2, z, 3000, 9), 3.0);
    }
    SUBCASE("confined BGK")
    {
        FlowConfig f;
        f.dt = 1e-2;
        check_worker_independence(ProcessSpec::bgk(DomainSpec::whole_space(1, quad), f),
                                  Ensemble::dirac(1, z, 1000, 9), 2.0);
    }
    SUBCASE("torus Boltzmann")
    {
        check_worker_independence(ProcessSpec::boltzmann(DomainSpec::torus(2), op2),
                                  Ensemble::dirac(2, z, 2000, 9), 2.0);
    }
    SUBCASE("confined Boltzmann")
    {
        FlowConfig f;
        f.dt = 1e-2;
        check_worker_independence(ProcessSpec::boltzmann(DomainSpec::whole_space(1, quad), op1, f),
                                  Ensemble::dirac(1, z, 1000, 9), 2.0);
    }
}

TEST_CASE("torus BGK energy relaxes as 1 + (m0 - 1) e^{-t}")
{
    const double m0 = 25.0;
    PhasePoint z{{0.5, 0, 0}, {5.0, 0, 0}};
    auto e = Ensemble::dirac(1, z, 40000, 17);
    auto p = ProcessSpec::bgk(DomainSpec::torus(1));
    for (double t : {0.25, 1.0, 3.0})
    {
        e = simulate(e, p, t);
        auto m = compute_moments(e, p.domain);
        double exact = 1.0 + (m0 - 1.0) * std::exp(-t);
        CHECK(std::abs(m.v2.mean - exact) <= 4.0 * m.v2.stderr_);
    }
}

TEST_CASE("the equilibrium is invariant for confined BGK")
{
    auto quad = std::make_shared<QuadraticPotential>(1.0);
    auto dom = DomainSpec::whole_space(1, quad);
    Equilibrium eq(dom);
    auto e = sample_equilibrium(eq, 20000, 4);
    FlowConfig f;
    f.dt = 1e-2;
    auto p = ProcessSpec::bgk(dom, f);
    auto m0 = compute_moments(e, dom);
    CHECK(std::abs(m0.phi.mean - 0.5) <= 4.0 * m0.phi.stderr_);
    e = simulate(e, p, 3.0);
    auto m = compute_moments(e, dom);
    CHECK(std::abs(m.v2.mean - 1.0) <= 4.0 * m.v2.stderr_);
    CHECK(std::abs(m.phi.mean - 0.5) <= 4.0 * m.phi.stderr_);
    CHECK(std::abs(m.xv.mean) <= 4.0 * m.xv.stderr_);
}

TEST_CASE("ensemble means do not depend on the worker count")
{
    PhasePoint z{{0.5, 0, 0}, {1.0, 0, 0}};
    auto e = simulate(Ensemble::dirac(1, z, 10000, 3), ProcessSpec::bgk(DomainSpec::torus(1)), 1.0);
    auto f = [](const PhasePoint& p) { return p.v[0] * p.v[0]; };
    auto a = ensemble_mean(e, f, Execution{1, false});
    auto b = ensemble_mean(e, f, Execution{4, false});
    auto c = ensemble_mean(e, f, Execution{0, true});
    CHECK(a.mean == b.mean);
    CHECK(a.mean == c.mean);
    CHECK(a.stderr_ == b.stderr_);
}
