// Serial reference kernels against the OpenMP kernels.

#include <benchmark/benchmark.h>

#include <memory>

#include "kinetic_harris/collision.hpp"
#include "kinetic_harris/distance.hpp"
#include "kinetic_harris/equilibrium.hpp"
#include "kinetic_harris/potential.hpp"
#include "kinetic_harris/simulate.hpp"

using namespace kh;

namespace {

ProcessSpec process_for(int which)
{
    switch (which)
    {
    case 0: return ProcessSpec::bgk(DomainSpec::torus(1));
    case 1:
        return ProcessSpec::boltzmann(DomainSpec::torus(3),
                                      std::make_shared<CollisionOperator>(CollisionKernelSpec::hard_spheres(1.0), 3));
    default:
    {
        FlowConfig f;
        f.dt = 1e-2;
        return ProcessSpec::bgk(DomainSpec::whole_space(1, std::make_shared<QuadraticPotential>(1.0)), f);
    }
    }
}

const char* process_name(int which)
{
    switch (which)
    {
    case 0: return "torus-bgk";
    case 1: return "torus-boltzmann-d3";
    default: return "confined-bgk";
    }
}

void BM_simulate_serial(benchmark::State& state)
{
    auto p = process_for(static_cast<int>(state.range(0)));
    Ensemble start = Ensemble::dirac(p.dim(), PhasePoint{{0.5, 0.5, 0.5}, {1, 0, 0}}, 20000, 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(simulate_serial(start, p, 2.0));
    state.SetLabel(process_name(static_cast<int>(state.range(0))));
    state.SetItemsProcessed(state.iterations() * start.size());
}

void BM_simulate_openmp(benchmark::State& state)
{
    auto p = process_for(static_cast<int>(state.range(0)));
    Ensemble start = Ensemble::dirac(p.dim(), PhasePoint{{0.5, 0.5, 0.5}, {1, 0, 0}}, 20000, 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(simulate(start, p, 2.0));
    state.SetLabel(process_name(static_cast<int>(state.range(0))));
    state.SetItemsProcessed(state.iterations() * start.size());
}

struct BinningFixture
{
    Equilibrium eq{DomainSpec::torus(2)};
    BinnedReference ref{eq, BinningSpec::default_for(eq)};
    Ensemble e = sample_equilibrium(eq, 200000, 3);
};

void BM_bin_keys_serial(benchmark::State& state)
{
    BinningFixture f;
    for (auto _ : state)
        benchmark::DoNotOptimize(bin_keys_serial(f.e, f.ref));
    state.SetItemsProcessed(state.iterations() * f.e.size());
}

void BM_bin_keys_openmp(benchmark::State& state)
{
    BinningFixture f;
    for (auto _ : state)
        benchmark::DoNotOptimize(bin_keys(f.e, f.ref));
    state.SetItemsProcessed(state.iterations() * f.e.size());
}

void BM_estimate_tv(benchmark::State& state)
{
    BinningFixture f;
    Execution exec;
    exec.serial = state.range(0) == 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(estimate_tv(f.e, f.ref, exec));
    state.SetLabel(exec.serial ? "serial" : "openmp");
    state.SetItemsProcessed(state.iterations() * f.e.size());
}

} // namespace

BENCHMARK(BM_simulate_serial)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_simulate_openmp)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_bin_keys_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_bin_keys_openmp)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_estimate_tv)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
