#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "collision.hpp"
#include "domain.hpp"
#include "ensemble.hpp"
#include "flow.hpp"
#include "parallel.hpp"

namespace kh {

enum class ProcessKind
{
    BGK,
    LinearBoltzmann
};

// Free transport (or Hamiltonian flow) between velocity jumps. BGK jumps at
// rate 1 to a fresh Maxwellian; linear Boltzmann jumps at rate kappa(v) to a
// post-collision velocity against a Maxwellian partner.
struct ProcessSpec
{
    ProcessKind kind = ProcessKind::BGK;
    DomainSpec domain;
    FlowConfig flow;
    CollisionOperatorPtr collision;

    static ProcessSpec bgk(DomainSpec domain, FlowConfig flow = {});
    static ProcessSpec boltzmann(DomainSpec domain, CollisionOperatorPtr op, FlowConfig flow = {});

    int dim() const { return domain.dim; }
    void validate() const;
};

// Time spent and jumps made per speed bin. Occupancy is only recorded on
// the torus, where the speed is constant between jumps.
struct RateHistogram
{
    std::vector<double> edges;
    std::vector<double> occupancy;
    std::vector<std::uint64_t> events;
    std::uint64_t proposals = 0;

    RateHistogram() = default;
    RateHistogram(double max_speed, int bins);

    int bin(double speed) const;
    void merge(const RateHistogram& other);
    // events / occupancy per bin; NaN where nothing was observed
    std::vector<double> rates() const;
};

// Advances one particle from t0 to t1 on its own random stream.
void advance_particle(PhasePoint& z, std::uint64_t& block, std::uint64_t& jumps, std::uint64_t seed,
                      std::uint64_t index, double t0, double t1, const ProcessSpec& process,
                      RateHistogram* hist = nullptr);

// OpenMP kernel; the result does not depend on the worker count.
Ensemble simulate(const Ensemble& start, const ProcessSpec& process, double t_final,
                  const Execution& exec = {}, RateHistogram* hist = nullptr);

// Plain loop over particles, kept as the reference for the parallel kernel.
Ensemble simulate_serial(const Ensemble& start, const ProcessSpec& process, double t_final,
                         RateHistogram* hist = nullptr);

struct MeanEstimate
{
    double mean = 0;
    double stderr_ = 0;
};

// Mean and standard error of f over the ensemble. Partial sums are formed
// over fixed chunks and combined in chunk order, so the result is
// independent of the worker count.
MeanEstimate ensemble_mean(const Ensemble& e, const std::function<double(const PhasePoint&)>& f,
                           const Execution& exec = {});

struct Moments
{
    MeanEstimate v2;   // |v|^2
    MeanEstimate phi;  // Phi(x), 0 on the torus
    MeanEstimate xv;   // x . v
};

Moments compute_moments(const Ensemble& e, const DomainSpec& domain, const Execution& exec = {});

inline constexpr std::size_t reduction_chunk = 4096;

} // namespace kh
