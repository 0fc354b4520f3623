#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "domain.hpp"
#include "ensemble.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"
#include "rng.hpp"

namespace kh {

// Z = int exp(-Phi(x)) dx by radial quadrature.
double equilibrium_normalizer(const Potential& phi, int d, const QuadratureConfig& q = {});

// The invariant law: uniform x M(v) on the torus, M(v) e^{-Phi(x)} / Z on R^d.
//
// Whole-space positions are drawn exactly by rejection from a
// piecewise-constant envelope on the radial density r^{d-1} e^{-Phi(r)}.
class Equilibrium
{
  public:
    explicit Equilibrium(DomainSpec domain, const QuadratureConfig& q = {},
                         double acceptance_floor = 0.01);

    const DomainSpec& domain() const { return domain_; }
    int dim() const { return domain_.dim; }
    double normalizer() const { return z_; }

    PhasePoint sample(CounterRng& rng) const;
    Vec sample_position(CounterRng& rng) const;

    // e^{-Phi(x)} / Z (1 on the torus)
    double position_density(const Vec& x) const;
    // E_mu[f(|x|)] for whole space
    double expect_radial(const std::function<double(double)>& f) const;
    // Radius containing all but `tail` of the position mass.
    double position_quantile_radius(double tail) const;
    double envelope_acceptance() const { return acceptance_; }

  private:
    double radial_weight(double r) const;

    DomainSpec domain_;
    QuadratureConfig quad_;
    double z_ = 1.0;
    double phi0_ = 0.0;
    double rmax_ = 0.0;
    double cell_ = 0.0;
    std::vector<double> height_;
    std::vector<double> cumulative_;
    double acceptance_ = 1.0;
};

// Streams are tagged so a reference sample and an initial ensemble drawn
// with the same seed stay independent.
Ensemble sample_equilibrium(const Equilibrium& eq, std::size_t n, std::uint64_t seed,
                            StreamTag tag = StreamTag::Equilibrium, const Execution& exec = {});

} // namespace kh
