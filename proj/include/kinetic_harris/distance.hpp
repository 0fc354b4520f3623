#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "domain.hpp"
#include "ensemble.hpp"
#include "equilibrium.hpp"
#include "lyapunov.hpp"
#include "parallel.hpp"

namespace kh {

// Axis-aligned box in phase space, axes ordered x_1..x_d, v_1..v_d. Points
// outside the box are folded into the boundary bins.
struct BinningSpec
{
    int dim = 1;
    std::array<double, 2 * max_dim> lo{};
    std::array<double, 2 * max_dim> hi{};
    int bins = 64;

    int axes() const { return 2 * dim; }
    void validate() const;

    // Torus: the unit cell times a velocity cube; whole space: a position
    // cube from the radial quantile. Each side keeps its share of the
    // excluded mass so the box holds at least `coverage` of mu.
    static BinningSpec default_for(const Equilibrium& eq, int bins = 64, double coverage = 0.999);
};

// Equilibrium mass of every bin, computed once.
class BinnedReference
{
  public:
    BinnedReference(const Equilibrium& eq, BinningSpec spec, double min_coverage = 0.999);

    const BinningSpec& spec() const { return spec_; }
    const Equilibrium& equilibrium() const { return *eq_; }
    std::uint64_t bin_count() const { return total_bins_; }
    // mu mass inside the box, before folding
    double coverage() const { return coverage_; }
    // sum of all bin masses, 1 up to rounding
    double total_mass() const { return total_mass_; }

    std::uint64_t key(const PhasePoint& z) const;
    double mass(std::uint64_t key) const;
    PhasePoint center(std::uint64_t key) const;

  private:
    int axis_index(int axis, double value) const;

    const Equilibrium* eq_;
    BinningSpec spec_;
    std::uint64_t total_bins_ = 0;
    double coverage_ = 1.0;
    double total_mass_ = 1.0;
    // per-axis folded masses; position axes are unused when the position
    // law is tabulated jointly
    std::vector<std::vector<double>> axis_mass_;
    std::vector<double> joint_position_;  // d = 2 whole space
};

struct DistanceEstimate
{
    double value = 0;
    double stderr_ = 0;
};

// Bin keys of every particle; the OpenMP and serial versions agree exactly.
std::vector<std::uint64_t> bin_keys(const Ensemble& e, const BinnedReference& ref,
                                    const Execution& exec = {});
std::vector<std::uint64_t> bin_keys_serial(const Ensemble& e, const BinnedReference& ref);

// Weight 1 + a V evaluated at bin centers, with its mu-weighted total over
// all bins.
struct BinWeight
{
    LyapunovSpec V;
    const Potential* phi = nullptr;
    double a = 1.0;
    double total = 0;  // sum over bins of (1 + a V(center)) mu(bin)

    double at(const BinnedReference& ref, std::uint64_t key) const;
};

BinWeight make_bin_weight(const BinnedReference& ref, const LyapunovSpec& V, const Potential* phi,
                          double a = 1.0);

// sum_bins |p_hat - mu| (L1 convention, 2 for mutually singular laws), with
// a standard error from 10 contiguous folds of the ensemble.
DistanceEstimate estimate_tv(const Ensemble& e, const BinnedReference& ref, const Execution& exec = {});

// sum_bins (1 + a V(center)) |p_hat - mu|
DistanceEstimate estimate_weighted_tv(const Ensemble& e, const BinnedReference& ref,
                                      const BinWeight& w, const Execution& exec = {});

// Same estimators from precomputed keys.
double tv_from_keys(std::vector<std::uint64_t> keys, const BinnedReference& ref,
                    const BinWeight* w = nullptr);

// Binned L1 distance between two empirical laws.
double tv_between(const Ensemble& a, const Ensemble& b, const BinnedReference& ref,
                  const Execution& exec = {});

// Expected TV estimate for N exact equilibrium samples (Poisson bias),
// weighted by w when given.
double noise_floor(const BinnedReference& ref, std::size_t n, const BinWeight* w = nullptr);
// Standard deviation of that estimate, from independent Poisson bin counts.
double noise_floor_sd(const BinnedReference& ref, std::size_t n, const BinWeight* w = nullptr);

inline constexpr int tv_folds = 10;
// limit for loops over every bin
inline constexpr std::uint64_t max_enumerated_bins = std::uint64_t(1) << 28;

} // namespace kh
