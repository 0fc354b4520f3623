#pragma once

#include <memory>
#include <vector>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include "domain.hpp"
#include "rng.hpp"

namespace kh {

enum class AngularForm
{
    Uniform,       // hard spheres, b constant
    TabulatedEven  // b(z) = b(-z), table on a uniform grid of z in [0, 1]
};

// B(|u|, sigma) = |u|^gamma b(sigma . u/|u|)
struct CollisionKernelSpec
{
    double gamma = 0.0;
    AngularForm form = AngularForm::Uniform;
    // Uniform: constant value of b; <= 0 selects unit angular mass.
    double b0 = 0.0;
    std::vector<double> b_table;

    static CollisionKernelSpec hard_spheres(double gamma, double b0 = 0.0);
    static CollisionKernelSpec tabulated(double gamma, std::vector<double> table);
};

// A collision kernel bound to a dimension, with cached quadratures of the
// moments E_{v*~M} |v-v*|^gamma (...) as functions of |v|.
class CollisionOperator
{
  public:
    CollisionOperator(const CollisionKernelSpec& spec, int d, double table_speed = 16.0,
                      int table_nodes = 1601);

    int dim() const { return d_; }
    double gamma() const { return spec_.gamma; }
    const CollisionKernelSpec& spec() const { return spec_; }

    double b(double z) const;
    double b_lower() const { return b_lower_; }
    double b_upper() const { return b_upper_; }
    // int_{S^{d-1}} b(sigma . e) d sigma
    double angular_mass() const { return mass_; }
    // mean of sigma . e under the normalized angular law
    double mean_cosine() const { return mean_cos_; }
    // m_b (1 - mean_cosine) / 2; L*(|v|^2) = gamma_b E[|u|^gamma (|v*|^2 - |v|^2)]
    double momentum_transfer() const { return 0.5 * mass_ * (1.0 - mean_cos_); }

    // Moments over v* ~ M at |v| = s, with u = v - v*:
    double rel_speed_moment(double s) const;   // E |u|^gamma
    double speed_moment(double s) const;       // E |u|^gamma |v*|
    double energy_moment(double s) const;      // E |u|^gamma |v*|^2
    double drift_moment(double s) const;       // E |u|^gamma (u . v/|v|)

    // Direct quadrature, bypassing the tables. which: 0..3 in the order above.
    double moment_quadrature(double s, int which) const;

    double kappa_at_speed(double s) const { return mass_ * rel_speed_moment(s); }
    double kappa(const Vec& v) const { return kappa_at_speed(norm(v)); }

    // sup of kappa over speeds sqrt(2 (energy - phi_inf)), padded by 1%.
    double thinning_bound(double segment_energy, double phi_inf = 0.0) const;

    struct Sample
    {
        Vec v_star{};
        Vec sigma{};
        Vec v_post{};
        Vec v_star_post{};
        int proposals = 0;
    };

    // Draws v* from M(v*) |v-v*|^gamma / kappa(v) and sigma from b.
    Sample sample(const Vec& v, CounterRng& rng) const;
    Vec sample_post(const Vec& v, CounterRng& rng) const { return sample(v, rng).v_post; }
    Vec sample_partner(const Vec& v, CounterRng& rng, int* proposals = nullptr) const;
    Vec sample_sigma(const Vec& uhat, CounterRng& rng) const;

    // sigma-parametrized post-collision pair.
    static std::pair<Vec, Vec> collide(const Vec& v, const Vec& v_star, const Vec& sigma);

    // Cap on proposals per partner draw; a 5% acceptance floor gives a
    // negligible chance of reaching it.
    static constexpr int max_proposals = 2000;

  private:
    using Spline = boost::math::interpolators::cardinal_cubic_b_spline<double>;
    double table_or_quadrature(const Spline& sp, double s, int which) const;

    CollisionKernelSpec spec_;
    int d_;
    double b_lower_ = 0;
    double b_upper_ = 0;
    double mass_ = 0;
    double mean_cos_ = 0;
    double gaussian_moment_ = 1;  // E |Z|^gamma
    double table_speed_;
    std::vector<Spline> tables_;
};

using CollisionOperatorPtr = std::shared_ptr<const CollisionOperator>;

// Rate density k(w -> v) of jumping from pre-collision velocity w to v,
// from the Carleman representation.
double gain_kernel_density(const CollisionOperator& op, const Vec& w, const Vec& v);
// Its logarithm, finite where the density itself underflows.
double log_gain_kernel_density(const CollisionOperator& op, const Vec& w, const Vec& v);

struct CarlemanBound
{
    double alpha_L = 0;   // padded lower bound
    double raw_min = 0;   // smallest value seen on the grid
    double log_alpha_L = 0;
    double log_raw_min = 0;
    Vec w_at_min{};
    Vec v_at_min{};
};

// Lower bound of k(w -> v) over |w| <= R_L, |v| <= r_L, padded down 5%.
CarlemanBound carleman_lower_bound(double R_L, double r_L, const CollisionOperator& op, int grid = 9);

} // namespace kh
