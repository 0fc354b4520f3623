#pragma once

#include <memory>
#include <optional>
#include <string>

#include "domain.hpp"

namespace kh {

// Assertion x . grad Phi >= gamma1 * g(x) + gamma2 * Phi(x) - A with
// g = <x>^p (bracket) or |x|^p (plain).
struct DriftParams
{
    double gamma1 = 0;
    double gamma2 = 0;
    double A = 0;
    double p = 2;
    bool bracket = false;

    double growth(double r) const;
};

// Radially symmetric confining potential. All built-ins are radial and the
// equilibrium sampler and the radial quadratures rely on it.
class Potential
{
  public:
    virtual ~Potential() = default;

    virtual std::string name() const = 0;
    virtual double radial_value(double r) const = 0;
    // dPhi/dr and d2Phi/dr2
    virtual double radial_slope(double r) const = 0;
    virtual double radial_curvature(double r) const = 0;

    // C_R = max_{|x| <= R} |grad Phi|
    virtual double grad_sup(double R) const = 0;
    // max_{|x| <= R} |D^2 Phi| (spectral norm)
    virtual double hess_sup(double R) const = 0;
    virtual double lower_bound() const = 0;

    // Declared drift parameters of the natural form for this potential.
    virtual std::optional<DriftParams> drift_params() const = 0;
    // Drift parameters for a requested growth exponent; nullopt when the
    // potential grows too slowly to support it.
    virtual std::optional<DriftParams> drift_params_for(double p, bool bracket) const;
    // Upper growth Phi <= gamma3 <x>^p, when it holds.
    virtual std::optional<double> upper_growth(double p) const;

    double value(const Vec& x) const { return radial_value(norm(x)); }
    Vec gradient(const Vec& x) const;
    // D^2 Phi(x) y
    Vec hessian_apply(const Vec& x, const Vec& y) const;

    // max_{|x| <= R} Phi
    double max_on_ball(double R) const;
    // sup{ r : Phi(r) <= level }; requires confinement.
    double sublevel_radius(double level) const;
};

using PotentialPtr = std::shared_ptr<const Potential>;

// Phi = c |x|^2 / 2
class QuadraticPotential final : public Potential
{
  public:
    explicit QuadraticPotential(double c = 1.0);
    std::string name() const override { return "quadratic"; }
    double radial_value(double r) const override { return 0.5 * c_ * r * r; }
    double radial_slope(double r) const override { return c_ * r; }
    double radial_curvature(double) const override { return c_; }
    double grad_sup(double R) const override { return c_ * R; }
    double hess_sup(double) const override { return c_; }
    double lower_bound() const override { return 0.0; }
    std::optional<DriftParams> drift_params() const override;
    std::optional<double> upper_growth(double p) const override;
    double c() const { return c_; }

  private:
    double c_;
};

// Phi = c |x|^4 / 4
class QuarticPotential final : public Potential
{
  public:
    explicit QuarticPotential(double c = 1.0);
    std::string name() const override { return "quartic"; }
    double radial_value(double r) const override { return 0.25 * c_ * r * r * r * r; }
    double radial_slope(double r) const override { return c_ * r * r * r; }
    double radial_curvature(double r) const override { return 3.0 * c_ * r * r; }
    double grad_sup(double R) const override { return c_ * R * R * R; }
    double hess_sup(double R) const override { return 3.0 * c_ * R * R; }
    double lower_bound() const override { return 0.0; }
    std::optional<DriftParams> drift_params() const override;

  private:
    double c_;
};

// Phi = c <x>^p with 0 < p <= 2. Covers the subquadratic family
// c <x>^{2 beta} (p = 2 beta) and the sub-linear-plus family c <x>^{1+delta}.
class BracketPowerPotential final : public Potential
{
  public:
    BracketPowerPotential(double c, double p, std::string name);
    static std::shared_ptr<BracketPowerPotential> subquadratic(double c, double beta);
    static std::shared_ptr<BracketPowerPotential> sublinear_plus(double c, double delta);

    std::string name() const override { return name_; }
    double radial_value(double r) const override;
    double radial_slope(double r) const override;
    double radial_curvature(double r) const override;
    double grad_sup(double R) const override;
    double hess_sup(double R) const override;
    double lower_bound() const override { return c_; }
    std::optional<DriftParams> drift_params() const override;
    std::optional<double> upper_growth(double p) const override;
    double exponent() const { return p_; }

  private:
    double c_;
    double p_;
    std::string name_;
};

// Wraps a potential and replaces its declared drift parameters; used when
// a configuration states its own (gamma1, gamma2, A).
class DeclaredDriftPotential final : public Potential
{
  public:
    DeclaredDriftPotential(PotentialPtr base, DriftParams declared);
    std::string name() const override { return base_->name(); }
    double radial_value(double r) const override { return base_->radial_value(r); }
    double radial_slope(double r) const override { return base_->radial_slope(r); }
    double radial_curvature(double r) const override { return base_->radial_curvature(r); }
    double grad_sup(double R) const override { return base_->grad_sup(R); }
    double hess_sup(double R) const override { return base_->hess_sup(R); }
    double lower_bound() const override { return base_->lower_bound(); }
    std::optional<DriftParams> drift_params() const override { return declared_; }
    std::optional<DriftParams> drift_params_for(double p, bool bracket) const override;
    std::optional<double> upper_growth(double p) const override { return base_->upper_growth(p); }

  private:
    PotentialPtr base_;
    DriftParams declared_;
};

// Smallest offset A making the drift inequality hold along the radial
// profile for given (gamma1, gamma2, p), padded upward.
double drift_offset(const Potential& phi, double gamma1, double gamma2, double p, bool bracket);

struct DriftCheck
{
    bool ok = true;
    double worst_margin = 0;  // min over samples of lhs - rhs
    Vec worst_x{};
    int samples = 0;
};

// Checks the drift inequality at quasi-random points of {|x| <= radius}.
DriftCheck check_drift_params(const Potential& phi, const DriftParams& dp, int d,
                              int samples = 10000, double radius = 50.0);

} // namespace kh
