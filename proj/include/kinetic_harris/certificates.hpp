#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "audit.hpp"
#include "collision.hpp"
#include "equilibrium.hpp"
#include "flow.hpp"
#include "lyapunov.hpp"
#include "potential.hpp"
#include "simulate.hpp"

namespace kh {

// P_{t*} delta_z >= alpha nu for every z in the region. The mass alpha and
// the density c of the lower bound c 1_{support of nu} are kept as
// logarithms because the confined constructions produce values far below
// the smallest double.
struct MinorisationCertificate
{
    double t_star = 0;
    double log_alpha = -std::numeric_limits<double>::infinity();
    double log_density = -std::numeric_limits<double>::infinity();
    std::string nu;
    std::string region;
    // small set {V <= level}; infinite when the bound holds everywhere
    double level = std::numeric_limits<double>::infinity();
    // nu is uniform on B(nu_x) x B(nu_v); nu_x is NaN for the whole torus
    double nu_x = std::numeric_limits<double>::quiet_NaN();
    double nu_v = 0;
    AuditTrail audit;

    double alpha() const { return std::exp(log_alpha); }
    double density() const { return std::exp(log_density); }
};

// ||P_t (mu1 - mu2)|| <= prefactor e^{-lambda t} ||mu1 - mu2||
struct DoeblinRate
{
    double t_star = 0;
    double alpha = 0;
    double lambda_rate = 0;
    double prefactor = 1;

    double bound(double t, double initial = 2.0) const;
    // initial (1 - alpha)^{floor(t / t*)}
    double iterated_bound(double t, double initial = 2.0) const;
};

DoeblinRate doeblin_rate(double t_star, double alpha);

// Radius of the torus cover ball, 1.01 sqrt(d).
double torus_cover_radius(int d);
// 2 R / t0 with t0 = t* / 3.
double torus_delta_min(double t_star, int d);

MinorisationCertificate doeblin_alpha_torus_bgk(double t_star, int d, double delta_L);

struct TorusBgkOptimum
{
    double t_star = 0;
    double delta_L = 0;
    DoeblinRate rate;
    MinorisationCertificate cert;
};

// Maximizes lambda_rate over t*, with delta_L at the larger of 1.01 times
// the admissible minimum and the maximizer sqrt(d/2) of delta^d e^{-delta^2}.
TorusBgkOptimum optimize_torus_bgk(int d, double t_lo = 0.2, double t_hi = 40.0);

// Minorisation on T^d x B(delta_L) for starts with |v| <= v_radius.
MinorisationCertificate doeblin_alpha_torus_boltzmann(double t_star, double v_radius,
                                                      const CollisionOperator& op, double delta_L,
                                                      int carleman_grid = 9);

// Minorisation after time t for starts in {|x|, |v| <= K_support}; the
// collision operator is only used for the linear Boltzmann process.
MinorisationCertificate doeblin_alpha_confined(ProcessKind kind, const Potential& phi,
                                               const CollisionOperator* op, int d, double t,
                                               double K_support, const FlowConfig& cfg = {},
                                               int jacobian_net = 512, int carleman_grid = 9);

struct SmallSetRadii
{
    double x = 0;
    double v = 0;
};

// Radii with {V <= level} inside B(x) x B(v), padded by 1%.
SmallSetRadii small_set_radii(const LyapunovSpec& spec, const Potential* phi, double level);

// E_mu V under the equilibrium.
double equilibrium_mean(const LyapunovSpec& spec, const Equilibrium& eq);

// sup over phase space of (num) / (den) for two weights, from the exact
// reduction to |x|, |v| and cos(x, v) = +-1, padded by 1%.
double weight_ratio_sup(const LyapunovSpec& num, const LyapunovSpec& den, const Potential* phi);

// The weight of the confined and subgeometric convergence statements,
// 1 + |v|^2/2 + Phi + |x|^2 (or + <x> for the bracket version).
LyapunovSpec statement_weight(bool bracket);

struct HarrisContraction
{
    double log_beta = 0;
    double log_beta0 = 0;
    double log_gamma = 0;   // gamma = beta0 / D
    double alpha0 = 0;
    double log_gap = 0;     // log(1 - alpha_bar)
    double alpha_bar = 1;
    double log_neg_log_alpha_bar = 0;  // log(-log alpha_bar)
};

// alpha_bar = max{1 - (beta - beta0), (2 + R gamma alpha0) / (2 + R gamma)}
// with beta0 = theta beta, in log form. Throws PreconditionViolated naming
// the violated inequality.
HarrisContraction harris_contraction(double log_beta, double theta, double alpha_D, double D,
                                     double R, double alpha0);

// Plain-valued wrapper: beta0 in (0, beta).
HarrisContraction harris_contraction_linear(double beta, double beta0, double alpha_D, double D,
                                            double R, double alpha0);

struct HarrisCertificate
{
    MinorisationCertificate minorisation;
    LyapunovSpec lyapunov;
    double t_star = 0;
    double alpha_D = 0;
    double D = 0;
    double R = 0;
    HarrisContraction contraction;
    double log_rate = -std::numeric_limits<double>::infinity();  // log(-log(alpha_bar) / t*)
    AuditTrail audit;

    double rate() const { return std::exp(log_rate); }
    // log of the bound on int (1 + V) |P_t mu0 - mu*| given mu0(V), mu*(V)
    double log_bound(double t, double mu0_V, double mustar_V) const;
};

HarrisCertificate harris_alpha_bar(const MinorisationCertificate& m, const LyapunovSpec& lyap,
                                   double R, double theta, double alpha0);

// Best (theta, alpha0) for fixed minorisation and level.
HarrisCertificate harris_optimize_tuning(const MinorisationCertificate& m, const LyapunovSpec& lyap,
                                         double R);

using MinorisationBuilder = std::function<MinorisationCertificate(double level, double t_star)>;

// Scans t* and the small-set level R = factor 2D/(1 - alpha_D); keeps the
// largest certified rate.
HarrisCertificate optimize_harris(const LyapunovSpec& lyap, const MinorisationBuilder& build,
                                  const std::vector<double>& t_grid,
                                  const std::vector<double>& level_factors = {1.05, 1.25, 1.6, 2.5,
                                                                              4.0});

// H(u) = int_1^u ds / phi(s) with phi(s) = 1 + s^q.
class SubgeometricRate
{
  public:
    // The curve is C (mu(V) / H^{-1}(lambda t) + 1 / phi(H^{-1}(lambda t))).
    explicit SubgeometricRate(double q, double lambda = 1.0, double C = 4.0 / 3.0);

    double q() const { return q_; }
    double lambda() const { return lambda_; }
    double constant() const { return C_; }
    double phi(double s) const { return 1.0 + std::pow(s, q_); }
    double H(double u) const;
    double H_inverse(double h) const;
    double bound(double t, double mu_V) const;
    // d log bound / d log t
    double log_slope(double t, double mu_V) const;
    double asymptotic_exponent() const { return q_ / (1.0 - q_); }

  private:
    double segment(double y0, double y1) const;

    double q_;
    double lambda_;
    double C_;
    double step_ = 0.5;
    std::vector<double> cumulative_;  // H(exp(k step))
};

// 2 (sqrt(u) - 1) - 2 log((1 + sqrt(u)) / 2)
double H_half_closed_form(double u);

enum class ScenarioKind
{
    TorusBGK,
    TorusBoltzmann,
    ConfinedBGK,
    ConfinedBoltzmann,
    SubgeometricBGK,
    SubgeometricBoltzmann
};

std::string to_string(ScenarioKind k);
std::optional<ScenarioKind> scenario_from_string(const std::string& s);
bool is_torus(ScenarioKind k);
bool is_boltzmann(ScenarioKind k);
bool is_subgeometric(ScenarioKind k);

struct Scenario
{
    ScenarioKind kind = ScenarioKind::TorusBGK;
    int dim = 1;
    PotentialPtr potential;
    CollisionKernelSpec kernel;
    double beta = 0.5;   // subgeometric BGK exponent
    double delta = 1.0;  // subgeometric Boltzmann exponent
    FlowConfig flow;

    DomainSpec domain() const;
};

ProcessSpec make_process(const Scenario& s, CollisionOperatorPtr op = nullptr);

enum class CertificateKind
{
    Doeblin,
    Harris,
    Subgeometric
};

struct Certificate
{
    ScenarioKind scenario = ScenarioKind::TorusBGK;
    CertificateKind kind = CertificateKind::Doeblin;
    std::optional<DoeblinRate> doeblin;
    std::optional<HarrisCertificate> harris;
    std::optional<SubgeometricRate> subgeometric;
    MinorisationCertificate minorisation;
    LyapunovSpec lyapunov;
    // weight of the reported weighted distance and its comparison constant
    // sup W / (1 + V)
    LyapunovSpec weight;
    double weight_equivalence = 1;
    double mustar_V = 0;
    AuditTrail audit;

    // log of the certified decay rate (exponential scenarios)
    double log_rate() const;
    // exponent p of the algebraic bound (subgeometric scenarios)
    double algebraic_exponent() const;
    // Bounds on ||f_t - mu|| and int W |f_t - mu| for an initial law with
    // the given mean of V and ||f_0 - mu|| <= initial. The weighted bound is
    // +inf when the scenario certifies no weighted norm.
    double tv_bound(double t, double mu0_V, double initial = 2.0) const;
    double weighted_bound(double t, double mu0_V) const;
};

struct CertificateOptions
{
    std::vector<double> t_grid;  // empty selects a default grid
    int jacobian_net = 512;
    int carleman_grid = 9;
};

Certificate assemble_certificate(const Scenario& s, const Equilibrium& eq,
                                 CollisionOperatorPtr op = nullptr,
                                 const CertificateOptions& opt = {});

// One "name = value  # provenance" line per constant.
std::string format_audit(const Certificate& c);

} // namespace kh
