#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "audit.hpp"
#include "collision.hpp"
#include "domain.hpp"
#include "ensemble.hpp"
#include "parallel.hpp"
#include "simulate.hpp"

namespace kh {

enum class LyapunovForm
{
    TorusBGKTrivial,        // V = 1
    TorusBoltzmannV2,       // V = |v|^2
    ConfinedBGK,            // V = 1 + Phi + |v|^2/2 + x.v/4 + |x|^2/8
    ConfinedBoltzmann,      // V = Phi + |v|^2/2 + a x.v + b |x|^2
    SubgeometricBGK,        // as ConfinedBGK, drift exponent q < 1
    SubgeometricBoltzmann,  // V = Phi + |v|^2/2 + a x.v/<x> + b <x>
    Custom
};

std::string to_string(LyapunovForm f);

// V = c0 + c_phi Phi(x) + c_kin |v|^2/2 + a X(x).v + b Y(x), with
// (X, Y) = (x, |x|^2), or (x/<x>, <x>) when bracket_weights is set,
// carrying the drift bound U V <= -lambda V^q + K.
struct LyapunovSpec
{
    LyapunovForm form = LyapunovForm::Custom;
    double c0 = 0;
    double c_phi = 1;
    double c_kin = 1;
    double a = 0;
    double b = 0;
    bool bracket_weights = false;
    double lambda = 0;
    double K = 0;
    double q = 1;
    AuditTrail audit;

    static LyapunovSpec torus_bgk_trivial();
    static LyapunovSpec torus_boltzmann_v2();
    static LyapunovSpec confined_bgk();
    static LyapunovSpec confined_boltzmann(double alpha, double beta);
    static LyapunovSpec subgeometric_bgk();
    static LyapunovSpec subgeometric_boltzmann(double alpha, double beta);
    // Only the kinetic term: V = |v|^2 / 2.
    static LyapunovSpec kinetic_energy();

    double eval(const PhasePoint& z, const Potential* phi) const;
    // Checks V >= 0 preconditions on the coefficients.
    void validate() const;
};

// U V = (T* + L*) V for the BGK process, from the closed-form identities.
double generator_apply_bgk(const LyapunovSpec& spec, const PhasePoint& z, const DomainSpec& domain);

// U V for the linear Boltzmann process, with L* moments by quadrature.
double generator_apply_boltzmann(const LyapunovSpec& spec, const PhasePoint& z,
                                 const DomainSpec& domain, const CollisionOperator& op);

double generator_apply(const LyapunovSpec& spec, const PhasePoint& z, const ProcessSpec& process);

// Drift constants. Each returns a spec with lambda, K (and q) set and an
// audit trail of the intermediate constants.
LyapunovSpec drift_constants_confined_bgk(const Potential& phi, int d);
LyapunovSpec drift_constants_torus_boltzmann(const CollisionOperator& op);
LyapunovSpec drift_constants_confined_boltzmann(const Potential& phi, const CollisionOperator& op);
LyapunovSpec drift_constants_subgeometric_bgk(const Potential& phi, int d, double beta);
LyapunovSpec drift_constants_subgeometric_boltzmann(const Potential& phi, const CollisionOperator& op,
                                                    double delta);

// Moment bounds used by the Boltzmann drift constants.
struct BoltzmannMomentBounds
{
    double gamma_b = 0;  // momentum transfer
    double A0 = 0;       // inf n / (1 + s^gamma)
    double C1 = 0;       // sup p1 / (1 + s^gamma)
    double C2 = 0;       // sup m / (1 + s^gamma)
    double alpha1 = 0;   // L*(|v|^2) <= -alpha1 <s>^{gamma+2} + alpha2
    double alpha2 = 0;
    double C_xv = 0;     // |L*(x.v)| <= C_xv <v>^{gamma+1} |x|
};

BoltzmannMomentBounds boltzmann_moment_bounds(const CollisionOperator& op, double s_max = 60.0);

struct DriftGridReport
{
    int points = 0;
    int violations = 0;
    double worst_margin = 0;  // max of U V + lambda V^q - K
    PhasePoint worst{};
};

// Evaluates U V + lambda V^q - K at quasi-random points of
// {|x| <= radius} x {|v| <= radius} (torus: x over the unit cell).
DriftGridReport check_drift_on_grid(const LyapunovSpec& spec, const ProcessSpec& process,
                                    int points = 10000, double radius = 50.0, double tol = 1e-12,
                                    const Execution& exec = {});

struct EmpiricalDriftReport
{
    std::vector<double> times;
    std::vector<double> mean;
    std::vector<double> stderr_;
    std::vector<double> envelope;  // e^{-lambda t} E V_0 + K / lambda
    bool pass = true;
};

// Simulates from `start` and checks E V(Z_t) <= envelope + 3 stderr on an
// even time grid over [0, horizon].
EmpiricalDriftReport empirical_drift_check(const ProcessSpec& process, const LyapunovSpec& spec,
                                           const Ensemble& start, double horizon, int steps = 10,
                                           const Execution& exec = {});

} // namespace kh
