#pragma once

#include <cstdint>
#include <vector>

#include "domain.hpp"

namespace kh {

class Potential;

// Velocity Stormer-Verlet with a fixed step; the step actually used is
// t / ceil(|t| / dt) so the flow lands exactly on t.
struct FlowConfig
{
    double dt = 1e-3;
    double tol_energy = 1e-6;
    std::uint64_t max_steps = 2'000'000'000ull;
};

double hamiltonian(const PhasePoint& z, const Potential& phi);

// Characteristic flow for time t (t < 0 runs the scheme backwards). Torus
// and force-free flows are exact straight-line transport.
PhasePoint flow(const PhasePoint& z, double t, const DomainSpec& domain, const FlowConfig& cfg);

// Verlet flow in R^d under phi.
PhasePoint verlet_flow(const PhasePoint& z, double t, const Potential& phi, const FlowConfig& cfg);

// Time T for which |X_t| <= lambda R when |x0| <= R; may be +inf.
double existence_horizon(const Vec& x0, const Vec& v0, double lambda, double R, const Potential& phi);

// Largest t1 satisfying C t^2 e^{C t^2} <= 1/4, t <= sqrt(R)/sqrt(2 C_{2R}) and
// t <= 2 sqrt(R)/sqrt(C_{9R}) with C = sup_{|x|<=9R} |D^2 Phi|.
double shooting_time_bound(double R, const Potential& phi);

struct ShootingResult
{
    Vec v0{};
    int iterations = 0;
    double residual = 0.0;
    // largest |v^{k+1}-v^k| / |v^k-v^{k-1}| seen
    double max_ratio = 0.0;
    std::vector<double> increments;
};

// Fixed point of A_t(v) = v - (X_t(x0, v/t) - x1) started at x1 - x0.
ShootingResult shoot(const Vec& x0, const Vec& x1, double t, const Potential& phi,
                     const FlowConfig& cfg, double tol = 1e-10, int max_iter = 50);

// Constants for the transport lower bound after time s from a point of B(R).
struct TransportConstants
{
    double R = 0;
    double s = 0;
    double R2 = 0;      // 4R/s
    double E0 = 0;      // sup H on B(R) x B(R2)
    double Rprime = 0;  // speed bound on the energy set, > sqrt(2 (E0 - inf Phi))
    double jacobian_sup = 0;
    double M = 0;       // padded jacobian_sup
    double alpha_T = 0; // 1/M
};

TransportConstants transport_minorisation_constants(double R, double s, const Potential& phi, int d,
                                                    const FlowConfig& cfg = {}, int net = 512);

// sup of |det d X_s / d v| over a quasi-random net of B(R) x B(R2) and
// s in [a, b], from the variational equation J' = [0 I; -D^2 Phi 0] J.
double jacobian_det_sup(double R, double R2, double a, double b, const Potential& phi, int d,
                        const FlowConfig& cfg = {}, int net = 512);

inline constexpr double jacobian_pad = 1.05;

} // namespace kh
