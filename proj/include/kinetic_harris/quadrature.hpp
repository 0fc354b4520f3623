#pragma once

#include <functional>

namespace kh {

struct QuadratureConfig
{
    double abs_tol = 1e-10;
    double rel_tol = 1e-12;
    unsigned max_depth = 25;
};

// Adaptive Gauss-Kronrod (15 point) on [a, b]; infinite ends allowed.
// Throws NonConvergedQuadrature when the error estimate exceeds
// max(abs_tol, rel_tol |I|).
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureConfig& cfg = {});

// |S^{d-1}| * int_0^inf r^{d-1} f(r) dr
double radial_integral(const std::function<double(double)>& f, int d,
                       const QuadratureConfig& cfg = {});

} // namespace kh
