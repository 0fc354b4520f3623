#pragma once

#include <array>
#include <cmath>
#include <memory>

namespace kh {

class Potential;

inline constexpr int max_dim = 3;

// Fixed-size storage; components beyond the active dimension stay zero so
// dot products and norms need not know d.
using Vec = std::array<double, max_dim>;

struct PhasePoint
{
    Vec x{};
    Vec v{};
};

inline double dot(const Vec& a, const Vec& b)
{
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline double norm2(const Vec& a) { return dot(a, a); }
inline double norm(const Vec& a) { return std::sqrt(norm2(a)); }
inline double bracket(const Vec& x) { return std::sqrt(1.0 + norm2(x)); }

inline Vec operator+(const Vec& a, const Vec& b)
{
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline Vec operator-(const Vec& a, const Vec& b)
{
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
inline Vec operator*(double s, const Vec& a)
{
    return {s * a[0], s * a[1], s * a[2]};
}

enum class Geometry
{
    Torus,
    WholeSpace
};

// Unit torus T^d or R^d with a confining potential.
struct DomainSpec
{
    int dim = 1;
    Geometry geometry = Geometry::Torus;
    std::shared_ptr<const Potential> potential;

    static DomainSpec torus(int d);
    static DomainSpec whole_space(int d, std::shared_ptr<const Potential> phi);

    bool is_torus() const { return geometry == Geometry::Torus; }
};

// (2 pi)^{-d/2} exp(-|v|^2 / 2)
double maxwellian_density(const Vec& v, int d);
double maxwellian_density_at_speed(double speed, int d);

// Reduce each active coordinate into [0, 1).
Vec wrap_torus(const Vec& x, int d);

// Surface area of S^{d-1} and volume of the radius-r ball in R^d.
double sphere_area(int d);
double ball_volume(int d, double r);

void check_dimension(int d);

} // namespace kh
