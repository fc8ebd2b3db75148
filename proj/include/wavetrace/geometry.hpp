#pragma once

#include <cmath>

namespace wavetrace {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
    Vec2& operator*=(double a) { x *= a; y *= a; return *this; }
};

inline Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
inline Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
inline Vec2 operator*(double a, Vec2 v) { return v *= a; }
inline Vec2 operator*(Vec2 v, double a) { return v *= a; }

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double norm(const Vec2& v) { return std::hypot(v.x, v.y); }

/// Unit vector perpendicular to v, oriented so that at launch (v along +zeta)
/// it points along +xi, i.e. toward increasing wavefront arc length.
inline Vec2 transverse_unit(const Vec2& v) {
    const double n = norm(v);
    return {v.y / n, -v.x / n};
}

inline constexpr double pi = 3.14159265358979323846;

/// Coupling coefficient of the wave-potential term in the dimensionless
/// motion equations.
inline constexpr double wave_coupling = 1.0 / (8.0 * pi * pi);

}  // namespace wavetrace
