#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "wavetrace/errors.hpp"
#include "wavetrace/geometry.hpp"

namespace wavetrace {

/// Analytic paraxial Gaussian-beam half width in units of lambda0:
///   w(zeta)/lambda0 = (1/eps) * sqrt(1 + (eps^2 zeta / pi)^2),
/// i.e. w(z) = w0 sqrt(1 + (z/z_R)^2) with z_R = pi w0^2 / lambda0.
inline double gaussian_envelope(double epsilon, double zeta) {
    if (!(epsilon > 0.0 && epsilon <= 1.0))
        throw DomainError("gaussian_envelope: epsilon must lie in (0, 1]");
    if (!(zeta >= 0.0)) throw DomainError("gaussian_envelope: zeta must be >= 0");
    const double u = epsilon * epsilon * zeta / pi;
    return std::sqrt(1.0 + u * u) / epsilon;
}

/// Dimensionless Rayleigh range pi/eps^2.
inline double rayleigh_range(double epsilon) {
    return pi / (epsilon * epsilon);
}

/// Worst-case deviation between an analytic gradient and central differences
/// over a set of probe points.
inline double finite_difference_gradient_check(
    const std::function<double(double, double)>& field,
    const std::function<Vec2(double, double)>& analytic_gradient,
    const std::vector<Vec2>& points, double h) {
    if (!(h > 0.0)) throw DomainError("finite_difference_gradient_check: h must be > 0");
    double worst = 0.0;
    for (const Vec2& p : points) {
        const Vec2 num{(field(p.x + h, p.y) - field(p.x - h, p.y)) / (2.0 * h),
                       (field(p.x, p.y + h) - field(p.x, p.y - h)) / (2.0 * h)};
        const Vec2 ana = analytic_gradient(p.x, p.y);
        worst = std::max({worst, std::abs(num.x - ana.x), std::abs(num.y - ana.y)});
    }
    return worst;
}

/// Same check for a 1-D second derivative (used against the profiles'
/// analytic d^2R/dxi^2).
inline double finite_difference_second_derivative_check(
    const std::function<double(double)>& f,
    const std::function<double(double)>& analytic_dd,
    const std::vector<double>& points, double h) {
    if (!(h > 0.0)) throw DomainError("finite_difference check: h must be > 0");
    double worst = 0.0;
    for (double x : points) {
        const double num = (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
        worst = std::max(worst, std::abs(num - analytic_dd(x)));
    }
    return worst;
}

}  // namespace wavetrace
