#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "wavetrace/errors.hpp"
#include "wavetrace/geometry.hpp"
#include "wavetrace/launch.hpp"
#include "wavetrace/state.hpp"

namespace wavetrace {

/// Transverse geometry of a wavefront fan: cumulative arc length along the
/// ray polyline and the per-ray unit vector perpendicular to rho.
struct WavefrontParametrization {
    std::vector<double> arc_coordinate;
    std::vector<Vec2> transverse_unit_vec;
};

/// Builds the arc-length parametrization. Throws CausticError (without a
/// partial bundle; the integrator attaches one) when the fan's spatial
/// xi-order no longer matches the launch-label order.
inline WavefrontParametrization parametrize(const WavefrontFan& fan) {
    const std::size_t n = fan.size();
    for (std::size_t i = 1; i < n; ++i)
        if (!(fan.rays[i].xi > fan.rays[i - 1].xi))
            throw CausticError(fan.step_index, static_cast<int>(i - 1),
                               static_cast<int>(i));
    WavefrontParametrization p;
    p.arc_coordinate.resize(n);
    p.transverse_unit_vec.resize(n);
    p.arc_coordinate[0] = 0.0;
    for (std::size_t i = 1; i < n; ++i)
        p.arc_coordinate[i] =
            p.arc_coordinate[i - 1] +
            norm(fan.rays[i].position() - fan.rays[i - 1].position());
    for (std::size_t i = 0; i < n; ++i)
        p.transverse_unit_vec[i] = transverse_unit(fan.rays[i].momentum());
    return p;
}

namespace lagrange {

/// Second derivative of the degree-2 Lagrange polynomial through
/// (sa,fa), (sb,fb), (sc,fc); constant in s.
inline double second_derivative(double sa, double sb, double sc, double fa,
                                double fb, double fc) {
    return 2.0 * (fa / ((sa - sb) * (sa - sc)) + fb / ((sb - sa) * (sb - sc)) +
                  fc / ((sc - sa) * (sc - sb)));
}

/// First derivative of the same polynomial, evaluated at s.
inline double first_derivative(double s, double sa, double sb, double sc,
                               double fa, double fb, double fc) {
    return fa * (2.0 * s - sb - sc) / ((sa - sb) * (sa - sc)) +
           fb * (2.0 * s - sa - sc) / ((sb - sa) * (sb - sc)) +
           fc * (2.0 * s - sa - sb) / ((sc - sa) * (sc - sb));
}

}  // namespace lagrange

/// Wave potential G_i = (1/R_i) d^2R/ds^2 on the fan, from the 3-point
/// Lagrange stencil in wavefront arc length. Edge rays reuse the stencil of
/// their nearest interior neighbor. R is constant along each ray, so the
/// longitudinal Laplacian contribution is taken as zero and G reduces to the
/// transverse second derivative.
///
/// One binomial (1/4, 1/2, 1/4) pass is applied to d^2R/ds^2 before dividing
/// by R. The force feeds back into the ray positions the stencil reads, which
/// amplifies the grid-scale (sawtooth) mode in the low-amplitude tails; the
/// filter zeroes exactly that mode and adds only an O(h^2) error, matching
/// the stencil's own order.
inline std::vector<double> second_derivative_on_fan(
    const WavefrontFan& fan, const WavefrontParametrization& param,
    std::vector<std::uint8_t>* floored = nullptr) {
    const std::size_t n = fan.size();
    if (n < 5) throw ConfigError("wave potential needs at least 5 rays");
    double peak = 0.0;
    for (const auto& r : fan.rays) peak = std::max(peak, r.amplitude);
    const double floor_abs = amplitude_floor * peak;

    const auto& s = param.arc_coordinate;
    std::vector<double> d2(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t c = std::min(std::max<std::size_t>(i, 1), n - 2);
        d2[i] = lagrange::second_derivative(
            s[c - 1], s[c], s[c + 1], fan.rays[c - 1].amplitude,
            fan.rays[c].amplitude, fan.rays[c + 1].amplitude);
    }
    std::vector<double> smoothed(n);
    smoothed[0] = d2[0];
    smoothed[n - 1] = d2[n - 1];
    for (std::size_t i = 1; i + 1 < n; ++i)
        smoothed[i] = 0.25 * d2[i - 1] + 0.5 * d2[i] + 0.25 * d2[i + 1];

    std::vector<double> g(n, 0.0);
    if (floored) floored->assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const double R = fan.rays[i].amplitude;
        if (!std::isfinite(R) || R < floor_abs) {
            if (floored) (*floored)[i] = 1;
            continue;  // G extrapolated as 0
        }
        // Edge rays adopt the full G of the nearest interior neighbor, i.e.
        // its stencil divided by its own R. Dividing the neighbor's curvature
        // by the smaller edge amplitude instead overstates edge G by the
        // amplitude ratio, and the resulting spurious edge force feeds on the
        // widening gap it creates.
        const std::size_t c = std::min(std::max<std::size_t>(i, 1), n - 2);
        g[i] = smoothed[c] / fan.rays[c].amplitude;
    }
    return g;
}

/// Gaussian mollification of per-ray values along the arc coordinate, with a
/// fixed physical width and a renormalized truncated kernel. Quadrature
/// weights are the half-spacings, so the operator is the same continuum
/// smoothing regardless of ray count and preserves linear fields to O(h^2).
inline std::vector<double> mollify_along(const std::vector<double>& s,
                                         const std::vector<double>& v,
                                         double sigma) {
    const std::size_t n = v.size();
    if (!(sigma > 0.0) || n < 3) return v;
    const double cut = 3.0 * sigma;
    std::vector<double> ds(n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t ja = j == 0 ? 0 : j - 1;
        const std::size_t jb = j + 1 < n ? j + 1 : n - 1;
        ds[j] = 0.5 * (s[jb] - s[ja]);
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double num = 0.0, den = 0.0;
        for (std::size_t j = i + 1; j-- > 0;) {
            const double d = s[i] - s[j];
            if (d > cut) break;
            const double w = std::exp(-0.5 * d * d / (sigma * sigma)) * ds[j];
            num += w * v[j];
            den += w;
        }
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = s[j] - s[i];
            if (d > cut) break;
            const double w = std::exp(-0.5 * d * d / (sigma * sigma)) * ds[j];
            num += w * v[j];
            den += w;
        }
        out[i] = den > 0.0 ? num / den : v[i];
    }
    return out;
}

/// Tangential derivative dG/ds per ray (3-point Lagrange first derivative,
/// one-sided at the edges).
inline std::vector<double> tangential_g_derivative(
    const WavefrontParametrization& param, const std::vector<double>& g) {
    const std::size_t n = g.size();
    std::vector<double> dg(n, 0.0);
    const auto& s = param.arc_coordinate;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t c = std::min(std::max<std::size_t>(i, 1), n - 2);
        dg[i] = lagrange::first_derivative(s[i], s[c - 1], s[c], s[c + 1],
                                           g[c - 1], g[c], g[c + 1]);
    }
    return dg;
}

/// Full gradient vectors: (dG/ds) times the transverse unit, i.e. imposed to
/// be purely perpendicular to rho so the wave term never changes |rho|.
inline std::vector<Vec2> wave_potential_gradient(
    const WavefrontParametrization& param, const std::vector<double>& g) {
    const std::vector<double> dg = tangential_g_derivative(param, g);
    std::vector<Vec2> grad(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        grad[i] = dg[i] * param.transverse_unit_vec[i];
    return grad;
}

/// Convenience pass filling fan.g_values / fan.g_gradient in place.
inline void compute_wave_potential(WavefrontFan& fan,
                                   std::vector<std::uint8_t>* floored = nullptr) {
    const WavefrontParametrization param = parametrize(fan);
    fan.g_values = second_derivative_on_fan(fan, param, floored);
    fan.g_gradient = wave_potential_gradient(param, fan.g_values);
}

}  // namespace wavetrace
