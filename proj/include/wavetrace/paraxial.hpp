#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "wavetrace/errors.hpp"
#include "wavetrace/geometry.hpp"
#include "wavetrace/launch.hpp"

namespace wavetrace {

namespace fft {

/// In-place iterative radix-2 FFT (inverse unscaled; callers divide by n).
inline void transform(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw DomainError("fft size must be a power of two");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * pi / static_cast<double>(len);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

}  // namespace fft

struct ParaxialGridSpec {
    int n_points = 4096;          // power of two
    double half_width = 0.0;      // transverse domain [-W, W)
    double d_zeta = 0.5;
    double absorber_fraction = 0.1;  // supergaussian mask on each outer edge
    int record_every = 1;

    void validate() const {
        if (n_points < 16 || (n_points & (n_points - 1)) != 0)
            throw ConfigError("paraxial grid n_points must be a power of two >= 16");
        if (!(half_width > 0.0)) throw ConfigError("paraxial grid half_width must be > 0");
        if (!(d_zeta > 0.0)) throw ConfigError("paraxial grid d_zeta must be > 0");
        if (!(absorber_fraction >= 0.0 && absorber_fraction < 0.5))
            throw ConfigError("paraxial absorber_fraction must lie in [0, 0.5)");
        if (record_every < 1) throw ConfigError("paraxial record_every must be >= 1");
    }
};

/// |psi|^2 on the grid, one row per recorded zeta plane.
struct ParaxialResult {
    std::vector<double> xi;
    std::vector<double> zeta;
    std::vector<std::vector<double>> intensity;
    double max_power_drift = 0.0;

    /// Index of the recorded plane closest to the requested zeta.
    std::size_t plane_index(double z) const {
        if (zeta.empty() || z > zeta.back() + 1e-9)
            throw RangeError("requested zeta beyond propagated range");
        std::size_t best = 0;
        for (std::size_t i = 1; i < zeta.size(); ++i)
            if (std::abs(zeta[i] - z) < std::abs(zeta[best] - z)) best = i;
        return best;
    }
};

/// Reasonable default grid for a profile: domain 4x the fan half-domain,
/// power-of-two size giving >= 8 samples per beam half width.
inline ParaxialGridSpec default_grid(const LaunchProfile& profile,
                                     double fan_half_domain) {
    ParaxialGridSpec spec;
    spec.half_width = 4.0 * fan_half_domain;
    const double w0 = profile.epsilon() > 0.0 ? 1.0 / profile.epsilon()
                                              : fan_half_domain / 3.0;
    int n = 16;
    while ((2.0 * spec.half_width) / n > w0 / 8.0 && n < (1 << 20)) n <<= 1;
    spec.n_points = std::max(n, 2048);
    return spec;
}

/// Split-step angular-spectrum propagation of the scalar paraxial wave
/// equation in vacuum: with psi = u(xi,zeta) e^{i 2 pi zeta},
///   du/dzeta = (i / 4 pi) d^2u/dxi^2,
/// advanced exactly per step in the spectral domain. The launch field is the
/// real profile amplitude (planar phase), matching the trajectory launch
/// conditions. Independent of the ray machinery by construction.
inline ParaxialResult paraxial_grid_propagate(const LaunchProfile& profile,
                                              double zeta_max,
                                              const ParaxialGridSpec& spec) {
    spec.validate();
    if (!(zeta_max > 0.0)) throw ConfigError("paraxial zeta_max must be > 0");

    const std::size_t n = static_cast<std::size_t>(spec.n_points);
    const double W = spec.half_width;
    const double dx = 2.0 * W / static_cast<double>(n);
    if (profile.epsilon() > 0.0 && dx > (1.0 / profile.epsilon()) / 8.0)
        throw OracleResolutionError(
            "paraxial grid too coarse: need >= 8 samples per beam half width");

    std::vector<std::complex<double>> u(n);
    std::vector<double> xi(n);
    for (std::size_t j = 0; j < n; ++j) {
        xi[j] = -W + static_cast<double>(j) * dx;
        u[j] = profile.shape(xi[j]);
    }

    // Per-mode phase advance and absorbing mask, both fixed over the run.
    std::vector<std::complex<double>> phase(n);
    for (std::size_t m = 0; m < n; ++m) {
        const double fm = (m <= n / 2) ? static_cast<double>(m)
                                       : static_cast<double>(m) - static_cast<double>(n);
        const double kappa = 2.0 * pi * fm / (2.0 * W);
        const double arg = -kappa * kappa * spec.d_zeta / (4.0 * pi);
        phase[m] = {std::cos(arg), std::sin(arg)};
    }
    std::vector<double> mask(n, 1.0);
    if (spec.absorber_fraction > 0.0) {
        const double edge = W * (1.0 - spec.absorber_fraction);
        for (std::size_t j = 0; j < n; ++j) {
            const double a = std::abs(xi[j]);
            if (a > edge) {
                const double t = (a - edge) / (W - edge);
                mask[j] = std::exp(-6.0 * t * t * t * t);
            }
        }
    }

    const int n_steps = static_cast<int>(std::ceil(zeta_max / spec.d_zeta));
    ParaxialResult out;
    out.xi = xi;
    auto record = [&](double z) {
        std::vector<double> row(n);
        for (std::size_t j = 0; j < n; ++j) row[j] = std::norm(u[j]);
        out.intensity.push_back(std::move(row));
        out.zeta.push_back(z);
    };
    record(0.0);

    auto power = [&]() {
        double p = 0.0;
        for (const auto& c : u) p += std::norm(c);
        return p;
    };

    for (int k = 0; k < n_steps; ++k) {
        const double p_before = power();
        fft::transform(u, false);

        // Aliasing watch: energy reaching the spectral band edge.
        double band_edge = 0.0, total = 0.0;
        for (std::size_t m = 0; m < n; ++m) {
            const double e = std::norm(u[m]);
            total += e;
            const std::size_t d = std::min(m > n / 2 ? n - m : m, n / 2);
            if (d > (n / 2) * 49 / 50) band_edge += e;
        }
        if (total > 0.0 && band_edge / total > 1e-6)
            throw OracleResolutionError(
                "spectral energy at band edge exceeds 1e-6 of total (aliasing)");

        for (std::size_t m = 0; m < n; ++m) u[m] *= phase[m];
        fft::transform(u, true);
        const double inv = 1.0 / static_cast<double>(n);
        for (auto& c : u) c *= inv;

        const double p_after = power();
        if (p_before > 0.0)
            out.max_power_drift = std::max(
                out.max_power_drift, std::abs(p_after - p_before) / p_before);

        for (std::size_t j = 0; j < n; ++j) u[j] *= mask[j];

        const double z = (k + 1) * spec.d_zeta;
        if ((k + 1) % spec.record_every == 0 || k + 1 == n_steps) record(z);
    }
    return out;
}

}  // namespace wavetrace
