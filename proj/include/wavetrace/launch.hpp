#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "wavetrace/errors.hpp"
#include "wavetrace/state.hpp"

namespace wavetrace {

/// Relative amplitude below which rays are not launched; keeps G = R''/R away
/// from deep-tail divisions that cannot affect the beam core.
inline constexpr double amplitude_floor = 1e-8;

/// Initial transverse amplitude distribution R(xi, zeta=0).
///
/// The dynamics only ever see the shape function (peak value 1); a positive
/// user prefactor is carried separately in `scale` and applied at output
/// time, which makes the normalization independence of G structural rather
/// than a floating-point accident.
class LaunchProfile {
public:
    enum class Kind { gaussian, algebraic, two_beam, custom_samples };

    static LaunchProfile gaussian(double epsilon, double scale = 1.0) {
        check_epsilon(epsilon);
        check_scale(scale);
        LaunchProfile p;
        p.kind_ = Kind::gaussian;
        p.epsilon_ = epsilon;
        p.scale_ = scale;
        const double e2 = epsilon * epsilon;
        p.shape_ = [e2](double xi) { return std::exp(-e2 * xi * xi); };
        p.shape_dd_ = [e2](double xi) {
            return (4.0 * e2 * e2 * xi * xi - 2.0 * e2) * std::exp(-e2 * xi * xi);
        };
        p.default_half_domain_ = 3.0 / epsilon;
        return p;
    }

    static LaunchProfile algebraic(double epsilon, int N, double scale = 1.0) {
        check_epsilon(epsilon);
        check_scale(scale);
        if (N < 1) throw ConfigError("algebraic profile needs N >= 1, got " +
                                     std::to_string(N));
        LaunchProfile p;
        p.kind_ = Kind::algebraic;
        p.epsilon_ = epsilon;
        p.N_ = N;
        p.scale_ = scale;
        p.shape_ = [epsilon, N](double xi) {
            return 1.0 / (1.0 + ipow(epsilon * xi, 2 * N));
        };
        // R = 1/(1+u), u = (eps*xi)^{2N}:
        //   R'' = -u''/(1+u)^2 + 2 u'^2/(1+u)^3
        p.shape_dd_ = [epsilon, N](double xi) {
            const double exi = epsilon * xi;
            const double u = ipow(exi, 2 * N);
            const double up = 2.0 * N * epsilon * ipow(exi, 2 * N - 1);
            const double upp =
                2.0 * N * (2.0 * N - 1) * epsilon * epsilon * ipow(exi, 2 * N - 2);
            const double d = 1.0 + u;
            return -upp / (d * d) + 2.0 * up * up / (d * d * d);
        };
        p.default_half_domain_ = 6.0 / epsilon;
        return p;
    }

    /// Two identical beams centred at xi = +-xi0, injected parallel to the
    /// zeta axis. Base must be gaussian or algebraic.
    static LaunchProfile two_beam(const LaunchProfile& base, double xi0) {
        if (base.kind_ != Kind::gaussian && base.kind_ != Kind::algebraic)
            throw ConfigError("two_beam base must be gaussian or algebraic");
        if (!(xi0 >= 0.0) || !std::isfinite(xi0))
            throw ConfigError("two_beam offset xi0 must be >= 0");
        LaunchProfile p;
        p.kind_ = Kind::two_beam;
        p.epsilon_ = base.epsilon_;
        p.N_ = base.N_;
        p.xi0_ = xi0;
        p.scale_ = base.scale_;
        auto s = base.shape_;
        auto sdd = base.shape_dd_;
        p.shape_ = [s, xi0](double xi) { return s(xi - xi0) + s(xi + xi0); };
        p.shape_dd_ = [sdd, xi0](double xi) {
            return sdd(xi - xi0) + sdd(xi + xi0);
        };
        p.default_half_domain_ = base.default_half_domain_ + xi0;
        return p;
    }

    /// Tabulated samples, linearly interpolated; normalized to peak 1.
    static LaunchProfile custom_samples(std::vector<double> xi,
                                        std::vector<double> r) {
        if (xi.size() != r.size() || xi.size() < 2)
            throw ConfigError("custom_samples needs >= 2 matching samples");
        double peak = 0.0;
        for (std::size_t i = 0; i < xi.size(); ++i) {
            if (!std::isfinite(xi[i]) || !std::isfinite(r[i]) || r[i] < 0.0)
                throw ConfigError("custom_samples values must be finite and >= 0");
            if (i > 0 && !(xi[i] > xi[i - 1]))
                throw ConfigError("custom_samples xi must be strictly increasing");
            peak = std::max(peak, r[i]);
        }
        if (!(peak > 0.0)) throw ConfigError("custom_samples all-zero amplitude");
        for (double& v : r) v /= peak;
        LaunchProfile p;
        p.kind_ = Kind::custom_samples;
        p.scale_ = peak;
        auto xs = std::make_shared<std::vector<double>>(std::move(xi));
        auto rs = std::make_shared<std::vector<double>>(std::move(r));
        p.shape_ = [xs, rs](double x) {
            const auto& X = *xs;
            const auto& R = *rs;
            if (x <= X.front()) return R.front();
            if (x >= X.back()) return R.back();
            auto it = std::upper_bound(X.begin(), X.end(), x);
            const std::size_t j = static_cast<std::size_t>(it - X.begin());
            const double t = (x - X[j - 1]) / (X[j] - X[j - 1]);
            return R[j - 1] + t * (R[j] - R[j - 1]);
        };
        p.default_half_domain_ =
            std::max(std::abs(xs->front()), std::abs(xs->back()));
        return p;
    }

    Kind kind() const { return kind_; }
    double epsilon() const { return epsilon_; }
    int order_N() const { return N_; }
    double beam_offset() const { return xi0_; }
    double scale() const { return scale_; }

    /// Shape value (peak-normalized) used by the dynamics.
    double shape(double xi) const { return shape_(xi); }

    /// Physical amplitude R = scale * shape.
    double amplitude(double xi) const { return scale_ * shape_(xi); }

    bool has_second_derivative() const { return static_cast<bool>(shape_dd_); }
    double shape_second_derivative(double xi) const {
        if (!shape_dd_)
            throw DomainError("profile has no analytic second derivative");
        return shape_dd_(xi);
    }

    /// Default fan domain: +-3/eps for gaussian, +-6/eps for algebraic
    /// (fatter tails), extended by xi0 for two-beam.
    double default_half_domain() const { return default_half_domain_; }

private:
    static void check_epsilon(double epsilon) {
        if (!(epsilon > 0.0 && epsilon <= 1.0))
            throw ConfigError("epsilon must lie in (0, 1], got " +
                              std::to_string(epsilon));
    }
    static void check_scale(double scale) {
        if (!(scale > 0.0) || !std::isfinite(scale))
            throw ConfigError("amplitude scale must be finite and > 0");
    }
    static double ipow(double base, int n) {
        if (n < 0) return 1.0 / ipow(base, -n);
        double r = 1.0;
        while (n-- > 0) r *= base;
        return r;
    }

    Kind kind_ = Kind::gaussian;
    double epsilon_ = 0.0;
    int N_ = 1;
    double xi0_ = 0.0;
    double scale_ = 1.0;
    std::function<double(double)> shape_;
    std::function<double(double)> shape_dd_;
    double default_half_domain_ = 0.0;
};

inline std::string to_string(LaunchProfile::Kind k) {
    switch (k) {
        case LaunchProfile::Kind::gaussian: return "gaussian";
        case LaunchProfile::Kind::algebraic: return "algebraic";
        case LaunchProfile::Kind::two_beam: return "two_beam";
        case LaunchProfile::Kind::custom_samples: return "custom_samples";
    }
    return "?";
}

/// Launch conditions: all rays start at zeta = 0, tau = 0, rho = (0, 1),
/// equally spaced in launch label, carrying the profile amplitude.
inline WavefrontFan sample_fan(const LaunchProfile& profile, int n_rays,
                               double xi_min, double xi_max) {
    if (n_rays < 5)
        throw ConfigError("fan needs at least 5 rays, got " +
                          std::to_string(n_rays));
    if (!(xi_min < xi_max))
        throw ConfigError("fan domain requires xi_min < xi_max");
    const double floor_abs = amplitude_floor;  // shapes are peak-normalized
    if (profile.shape(xi_min) < floor_abs)
        throw ConfigError("fan edge xi_min = " + std::to_string(xi_min) +
                          " has amplitude below floor");
    if (profile.shape(xi_max) < floor_abs)
        throw ConfigError("fan edge xi_max = " + std::to_string(xi_max) +
                          " has amplitude below floor");

    WavefrontFan fan;
    fan.rays.resize(static_cast<std::size_t>(n_rays));
    const double d = (xi_max - xi_min) / (n_rays - 1);
    for (int i = 0; i < n_rays; ++i) {
        RayState& r = fan.rays[static_cast<std::size_t>(i)];
        const double label = xi_min + i * d;
        r.xi = label;
        r.zeta = 0.0;
        r.rho_x = 0.0;
        r.rho_z = 1.0;
        r.tau = 0.0;
        r.launch_label = label;
        r.amplitude = profile.shape(label);
    }
    fan.validate();
    return fan;
}

}  // namespace wavetrace
