#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "wavetrace/errors.hpp"
#include "wavetrace/geometry.hpp"

namespace wavetrace {

/// n^2 = 1 - V/E and back. Exact algebra; validity of the result (n^2 > 0,
/// V/E < 1) is checked by Medium when sampled, not here.
inline double n_squared_to_potential(double n_squared) { return 1.0 - n_squared; }
inline double potential_to_n_squared(double v_over_E) { return 1.0 - v_over_E; }

using ScalarField = std::function<double(double xi, double zeta)>;
using GradientField = std::function<Vec2(double xi, double zeta)>;

/// The propagation medium in dimensionless form. Internally everything is
/// stored as the potential ratio V/E; the refractive front-end converts
/// through n^2 = 1 - V/E at construction, so an optical and a quantum medium
/// built from equivalent fields sample bit-identically.
class Medium {
public:
    enum class Kind { vacuum, refractive, potential };

    static Medium vacuum() {
        Medium m;
        m.kind_ = Kind::vacuum;
        return m;
    }

    static Medium refractive(ScalarField n_squared,
                             GradientField n_squared_gradient = nullptr) {
        Medium m;
        m.kind_ = Kind::refractive;
        m.field_ = [f = std::move(n_squared)](double xi, double zeta) {
            return n_squared_to_potential(f(xi, zeta));
        };
        if (n_squared_gradient)
            m.gradient_ = [g = std::move(n_squared_gradient)](double xi, double zeta) {
                Vec2 v = g(xi, zeta);
                return Vec2{-v.x, -v.y};  // d(V/E) = -d(n^2)
            };
        return m;
    }

    static Medium potential(ScalarField v_over_E,
                            GradientField v_over_E_gradient = nullptr) {
        Medium m;
        m.kind_ = Kind::potential;
        m.field_ = std::move(v_over_E);
        m.gradient_ = std::move(v_over_E_gradient);
        return m;
    }

    /// Uniform transverse force f: V/2E = -f*xi, so the dimensionless force
    /// is (f, 0) everywhere. Handy for classical-limit checks.
    static Medium uniform_force(double f) {
        return potential([f](double xi, double) { return -2.0 * f * xi; },
                         [f](double, double) { return Vec2{-2.0 * f, 0.0}; });
    }

    Kind kind() const { return kind_; }

    /// V/E at a point, with classically-allowed-region validation.
    double potential_over_E(double xi, double zeta) const {
        if (kind_ == Kind::vacuum) return 0.0;
        const double v = field_(xi, zeta);
        if (!std::isfinite(v))
            throw DomainError("medium field non-finite at sampled point");
        if (v >= 1.0)
            throw DomainError(kind_ == Kind::refractive
                                  ? "n^2 <= 0 at sampled point"
                                  : "V/E >= 1 at sampled point (forbidden region)");
        return v;
    }

    double n_squared(double xi, double zeta) const {
        return potential_to_n_squared(potential_over_E(xi, zeta));
    }

    /// Dimensionless force on a ray: -grad(V/2E). Analytic gradient when
    /// provided, central differences otherwise.
    Vec2 force(double xi, double zeta) const {
        if (kind_ == Kind::vacuum) return {0.0, 0.0};
        Vec2 g;
        if (gradient_) {
            g = gradient_(xi, zeta);
        } else {
            const double h = 1e-5;
            g.x = (field_(xi + h, zeta) - field_(xi - h, zeta)) / (2.0 * h);
            g.y = (field_(xi, zeta + h) - field_(xi, zeta - h)) / (2.0 * h);
        }
        return {-0.5 * g.x, -0.5 * g.y};
    }

    bool is_vacuum() const { return kind_ == Kind::vacuum; }

private:
    Kind kind_ = Kind::vacuum;
    ScalarField field_;
    GradientField gradient_;
};

inline std::string to_string(Medium::Kind k) {
    switch (k) {
        case Medium::Kind::vacuum: return "vacuum";
        case Medium::Kind::refractive: return "refractive";
        case Medium::Kind::potential: return "potential";
    }
    return "?";
}

}  // namespace wavetrace
