#pragma once

#include <cmath>
#include <string>

#include "wavetrace/errors.hpp"
#include "wavetrace/geometry.hpp"
#include "wavetrace/state.hpp"

namespace wavetrace {

enum class FrontEnd { optical, quantum };

inline std::string to_string(FrontEnd fe) {
    return fe == FrontEnd::optical ? "optical" : "quantum";
}

/// Physical reference scales tying a concrete beam (optical or quantum) to
/// the dimensionless system. All dynamics code downstream works purely in
/// dimensionless variables; this type only lives at the front-end boundary.
struct PhysicalScales {
    double wavelength_lambda0 = 0.0;
    double wavenumber_k0 = 0.0;
    double angular_frequency_omega = 0.0;
    double light_speed_c = 0.0;
    double particle_mass_m = 0.0;
    double total_energy_E = 0.0;
    double reference_momentum_p0 = 0.0;
    double action_hbar = 0.0;
    double beam_half_width_w0 = 0.0;
    double epsilon = 0.0;  // lambda0 / w0

    void validate() const {
        auto positive = [](double v, const char* name) {
            if (!(v > 0.0) || !std::isfinite(v))
                throw DomainError(std::string("PhysicalScales: ") + name +
                                  " must be finite and positive");
        };
        positive(wavelength_lambda0, "wavelength_lambda0");
        positive(wavenumber_k0, "wavenumber_k0");
        positive(angular_frequency_omega, "angular_frequency_omega");
        positive(light_speed_c, "light_speed_c");
        positive(particle_mass_m, "particle_mass_m");
        positive(total_energy_E, "total_energy_E");
        positive(reference_momentum_p0, "reference_momentum_p0");
        positive(action_hbar, "action_hbar");
        positive(beam_half_width_w0, "beam_half_width_w0");
        if (!(epsilon > 0.0 && epsilon <= 1.0))
            throw DomainError("PhysicalScales: epsilon must lie in (0, 1]");
    }

    /// Phase velocity c/n at a point with refractive index n.
    double phase_velocity(double n) const { return light_speed_c / n; }

    /// Ray velocity magnitude c*k/k0 for a wavevector of magnitude k.
    double ray_velocity(double k) const {
        return light_speed_c * k / wavenumber_k0;
    }
};

/// Optical front-end: a monochromatic beam of vacuum wavelength lambda0 in a
/// medium of light speed c, with transverse half width w0. The particle-side
/// fields are filled consistently via k0 = p0/hbar with hbar = 1 and m = 1,
/// so that one PhysicalScales serves both mappings.
inline PhysicalScales optical_scales(double lambda0, double c, double w0) {
    PhysicalScales s;
    s.wavelength_lambda0 = lambda0;
    s.light_speed_c = c;
    s.beam_half_width_w0 = w0;
    s.wavenumber_k0 = 2.0 * pi / lambda0;
    s.angular_frequency_omega = s.wavenumber_k0 * c;
    s.action_hbar = 1.0;
    s.reference_momentum_p0 = s.action_hbar * s.wavenumber_k0;
    s.particle_mass_m = 1.0;
    s.total_energy_E = s.reference_momentum_p0 * s.reference_momentum_p0 /
                       (2.0 * s.particle_mass_m);
    s.epsilon = lambda0 / w0;
    s.validate();
    return s;
}

/// Quantum front-end: a mono-energetic particle beam of mass m and total
/// energy E, with de Broglie wavelength lambda0 = 2*pi*hbar/p0, p0 = sqrt(2mE).
inline PhysicalScales quantum_scales(double m, double E, double hbar, double w0) {
    PhysicalScales s;
    s.particle_mass_m = m;
    s.total_energy_E = E;
    s.action_hbar = hbar;
    s.beam_half_width_w0 = w0;
    s.reference_momentum_p0 = std::sqrt(2.0 * m * E);
    s.wavenumber_k0 = s.reference_momentum_p0 / hbar;
    s.wavelength_lambda0 = 2.0 * pi / s.wavenumber_k0;
    s.angular_frequency_omega = E / hbar;
    s.light_speed_c = s.angular_frequency_omega / s.wavenumber_k0;
    s.epsilon = s.wavelength_lambda0 / w0;
    s.validate();
    return s;
}

/// Map a physical (position, momentum, time) triple into the dimensionless
/// system. Momentum means (p_x, p_z) for the quantum front-end and the
/// wavevector (k_x, k_z) for the optical one; both divide by the same
/// reference since p0 = hbar*k0.
inline RayState to_dimensionless(const PhysicalScales& s, FrontEnd fe,
                                 Vec2 position, Vec2 momentum, double time) {
    s.validate();
    if (!std::isfinite(position.x) || !std::isfinite(position.y) ||
        !std::isfinite(momentum.x) || !std::isfinite(momentum.y) ||
        !std::isfinite(time))
        throw DomainError("to_dimensionless: non-finite input");
    const double ref =
        fe == FrontEnd::quantum ? s.reference_momentum_p0 : s.wavenumber_k0;
    RayState r;
    r.xi = position.x / s.wavelength_lambda0;
    r.zeta = position.y / s.wavelength_lambda0;
    r.rho_x = momentum.x / ref;
    r.rho_z = momentum.y / ref;
    r.tau = fe == FrontEnd::quantum
                ? time * (s.reference_momentum_p0 / s.particle_mass_m) /
                      s.wavelength_lambda0
                : s.light_speed_c * time / s.wavelength_lambda0;
    return r;
}

struct PhysicalState {
    Vec2 position;
    Vec2 momentum;
    double time = 0.0;
};

inline PhysicalState from_dimensionless(const PhysicalScales& s, FrontEnd fe,
                                        const RayState& r) {
    s.validate();
    const double ref =
        fe == FrontEnd::quantum ? s.reference_momentum_p0 : s.wavenumber_k0;
    PhysicalState p;
    p.position = {r.xi * s.wavelength_lambda0, r.zeta * s.wavelength_lambda0};
    p.momentum = {r.rho_x * ref, r.rho_z * ref};
    p.time = fe == FrontEnd::quantum
                 ? r.tau * s.wavelength_lambda0 /
                       (s.reference_momentum_p0 / s.particle_mass_m)
                 : r.tau * s.wavelength_lambda0 / s.light_speed_c;
    return p;
}

}  // namespace wavetrace
