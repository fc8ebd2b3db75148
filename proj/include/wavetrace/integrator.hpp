#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "wavetrace/errors.hpp"
#include "wavetrace/geometry.hpp"
#include "wavetrace/launch.hpp"
#include "wavetrace/medium.hpp"
#include "wavetrace/state.hpp"
#include "wavetrace/wave_potential.hpp"

namespace wavetrace {

enum class Scheme { explicit_rk4, symplectic_leapfrog };
enum class CausticPolicy { halt, sort_and_continue };
enum class GFreshness { frozen, extrapolated };

struct IntegratorConfig {
    double d_tau = 0.1;
    int n_steps = 1;
    Scheme scheme = Scheme::explicit_rk4;
    bool go_limit_mode = false;           // drop the wave-potential term
    bool enforce_constraint = false;      // rho_z = sqrt(1 - rho_x^2), vacuum only
    CausticPolicy caustic_policy = CausticPolicy::halt;
    double g_scale = 1.0;                 // multiplies the 1/(8 pi^2) coupling
    // Per-ray G held over the step (frozen) or linearly extrapolated from the
    // previous step to the step midpoint (second order in d_tau).
    GFreshness g_freshness = GFreshness::extrapolated;
    // The transported-amplitude G dynamics amplifies short-wavelength
    // perturbations (growth ~ sqrt(|R'/R| k^3), so refinement accelerates the
    // blowup). Three fixed-physical-scale regularizations keep runs smooth:
    // the G field used for forces is mollified over g_smoothing wavelengths,
    // and the momentum direction diffuses with base_viscosity everywhere plus
    // tail_viscosity where the relative amplitude falls below a few percent.
    double g_smoothing = 0.7;
    double base_viscosity = 0.035;
    double tail_viscosity = 0.15;
    int record_every = 1;

    void validate(const Medium& medium) const {
        if (!(d_tau > 0.0)) throw ConfigError("integrator.d_tau must be > 0");
        if (n_steps < 1) throw ConfigError("integrator.n_steps must be >= 1");
        if (record_every < 1) throw ConfigError("integrator.record_every must be >= 1");
        if (!(g_scale >= 0.0)) throw ConfigError("integrator.g_scale must be >= 0");
        if (!(tail_viscosity >= 0.0))
            throw ConfigError("integrator.tail_viscosity must be >= 0");
        if (!(base_viscosity >= 0.0))
            throw ConfigError("integrator.base_viscosity must be >= 0");
        if (!(g_smoothing >= 0.0))
            throw ConfigError("integrator.g_smoothing must be >= 0");
        if (enforce_constraint && !medium.is_vacuum())
            throw ConfigError(
                "integrator.enforce_constraint requires a vacuum medium");
    }
};

/// Replaces rho_z by sqrt(1 - rho_x^2), the vacuum momentum-modulus
/// constraint for forward propagation.
inline void enforce_momentum_constraint(WavefrontFan& fan) {
    for (std::size_t i = 0; i < fan.size(); ++i) {
        RayState& r = fan.rays[i];
        if (std::abs(r.rho_x) >= 1.0) throw TurnedRayError(static_cast<int>(i));
        r.rho_z = std::sqrt(1.0 - r.rho_x * r.rho_x);
    }
}

namespace detail {

/// Force on one ray: medium force at the (stage) position plus the
/// wave-potential pull, whose magnitude is frozen over the step but whose
/// direction follows the stage momentum, keeping it exactly transverse.
inline Vec2 ray_force(const Medium& medium, const IntegratorConfig& cfg,
                      double g_pull, const Vec2& pos, const Vec2& rho) {
    Vec2 f = medium.force(pos.x, pos.y);
    if (!cfg.go_limit_mode && g_pull != 0.0)
        f += (cfg.g_scale * wave_coupling * g_pull) * transverse_unit(rho);
    return f;
}

inline void rk4_advance(RayState& r, const Medium& medium,
                        const IntegratorConfig& cfg, double g_pull) {
    const double h = cfg.d_tau;
    const Vec2 x0 = r.position(), p0 = r.momentum();

    const Vec2 k1x = p0;
    const Vec2 k1p = ray_force(medium, cfg, g_pull, x0, p0);
    const Vec2 k2x = p0 + 0.5 * h * k1p;
    const Vec2 k2p = ray_force(medium, cfg, g_pull, x0 + 0.5 * h * k1x, k2x);
    const Vec2 k3x = p0 + 0.5 * h * k2p;
    const Vec2 k3p = ray_force(medium, cfg, g_pull, x0 + 0.5 * h * k2x, k3x);
    const Vec2 k4x = p0 + h * k3p;
    const Vec2 k4p = ray_force(medium, cfg, g_pull, x0 + h * k3x, k4x);

    const Vec2 x1 = x0 + (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    const Vec2 p1 = p0 + (h / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    r.xi = x1.x; r.zeta = x1.y;
    r.rho_x = p1.x; r.rho_z = p1.y;
}

inline void leapfrog_advance(RayState& r, const Medium& medium,
                             const IntegratorConfig& cfg, double g_pull) {
    const double h = cfg.d_tau;
    Vec2 x = r.position(), p = r.momentum();
    p += (0.5 * h) * ray_force(medium, cfg, g_pull, x, p);
    x += h * p;
    p += (0.5 * h) * ray_force(medium, cfg, g_pull, x, p);
    r.xi = x.x; r.zeta = x.y;
    r.rho_x = p.x; r.rho_z = p.y;
}

/// One Crank-Nicolson diffusion substep of length dt on the momentum angle,
/// weighted by an amplitude gate: full strength below 1% relative amplitude,
/// zero above 5%, smoothstep between. |rho| per ray is preserved exactly;
/// rays with zero weight are left bit-identical. In the gated region the
/// smooth solution has a momentum profile linear in arc length, so the term
/// vanishes on it and only damps the spurious short-wavelength growth. The
/// caller applies dt/2 before and after the force step (Strang splitting);
/// with the trapezoidal substep the overall error stays second order in
/// d_tau.
inline void tail_momentum_diffusion(WavefrontFan& fan,
                                    const IntegratorConfig& cfg, double dt) {
    const std::size_t n = fan.size();
    if (n < 3) return;
    double peak = 0.0;
    for (const auto& r : fan.rays) peak = std::max(peak, r.amplitude);
    if (!(peak > 0.0)) return;

    std::vector<double> nu(n, 0.0);
    bool any = false;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double rel = fan.rays[i].amplitude / peak;
        double w = 0.0;
        if (rel <= 0.01) w = 1.0;
        else if (rel < 0.05) {
            const double t = (0.05 - rel) / 0.04;
            w = t * t * (3.0 - 2.0 * t);
        }
        nu[i] = cfg.base_viscosity + cfg.tail_viscosity * w;
        any = any || nu[i] > 0.0;
    }
    if (!any) return;

    std::vector<double> s(n), theta(n), mag(n);
    s[0] = 0.0;
    for (std::size_t i = 1; i < n; ++i)
        s[i] = s[i - 1] +
               norm(fan.rays[i].position() - fan.rays[i - 1].position());
    for (std::size_t i = 0; i < n; ++i) {
        theta[i] = std::atan2(fan.rays[i].rho_x, fan.rays[i].rho_z);
        mag[i] = norm(fan.rays[i].momentum());
    }

    // tridiagonal (I - dt/2 nu D2) theta' = (I + dt/2 nu D2) theta; rows with
    // nu = 0 stay identity and pass theta through unchanged
    std::vector<double> lo(n, 0.0), di(n, 1.0), up(n, 0.0), rhs = theta;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (nu[i] <= 0.0) continue;
        const double a = s[i] - s[i - 1], b = s[i + 1] - s[i];
        if (!(a > 0.0) || !(b > 0.0)) continue;
        const double e = 0.5 * dt * nu[i];
        const double cm = 2.0 / (a * (a + b));
        const double cp = 2.0 / (b * (a + b));
        lo[i] = -e * cm;
        di[i] = 1.0 + e * (cm + cp);
        up[i] = -e * cp;
        rhs[i] = theta[i] + e * (cm * theta[i - 1] -
                                 (cm + cp) * theta[i] + cp * theta[i + 1]);
    }
    for (std::size_t i = 1; i < n; ++i) {
        const double m = lo[i] / di[i - 1];
        di[i] -= m * up[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    std::vector<double> out(n);
    out[n - 1] = rhs[n - 1] / di[n - 1];
    for (std::size_t i = n - 1; i-- > 0;)
        out[i] = (rhs[i] - up[i] * out[i + 1]) / di[i];

    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (nu[i] <= 0.0) continue;
        fan.rays[i].rho_x = mag[i] * std::sin(out[i]);
        fan.rays[i].rho_z = mag[i] * std::cos(out[i]);
    }
}

inline void record_step(TrajectoryBundle& bundle, const WavefrontFan& fan,
                        const std::vector<double>& g) {
    StepRecord rec;
    rec.step = fan.step_index;
    rec.tau = fan.common_tau;
    const std::size_t n = fan.size();
    rec.xi.reserve(n); rec.zeta.reserve(n);
    rec.rho_x.reserve(n); rec.rho_z.reserve(n);
    for (const auto& r : fan.rays) {
        rec.xi.push_back(r.xi);
        rec.zeta.push_back(r.zeta);
        rec.rho_x.push_back(r.rho_x);
        rec.rho_z.push_back(r.rho_z);
    }
    rec.g = g.empty() ? std::vector<double>(n, 0.0) : g;
    bundle.records.push_back(std::move(rec));
}

}  // namespace detail

/// Advances the fan by one step. G magnitudes in `g_pull` are per-ray dG/ds
/// values already chosen for this step (frozen or extrapolated); pass an
/// empty vector in GO-limit mode.
inline void step(WavefrontFan& fan, const Medium& medium,
                 const IntegratorConfig& cfg, const std::vector<double>& g_pull) {
    for (std::size_t i = 0; i < fan.size(); ++i) {
        RayState& r = fan.rays[i];
        const double pull = g_pull.empty() ? 0.0 : g_pull[i];
        if (cfg.scheme == Scheme::explicit_rk4)
            detail::rk4_advance(r, medium, cfg, pull);
        else
            detail::leapfrog_advance(r, medium, cfg, pull);
        r.tau += cfg.d_tau;
        if (!std::isfinite(r.xi) || !std::isfinite(r.zeta) ||
            !std::isfinite(r.rho_x) || !std::isfinite(r.rho_z))
            throw NumericalBlowupError(fan.step_index + 1, static_cast<int>(i));
    }
    fan.common_tau += cfg.d_tau;
    fan.step_index += 1;
}

/// Full simulation loop: compute G on the fan, advance, optionally enforce
/// the vacuum momentum constraint, record. Deterministic for a fixed config.
inline TrajectoryBundle run(const LaunchProfile& profile, const Medium& medium,
                            const IntegratorConfig& cfg, int n_rays,
                            double xi_min, double xi_max) {
    cfg.validate(medium);
    const auto t_start = std::chrono::steady_clock::now();

    WavefrontFan fan = sample_fan(profile, n_rays, xi_min, xi_max);
    auto bundle = std::make_shared<TrajectoryBundle>();
    bundle->amplitude_scale = profile.scale();
    bundle->launch_label.reserve(fan.size());
    bundle->launch_amplitude.reserve(fan.size());
    for (const auto& r : fan.rays) {
        bundle->launch_label.push_back(r.launch_label);
        bundle->launch_amplitude.push_back(r.amplitude);
    }
    bundle->diag.edge_low_confidence.assign(fan.size(), 0);
    for (std::size_t i = 0; i < fan.size(); ++i)
        if (i < 2 || i + 2 >= fan.size())
            bundle->diag.edge_low_confidence[i] = 1;

    auto finish = [&](RunStatus status) {
        bundle->status = status;
        bundle->diag.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          t_start)
                .count();
        return *bundle;
    };

    std::vector<double> dg_prev;  // per-ray dG/ds of the previous step
    std::vector<double> g_record;

    try {
        for (int k = 0; k < cfg.n_steps; ++k) {
            std::vector<double> dg;
            if (!cfg.go_limit_mode) {
                WavefrontParametrization param;
                try {
                    param = parametrize(fan);
                } catch (const CausticError& e) {
                    bundle->diag.caustic_encountered = true;
                    if (std::isnan(bundle->diag.first_crossing_zeta))
                        bundle->diag.first_crossing_zeta =
                            0.5 * (fan.rays[static_cast<std::size_t>(e.ray_lo)].zeta +
                                   fan.rays[static_cast<std::size_t>(e.ray_hi)].zeta);
                    if (cfg.caustic_policy == CausticPolicy::halt) throw;
                    std::sort(fan.rays.begin(), fan.rays.end(),
                              [](const RayState& a, const RayState& b) {
                                  return a.xi < b.xi;
                              });
                    bundle->diag.sort_events += 1;
                    dg_prev.clear();  // ray order changed; restart extrapolation
                    param = parametrize(fan);
                }
                fan.g_values = second_derivative_on_fan(fan, param);
                g_record = fan.g_values;
                const std::vector<double> g_eff = mollify_along(
                    param.arc_coordinate, fan.g_values, cfg.g_smoothing);
                fan.g_gradient = wave_potential_gradient(param, g_eff);
                dg = tangential_g_derivative(param, g_eff);
            }
            if (k == 0) detail::record_step(*bundle, fan, g_record);

            std::vector<double> dg_eff = dg;
            if (cfg.g_freshness == GFreshness::extrapolated &&
                dg_prev.size() == dg.size())
                for (std::size_t i = 0; i < dg.size(); ++i)
                    dg_eff[i] = 1.5 * dg[i] - 0.5 * dg_prev[i];
            dg_prev = dg;

            const bool diffuse = !cfg.go_limit_mode && cfg.g_scale > 0.0 &&
                                 (cfg.tail_viscosity > 0.0 ||
                                  cfg.base_viscosity > 0.0);
            if (diffuse)
                detail::tail_momentum_diffusion(fan, cfg, 0.5 * cfg.d_tau);
            step(fan, medium, cfg, dg_eff);
            if (diffuse)
                detail::tail_momentum_diffusion(fan, cfg, 0.5 * cfg.d_tau);

            double drift = 0.0;
            for (const auto& r : fan.rays)
                drift = std::max(drift, std::abs(norm(r.momentum()) - 1.0));
            bundle->diag.max_rho_drift = std::max(bundle->diag.max_rho_drift, drift);

            if (cfg.enforce_constraint) enforce_momentum_constraint(fan);

            if ((k + 1) % cfg.record_every == 0 || k + 1 == cfg.n_steps) {
                detail::record_step(*bundle, fan, g_record);
                bundle->diag.step_rho_drift.push_back(drift);
            }
        }
    } catch (CausticError e) {
        finish(RunStatus::caustic_halt);
        e.partial = bundle;
        throw e;
    } catch (NumericalBlowupError e) {
        finish(RunStatus::blowup);
        e.partial = bundle;
        throw e;
    }
    return finish(RunStatus::ok);
}

}  // namespace wavetrace
