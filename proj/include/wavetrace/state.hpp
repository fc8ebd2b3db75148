#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "wavetrace/errors.hpp"
#include "wavetrace/geometry.hpp"

namespace wavetrace {

/// One trajectory's dimensionless state. Positions are in units of lambda0,
/// momenta in units of p0 (or k0 for the optical front-end).
struct RayState {
    double xi = 0.0;      // transverse position x/lambda0
    double zeta = 0.0;    // longitudinal position z/lambda0
    double rho_x = 0.0;
    double rho_z = 1.0;
    double tau = 0.0;
    double amplitude = 0.0;     // carried amplitude R, constant along the ray
    double launch_label = 0.0;  // the ray's xi at zeta = 0, immutable

    Vec2 position() const { return {xi, zeta}; }
    Vec2 momentum() const { return {rho_x, rho_z}; }
};

/// Ordered bundle of rays sharing a common integration time. The wave
/// potential G and its gradient are evaluated on this object.
struct WavefrontFan {
    std::vector<RayState> rays;
    int step_index = 0;
    double common_tau = 0.0;
    std::vector<double> g_values;    // filled by the wave_potential pass
    std::vector<Vec2> g_gradient;

    std::size_t size() const { return rays.size(); }

    void validate() const {
        if (rays.size() < 5)
            throw ConfigError("fan needs at least 5 rays, got " +
                              std::to_string(rays.size()));
        for (std::size_t i = 0; i < rays.size(); ++i) {
            if (rays[i].tau != common_tau)
                throw DomainError("fan ray " + std::to_string(i) +
                                  " not at common tau");
            if (i > 0 && !(rays[i].launch_label > rays[i - 1].launch_label))
                throw DomainError("fan launch labels not strictly increasing at " +
                                  std::to_string(i));
        }
    }
};

/// Per-step snapshot of the whole fan.
struct StepRecord {
    int step = 0;
    double tau = 0.0;
    std::vector<double> xi, zeta, rho_x, rho_z, g;
};

struct Diagnostics {
    double max_rho_drift = 0.0;          // max | |rho|-1 | before any enforcement
    std::vector<double> step_rho_drift;  // one entry per recorded step
    bool caustic_encountered = false;
    double first_crossing_zeta = std::numeric_limits<double>::quiet_NaN();
    int sort_events = 0;
    std::vector<std::uint8_t> edge_low_confidence;  // per-ray flag
    double wall_seconds = 0.0;
};

enum class RunStatus { ok, caustic_halt, blowup };

/// Full simulation output: per-ray time series plus run diagnostics.
struct TrajectoryBundle {
    std::vector<double> launch_label;
    std::vector<double> launch_amplitude;  // shape values (peak-normalized)
    double amplitude_scale = 1.0;          // user prefactor, display only
    std::vector<StepRecord> records;
    Diagnostics diag;
    RunStatus status = RunStatus::ok;

    std::size_t ray_count() const { return launch_label.size(); }

    void validate() const {
        for (const auto& r : records)
            if (r.xi.size() != ray_count())
                throw DomainError("record ray count mismatch");
    }

    double final_zeta_min() const {
        if (records.empty()) return 0.0;
        const auto& z = records.back().zeta;
        double m = z.front();
        for (double v : z) m = std::min(m, v);
        return m;
    }
};

}  // namespace wavetrace
