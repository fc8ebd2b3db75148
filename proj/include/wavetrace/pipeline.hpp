#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wavetrace/config.hpp"
#include "wavetrace/fringes.hpp"
#include "wavetrace/integrator.hpp"
#include "wavetrace/io.hpp"
#include "wavetrace/oracles.hpp"
#include "wavetrace/paraxial.hpp"

namespace wavetrace {

/// Comparison thresholds shared by `oracle-compare` and the acceptance suite.
namespace thresholds {
inline constexpr double envelope_rel_error = 0.02;       // trajectory vs analytic
inline constexpr double oracle_self_rel_error = 0.01;    // grid vs analytic
inline constexpr double fringe_delta_bins = 1.0;         // peak position match
inline constexpr double flux_rel_error = 0.10;           // core-bin flux match
inline constexpr double flux_core_fraction = 0.25;       // "core" = I >= 25% max
}  // namespace thresholds

struct RunOutput {
    RunConfig resolved;
    TrajectoryBundle bundle;
    std::optional<FringeReport> fringe;
};

inline TrajectoryBundle simulate(const RunConfig& resolved) {
    const LaunchProfile profile = build_profile(resolved);
    const Medium medium = build_medium(resolved);
    const IntegratorConfig ic = build_integrator(resolved, medium);
    return run(profile, medium, ic, resolved.fan_n_rays, resolved.fan_xi_min,
               resolved.fan_xi_max);
}

inline RunOutput execute(const RunConfig& raw) {
    RunOutput out;
    out.resolved = resolve(raw);
    out.bundle = simulate(out.resolved);
    if (out.bundle.final_zeta_min() >= out.resolved.detector_zeta)
        out.fringe = detect_fringes(out.bundle, out.resolved.detector_zeta,
                                    out.resolved.histogram_bin_width);
    return out;
}

inline nlohmann::json fringe_to_json(const FringeReport& f) {
    return nlohmann::json{
        {"detector_zeta", f.detector_zeta},
        {"is_fringed", f.is_fringed},
        {"peak_positions", f.peak_positions},
        {"histogram",
         {{"bin_width", f.ray_density_histogram.width},
          {"first_bin", f.ray_density_histogram.first_bin},
          {"values", f.ray_density_histogram.value}}},
    };
}

inline nlohmann::json summary_json(const RunConfig& resolved,
                                   const TrajectoryBundle& bundle,
                                   const std::optional<FringeReport>& fringe,
                                   const std::string& error = {}) {
    nlohmann::json j;
    j["schema"] = "wavetrace-summary-v1";
    j["config"] = config_to_json(resolved);
    j["status"] = bundle.status == RunStatus::ok          ? "ok"
                  : bundle.status == RunStatus::caustic_halt ? "caustic_halt"
                                                            : "blowup";
    j["diagnostics"] = {
        {"max_rho_drift", bundle.diag.max_rho_drift},
        {"caustic_encountered", bundle.diag.caustic_encountered},
        {"first_crossing_zeta",
         std::isnan(bundle.diag.first_crossing_zeta)
             ? nlohmann::json(nullptr)
             : nlohmann::json(bundle.diag.first_crossing_zeta)},
        {"sort_events", bundle.diag.sort_events},
        {"wall_seconds", bundle.diag.wall_seconds},
        {"n_rays", bundle.ray_count()},
        {"n_recorded_steps", bundle.records.size()},
    };
    j["fringe_report"] = fringe ? fringe_to_json(*fringe) : nlohmann::json(nullptr);
    if (!error.empty()) j["error"] = error;
    return j;
}

inline void write_run_artifacts(const RunConfig& resolved,
                                const TrajectoryBundle& bundle,
                                const std::optional<FringeReport>& fringe,
                                const std::string& error = {}) {
    namespace fs = std::filesystem;
    const fs::path dir = resolved.outputs_dir;
    atomic_write(dir / "trajectories.csv", trajectories_csv(bundle));
    atomic_write(dir / "summary.json",
                 summary_json(resolved, bundle, fringe, error).dump(2) + "\n");
    atomic_write(dir / "pattern.svg",
                 pattern_svg(bundle, resolved.profile_kind + " trajectory pattern"));
}

struct OracleComparison {
    double envelope_max_rel_error = 0.0;       // gaussian only, trajectory vs analytic
    double oracle_self_max_rel_error = 0.0;    // gaussian only, grid vs analytic
    std::vector<double> trajectory_peaks;
    std::vector<double> oracle_peaks;
    std::vector<double> peak_delta_bins;       // per trajectory peak
    double flux_max_rel_error = 0.0;           // core bins
    int flux_core_bins = 0;
    bool envelope_ok = true;
    bool peaks_ok = true;
    bool flux_ok = true;

    bool all_ok() const { return envelope_ok && peaks_ok && flux_ok; }
};

namespace detail {

/// Grid-oracle second-moment half width at a recorded plane.
inline double intensity_half_width(const std::vector<double>& xi,
                                   const std::vector<double>& row) {
    double m0 = 0.0, m2 = 0.0;
    for (std::size_t j = 0; j < xi.size(); ++j) {
        m0 += row[j];
        m2 += row[j] * xi[j] * xi[j];
    }
    return 2.0 * std::sqrt(m2 / m0);
}

}  // namespace detail

/// Runs the simulator and the paraxial grid oracle on the same profile and
/// compares envelope, fringe peak positions, and per-bin flux.
inline OracleComparison oracle_compare(const RunConfig& raw) {
    const RunConfig cfg = resolve(raw);
    if (cfg.medium_kind != "vacuum")
        throw OracleResolutionError("oracle comparison requires a vacuum medium");
    const LaunchProfile profile = build_profile(cfg);
    const double eps = profile.epsilon();

    OracleComparison cmp;
    const TrajectoryBundle bundle = simulate(cfg);
    const FringeReport ray_rep =
        detect_fringes(bundle, cfg.detector_zeta, cfg.histogram_bin_width);

    ParaxialGridSpec grid = default_grid(
        profile, std::max(std::abs(cfg.fan_xi_min), std::abs(cfg.fan_xi_max)));
    grid.record_every = 10;
    const ParaxialResult wave =
        paraxial_grid_propagate(profile, cfg.detector_zeta + 1.0, grid);
    const std::size_t plane = wave.plane_index(cfg.detector_zeta);
    const FringeReport wave_rep = detect_intensity_fringes(
        wave.xi, wave.intensity[plane], cfg.detector_zeta, cfg.histogram_bin_width);

    // Gaussian-only envelope checks.
    if (cfg.profile_kind == "gaussian") {
        for (std::size_t k = 0; k < wave.zeta.size(); ++k) {
            const double w = detail::intensity_half_width(wave.xi, wave.intensity[k]);
            const double ref = gaussian_envelope(eps, wave.zeta[k]);
            cmp.oracle_self_max_rel_error = std::max(
                cmp.oracle_self_max_rel_error, std::abs(w - ref) / ref);
        }
        // trajectory launched closest to xi = 1/eps
        std::size_t idx = 0;
        for (std::size_t i = 0; i < bundle.ray_count(); ++i)
            if (std::abs(bundle.launch_label[i] - 1.0 / eps) <
                std::abs(bundle.launch_label[idx] - 1.0 / eps))
                idx = i;
        const double x0 = bundle.launch_label[idx];
        for (const StepRecord& rec : bundle.records) {
            if (rec.zeta[idx] > cfg.detector_zeta) break;
            const double ref = x0 * eps * gaussian_envelope(eps, rec.zeta[idx]);
            cmp.envelope_max_rel_error =
                std::max(cmp.envelope_max_rel_error,
                         std::abs(rec.xi[idx] - ref) / std::abs(ref));
        }
        cmp.envelope_ok =
            cmp.envelope_max_rel_error <= thresholds::envelope_rel_error &&
            cmp.oracle_self_max_rel_error <= thresholds::oracle_self_rel_error;
    }

    // Fringe peak positions: every trajectory peak must sit within one bin of
    // an oracle intensity peak.
    cmp.trajectory_peaks = ray_rep.peak_positions;
    cmp.oracle_peaks = wave_rep.peak_positions;
    for (double p : cmp.trajectory_peaks) {
        double best = 1e300;
        for (double q : cmp.oracle_peaks) best = std::min(best, std::abs(p - q));
        cmp.peak_delta_bins.push_back(best / cfg.histogram_bin_width);
        if (best / cfg.histogram_bin_width > thresholds::fringe_delta_bins)
            cmp.peaks_ok = false;
    }
    if (ray_rep.is_fringed != wave_rep.is_fringed) cmp.peaks_ok = false;

    // Flux correspondence over the shared bin grid.
    {
        const FringeHistogram& a = ray_rep.ray_density_histogram;
        const FringeHistogram& b = wave_rep.ray_density_histogram;
        const int lo = std::max(a.first_bin, b.first_bin);
        const int hi = std::min(a.first_bin + static_cast<int>(a.size()),
                                b.first_bin + static_cast<int>(b.size()));
        double sa = 0.0, sb = 0.0, bmax = 0.0;
        for (int m = lo; m < hi; ++m) {
            sa += a.value[static_cast<std::size_t>(m - a.first_bin)];
            const double bv = b.value[static_cast<std::size_t>(m - b.first_bin)];
            sb += bv;
            bmax = std::max(bmax, bv);
        }
        for (int m = lo; m < hi; ++m) {
            const double av =
                a.value[static_cast<std::size_t>(m - a.first_bin)] / sa;
            const double bv =
                b.value[static_cast<std::size_t>(m - b.first_bin)] / sb;
            if (b.value[static_cast<std::size_t>(m - b.first_bin)] >=
                thresholds::flux_core_fraction * bmax) {
                ++cmp.flux_core_bins;
                cmp.flux_max_rel_error =
                    std::max(cmp.flux_max_rel_error, std::abs(av - bv) / bv);
            }
        }
        cmp.flux_ok = cmp.flux_max_rel_error <= thresholds::flux_rel_error;
    }
    return cmp;
}

inline nlohmann::json oracle_comparison_json(const OracleComparison& c) {
    return nlohmann::json{
        {"envelope_max_rel_error", c.envelope_max_rel_error},
        {"oracle_self_max_rel_error", c.oracle_self_max_rel_error},
        {"trajectory_peaks", c.trajectory_peaks},
        {"oracle_peaks", c.oracle_peaks},
        {"peak_delta_bins", c.peak_delta_bins},
        {"flux_max_rel_error", c.flux_max_rel_error},
        {"flux_core_bins", c.flux_core_bins},
        {"envelope_ok", c.envelope_ok},
        {"peaks_ok", c.peaks_ok},
        {"flux_ok", c.flux_ok},
        {"all_ok", c.all_ok()},
        {"thresholds",
         {{"envelope_rel_error", thresholds::envelope_rel_error},
          {"oracle_self_rel_error", thresholds::oracle_self_rel_error},
          {"fringe_delta_bins", thresholds::fringe_delta_bins},
          {"flux_rel_error", thresholds::flux_rel_error}}},
    };
}

/// One sweep point: the varied value, its run outcome, and headline numbers.
struct SweepPoint {
    double value = 0.0;
    std::string error;
    double first_gathering_zeta = std::numeric_limits<double>::quiet_NaN();
    bool is_fringed = false;
    std::vector<double> detector_xi;
};

inline RunConfig apply_sweep_value(RunConfig cfg, const std::string& parameter,
                                   double value) {
    if (parameter == "epsilon") cfg.profile_epsilon = value;
    else if (parameter == "N") cfg.profile_N = static_cast<int>(value);
    else if (parameter == "xi0") cfg.profile_xi0 = value;
    else if (parameter == "d_tau") cfg.integrator_d_tau = value;
    else if (parameter == "n_rays") cfg.fan_n_rays = static_cast<int>(value);
    else throw ConfigError("sweep parameter must be one of epsilon|N|xi0|d_tau|n_rays");
    return cfg;
}

inline std::vector<SweepPoint> sweep(const RunConfig& base,
                                     const std::string& parameter,
                                     const std::vector<double>& values) {
    std::vector<SweepPoint> points;
    for (double v : values) {
        SweepPoint pt;
        pt.value = v;
        try {
            const RunConfig cfg = resolve(apply_sweep_value(base, parameter, v));
            const TrajectoryBundle bundle = simulate(cfg);
            pt.first_gathering_zeta = first_gathering_zeta(bundle);
            if (bundle.final_zeta_min() >= cfg.detector_zeta) {
                pt.detector_xi = detector_crossings(bundle, cfg.detector_zeta);
                pt.is_fringed = detect_fringes(bundle, cfg.detector_zeta,
                                               cfg.histogram_bin_width)
                                    .is_fringed;
            }
        } catch (const std::exception& e) {
            pt.error = e.what();  // per-run errors recorded, sweep continues
        }
        points.push_back(std::move(pt));
    }
    return points;
}

inline nlohmann::json sweep_json(const std::string& parameter,
                                 const std::vector<SweepPoint>& points) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& p : points)
        arr.push_back({
            {"value", p.value},
            {"error", p.error},
            {"first_gathering_zeta", std::isnan(p.first_gathering_zeta)
                                         ? nlohmann::json(nullptr)
                                         : nlohmann::json(p.first_gathering_zeta)},
            {"is_fringed", p.is_fringed},
        });
    return nlohmann::json{{"parameter", parameter}, {"points", arr}};
}

}  // namespace wavetrace
