#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "wavetrace/errors.hpp"
#include "wavetrace/state.hpp"

namespace wavetrace {

/// Fringe prominence threshold: a local maximum counts as a fringe only when
/// it reaches this fraction of the global histogram maximum. Applied
/// identically to trajectory histograms and oracle intensity.
inline constexpr double fringe_prominence = 0.2;

/// Fixed-width histogram with bins centred on integer multiples of `width`
/// (one bin is always centred at xi = 0, so two histograms with the same
/// width share their grid).
struct FringeHistogram {
    double width = 0.0;
    int first_bin = 0;  // bin m covers [ (m-0.5) w, (m+0.5) w )
    std::vector<double> value;

    double center(std::size_t i) const {
        return (first_bin + static_cast<int>(i)) * width;
    }
    std::size_t size() const { return value.size(); }
};

struct FringeReport {
    double detector_zeta = 0.0;
    FringeHistogram ray_density_histogram;
    std::vector<double> peak_positions;  // sorted by |xi|
    bool is_fringed = false;
};

/// Interpolated xi of every trajectory at the plane zeta = detector_zeta.
inline std::vector<double> detector_crossings(const TrajectoryBundle& bundle,
                                              double detector_zeta) {
    const std::size_t n = bundle.ray_count();
    if (bundle.records.size() < 2)
        throw RangeError("bundle too short for detector interpolation");
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        bool found = false;
        for (std::size_t k = 1; k < bundle.records.size(); ++k) {
            const double z0 = bundle.records[k - 1].zeta[i];
            const double z1 = bundle.records[k].zeta[i];
            if (z0 <= detector_zeta && detector_zeta <= z1) {
                const double t = z1 > z0 ? (detector_zeta - z0) / (z1 - z0) : 0.0;
                out[i] = bundle.records[k - 1].xi[i] +
                         t * (bundle.records[k].xi[i] - bundle.records[k - 1].xi[i]);
                found = true;
                break;
            }
        }
        if (!found)
            throw RangeError("detector zeta beyond simulated range for ray " +
                             std::to_string(i));
    }
    return out;
}

namespace detail {

inline FringeHistogram make_grid(double lo, double hi, double width,
                                 std::size_t min_bins) {
    FringeHistogram h;
    h.width = width;
    int m_lo = static_cast<int>(std::floor(lo / width + 0.5));
    int m_hi = static_cast<int>(std::floor(hi / width + 0.5));
    while (m_hi - m_lo + 1 < static_cast<int>(min_bins)) { --m_lo; ++m_hi; }
    h.first_bin = m_lo;
    h.value.assign(static_cast<std::size_t>(m_hi - m_lo + 1), 0.0);
    return h;
}

inline void deposit(FringeHistogram& h, double x, double weight) {
    const int m = static_cast<int>(std::floor(x / h.width + 0.5));
    const int i = m - h.first_bin;
    if (i >= 0 && i < static_cast<int>(h.value.size()))
        h.value[static_cast<std::size_t>(i)] += weight;
}

/// 3-bin (1/4, 1/2, 1/4) smoothing; suppresses the period-2 deposit
/// alternation of equally spaced rays without moving gathering peaks.
inline void smooth(FringeHistogram& h) {
    if (h.value.size() < 3) return;
    std::vector<double> s(h.value.size());
    s.front() = 0.75 * h.value[0] + 0.25 * h.value[1];
    s.back() = 0.75 * h.value.back() + 0.25 * h.value[h.value.size() - 2];
    for (std::size_t i = 1; i + 1 < h.value.size(); ++i)
        s[i] = 0.25 * h.value[i - 1] + 0.5 * h.value[i] + 0.25 * h.value[i + 1];
    h.value = std::move(s);
}

inline std::vector<double> find_peaks(const FringeHistogram& h,
                                      double prominence_frac) {
    double peak = 0.0;
    for (double v : h.value) peak = std::max(peak, v);
    std::vector<double> out;
    for (std::size_t i = 1; i + 1 < h.value.size(); ++i)
        if (h.value[i] > h.value[i - 1] && h.value[i] >= h.value[i + 1] &&
            h.value[i] >= prominence_frac * peak)
            out.push_back(h.center(i));
    std::sort(out.begin(), out.end(),
              [](double a, double b) { return std::abs(a) < std::abs(b); });
    return out;
}

}  // namespace detail

/// Histograms the trajectories' detector crossings (weighted by launch R^2,
/// the flux carried per ray) and reports off-axis density peaks.
inline FringeReport detect_fringes(const TrajectoryBundle& bundle,
                                   double detector_zeta, double bin_width,
                                   double prominence_frac = fringe_prominence) {
    if (!(bin_width > 0.0)) throw ConfigError("fringe bin width must be > 0");
    const std::vector<double> xi = detector_crossings(bundle, detector_zeta);
    const auto [lo_it, hi_it] = std::minmax_element(xi.begin(), xi.end());

    FringeReport rep;
    rep.detector_zeta = detector_zeta;
    rep.ray_density_histogram = detail::make_grid(*lo_it, *hi_it, bin_width, 50);
    for (std::size_t i = 0; i < xi.size(); ++i) {
        const double w = bundle.launch_amplitude[i] * bundle.launch_amplitude[i];
        detail::deposit(rep.ray_density_histogram, xi[i], w);
    }
    detail::smooth(rep.ray_density_histogram);
    rep.peak_positions = detail::find_peaks(rep.ray_density_histogram, prominence_frac);
    for (double p : rep.peak_positions)
        if (std::abs(p) > 0.75 * bin_width) rep.is_fringed = true;
    return rep;
}

/// Same detection applied to a gridded intensity row (the wave oracle),
/// binned onto the identical bin grid. Bin values come from interpolating the
/// row at the bin centers rather than summing samples per bin: when the grid
/// spacing does not divide the bin width, per-bin sample counts alternate and
/// a plain sum imprints a sawtooth with spurious local maxima.
inline FringeReport detect_intensity_fringes(const std::vector<double>& xi,
                                             const std::vector<double>& intensity,
                                             double detector_zeta, double bin_width,
                                             double prominence_frac = fringe_prominence) {
    if (xi.size() != intensity.size() || xi.size() < 2)
        throw ConfigError("intensity row size mismatch");
    FringeReport rep;
    rep.detector_zeta = detector_zeta;
    FringeHistogram& h = rep.ray_density_histogram =
        detail::make_grid(xi.front(), xi.back(), bin_width, 50);
    for (std::size_t i = 0; i < h.size(); ++i) {
        const double c = h.center(i);
        if (c <= xi.front() || c >= xi.back()) continue;
        const std::size_t j = static_cast<std::size_t>(
            std::upper_bound(xi.begin(), xi.end(), c) - xi.begin()) - 1;
        const double t = (c - xi[j]) / (xi[j + 1] - xi[j]);
        h.value[i] =
            bin_width * ((1.0 - t) * intensity[j] + t * intensity[j + 1]);
    }
    rep.peak_positions = detail::find_peaks(rep.ray_density_histogram, prominence_frac);
    for (double p : rep.peak_positions)
        if (std::abs(p) > 0.75 * bin_width) rep.is_fringed = true;
    return rep;
}

/// First zeta at which adjacent trajectories "gather": the minimum adjacent
/// spacing falls below `compression` times the launch spacing (or the first
/// actual crossing, whichever comes first). NaN when neither occurs.
inline double first_gathering_zeta(const TrajectoryBundle& bundle,
                                   double compression = 0.25) {
    const std::size_t n = bundle.ray_count();
    if (n < 2) return std::numeric_limits<double>::quiet_NaN();
    const double d0 = bundle.launch_label[1] - bundle.launch_label[0];
    for (const auto& rec : bundle.records) {
        for (std::size_t i = 1; i < n; ++i) {
            const double d = rec.xi[i] - rec.xi[i - 1];
            if (d < compression * d0) {
                const double z = 0.5 * (rec.zeta[i] + rec.zeta[i - 1]);
                if (!std::isnan(bundle.diag.first_crossing_zeta))
                    return std::min(z, bundle.diag.first_crossing_zeta);
                return z;
            }
        }
    }
    return bundle.diag.first_crossing_zeta;
}

}  // namespace wavetrace
