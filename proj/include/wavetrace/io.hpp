#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "wavetrace/errors.hpp"
#include "wavetrace/state.hpp"

namespace wavetrace {

/// Write-temp-then-rename so readers never see a half-written artifact.
inline void atomic_write(const std::filesystem::path& path,
                         const std::string& content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw DomainError("cannot open '" + tmp.string() + "' for writing");
        f << content;
        if (!f) throw DomainError("write failed for '" + tmp.string() + "'");
    }
    fs::rename(tmp, path);
}

/// trajectories.csv: one row per (ray, recorded step).
inline std::string trajectories_csv(const TrajectoryBundle& b) {
    std::ostringstream out;
    out << "ray_id,step,tau,xi,zeta,rho_x,rho_z,R,G\n";
    out << std::setprecision(17);
    for (const StepRecord& rec : b.records)
        for (std::size_t i = 0; i < b.ray_count(); ++i)
            out << i << ',' << rec.step << ',' << rec.tau << ',' << rec.xi[i]
                << ',' << rec.zeta[i] << ',' << rec.rho_x[i] << ','
                << rec.rho_z[i] << ','
                << b.amplitude_scale * b.launch_amplitude[i] << ',' << rec.g[i]
                << '\n';
    return out.str();
}

/// oracle_intensity.csv: grid intensity rows, one line per (zeta, xi) sample.
inline std::string intensity_csv(const std::vector<double>& xi,
                                 const std::vector<double>& zeta,
                                 const std::vector<std::vector<double>>& rows) {
    std::ostringstream out;
    out << "zeta,xi,intensity\n";
    out << std::setprecision(10);
    for (std::size_t k = 0; k < rows.size(); ++k)
        for (std::size_t j = 0; j < xi.size(); ++j)
            out << zeta[k] << ',' << xi[j] << ',' << rows[k][j] << '\n';
    return out.str();
}

namespace svg {

struct Series {
    std::vector<double> x, y;
    std::string color = "#1f6fb2";
    double width = 0.6;
};

/// Minimal self-contained line plot; x grows rightward, y upward.
inline std::string line_plot(const std::vector<Series>& series,
                             const std::string& x_label,
                             const std::string& y_label,
                             const std::string& title) {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            xmin = std::min(xmin, s.x[i]); xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]); ymax = std::max(ymax, s.y[i]);
        }
    if (!(xmax > xmin)) { xmax = xmin + 1.0; }
    if (!(ymax > ymin)) { ymax = ymin + 1.0; }
    const double padx = 0.05 * (xmax - xmin), pady = 0.05 * (ymax - ymin);
    xmin -= padx; xmax += padx; ymin -= pady; ymax += pady;

    const int W = 900, H = 600, ml = 70, mr = 20, mt = 40, mb = 55;
    auto X = [&](double x) {
        return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr);
    };
    auto Y = [&](double y) {
        return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb);
    };

    std::ostringstream out;
    out << std::setprecision(8);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W
        << "' height='" << H << "' viewBox='0 0 " << W << ' ' << H << "'>\n"
        << "<rect width='" << W << "' height='" << H << "' fill='white'/>\n"
        << "<rect x='" << ml << "' y='" << mt << "' width='" << W - ml - mr
        << "' height='" << H - mt - mb
        << "' fill='none' stroke='#333' stroke-width='1'/>\n";

    // ticks: 6 per axis
    for (int t = 0; t <= 5; ++t) {
        const double xv = xmin + (xmax - xmin) * t / 5.0;
        const double yv = ymin + (ymax - ymin) * t / 5.0;
        out << "<line x1='" << X(xv) << "' y1='" << H - mb << "' x2='" << X(xv)
            << "' y2='" << H - mb + 5 << "' stroke='#333'/>\n"
            << "<text x='" << X(xv) << "' y='" << H - mb + 20
            << "' font-size='12' text-anchor='middle'>" << std::setprecision(4)
            << xv << std::setprecision(8) << "</text>\n"
            << "<line x1='" << ml - 5 << "' y1='" << Y(yv) << "' x2='" << ml
            << "' y2='" << Y(yv) << "' stroke='#333'/>\n"
            << "<text x='" << ml - 8 << "' y='" << Y(yv) + 4
            << "' font-size='12' text-anchor='end'>" << std::setprecision(4)
            << yv << std::setprecision(8) << "</text>\n";
    }
    out << "<text x='" << (ml + W - mr) / 2 << "' y='" << H - 15
        << "' font-size='14' text-anchor='middle'>" << x_label << "</text>\n"
        << "<text x='18' y='" << (mt + H - mb) / 2
        << "' font-size='14' text-anchor='middle' transform='rotate(-90 18 "
        << (mt + H - mb) / 2 << ")'>" << y_label << "</text>\n"
        << "<text x='" << (ml + W - mr) / 2 << "' y='25'"
        << " font-size='15' text-anchor='middle'>" << title << "</text>\n";

    for (const auto& s : series) {
        out << "<polyline fill='none' stroke='" << s.color
            << "' stroke-width='" << s.width << "' points='";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double px = X(s.x[i]), py = Y(s.y[i]);
            if (px >= ml - 1 && px <= W - mr + 1) out << px << ',' << py << ' ';
        }
        out << "'/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace svg

/// Trajectory pattern on the (xi, zeta)-plane: zeta horizontal, xi vertical,
/// both in units of lambda0.
inline std::string pattern_svg(const TrajectoryBundle& b,
                               const std::string& title,
                               std::size_t max_curves = 120) {
    std::vector<svg::Series> series;
    const std::size_t n = b.ray_count();
    const std::size_t stride = std::max<std::size_t>(1, n / max_curves);
    for (std::size_t i = 0; i < n; i += stride) {
        svg::Series s;
        for (const StepRecord& rec : b.records) {
            s.x.push_back(rec.zeta[i]);
            s.y.push_back(rec.xi[i]);
        }
        series.push_back(std::move(s));
    }
    return svg::line_plot(series, "zeta  [lambda0]", "xi  [lambda0]", title);
}

}  // namespace wavetrace
