// wavetrace command line: run simulations, reproduce the reference figures,
// compare against the wave oracle, and sweep parameters.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wavetrace/config.hpp"
#include "wavetrace/io.hpp"
#include "wavetrace/pipeline.hpp"

namespace fs = std::filesystem;
using namespace wavetrace;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_threshold = 1;
constexpr int exit_config = 2;
constexpr int exit_runtime = 3;
constexpr int exit_oracle = 4;

int cmd_run(const std::string& config_path) {
    RunConfig resolved;
    try {
        resolved = resolve(load_config(config_path));
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    }
    try {
        const TrajectoryBundle bundle = simulate(resolved);
        std::optional<FringeReport> fringe;
        if (bundle.final_zeta_min() >= resolved.detector_zeta)
            fringe = detect_fringes(bundle, resolved.detector_zeta,
                                    resolved.histogram_bin_width);
        write_run_artifacts(resolved, bundle, fringe);
        std::cout << "wrote trajectories.csv, summary.json, pattern.svg to "
                  << resolved.outputs_dir << "\n";
        return exit_ok;
    } catch (const CausticError& e) {
        if (e.partial) write_run_artifacts(resolved, *e.partial, {}, e.what());
        std::cerr << "runtime halt: " << e.what() << "\n";
        return exit_runtime;
    } catch (const NumericalBlowupError& e) {
        if (e.partial) write_run_artifacts(resolved, *e.partial, {}, e.what());
        std::cerr << "runtime halt: " << e.what() << "\n";
        return exit_runtime;
    }
}

RunConfig figure_config(const std::string& profile_kind, int N,
                        const std::string& out_dir) {
    RunConfig cfg;
    cfg.profile_kind = profile_kind;
    cfg.profile_N = N;
    cfg.fan_n_rays = 201;
    cfg.outputs_dir = out_dir;
    cfg.outputs_decimation = 10;
    cfg.integrator_caustic_policy = "sort_and_continue";
    // plot to just past the detector plane at 2 pi / eps^2
    cfg.integrator_n_steps = static_cast<int>(
        std::ceil(2.2 * pi / (0.25 * 0.25) / cfg.integrator_d_tau));
    return cfg;
}

int cmd_reproduce(int figure, const std::string& out_dir) {
    const double eps = 0.25;
    const fs::path dir = out_dir;
    const LaunchProfile r0 = LaunchProfile::gaussian(eps);
    const LaunchProfile r1 = LaunchProfile::algebraic(eps, 1);
    const LaunchProfile r2 = LaunchProfile::algebraic(eps, 2);

    auto curve = [&](const LaunchProfile& p, auto f, const std::string& color) {
        svg::Series s;
        s.color = color;
        s.width = 1.5;
        for (double xi = -24.0; xi <= 24.0; xi += 0.05) {
            s.x.push_back(xi);
            s.y.push_back(f(p, xi));
        }
        return s;
    };
    auto amplitude = [](const LaunchProfile& p, double xi) { return p.shape(xi); };
    auto launch_g = [](const LaunchProfile& p, double xi) {
        return p.shape_second_derivative(xi) / p.shape(xi);
    };
    const std::string name = "fig" + std::to_string(figure) + ".svg";

    switch (figure) {
        case 1:
            atomic_write(dir / name,
                         svg::line_plot({curve(r0, amplitude, "#222222"),
                                         curve(r1, amplitude, "#b22222"),
                                         curve(r2, amplitude, "#1f6fb2")},
                                        "xi  [lambda0]", "R",
                                        "launch amplitudes R0 (black), R1 (red), "
                                        "R2 (blue), eps = 0.25"));
            return exit_ok;
        case 2:
        case 3: {
            const LaunchProfile& rn = figure == 2 ? r1 : r2;
            atomic_write(dir / name,
                         svg::line_plot({curve(r0, launch_g, "#222222"),
                                         curve(rn, launch_g, "#b22222")},
                                        "xi  [lambda0]", "G",
                                        "launch-plane wave potential G0 (black) vs G" +
                                            std::to_string(figure - 1) +
                                            " (red), eps = 0.25"));
            return exit_ok;
        }
        case 4:
        case 5:
        case 6: {
            const RunConfig cfg = resolve(
                figure == 4 ? figure_config("gaussian", 1, out_dir)
                            : figure_config("algebraic", figure - 4, out_dir));
            const TrajectoryBundle bundle = simulate(cfg);
            const std::string title =
                figure == 4 ? "trajectory pattern, gaussian launch, eps = 0.25"
                            : "trajectory pattern, algebraic N=" +
                                  std::to_string(figure - 4) + ", eps = 0.25";
            atomic_write(dir / name, pattern_svg(bundle, title));
            return exit_ok;
        }
        default:
            std::cerr << "figure must be 1..6\n";
            return exit_config;
    }
}

int cmd_oracle_compare(const std::string& config_path) {
    RunConfig cfg;
    try {
        cfg = resolve(load_config(config_path));
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    }
    try {
        const OracleComparison cmp = oracle_compare(cfg);
        atomic_write(fs::path(cfg.outputs_dir) / "oracle_compare.json",
                     oracle_comparison_json(cmp).dump(2) + "\n");
        {
            const LaunchProfile profile = build_profile(cfg);
            ParaxialGridSpec grid = default_grid(
                profile,
                std::max(std::abs(cfg.fan_xi_min), std::abs(cfg.fan_xi_max)));
            grid.record_every = 20;
            const ParaxialResult wave =
                paraxial_grid_propagate(profile, cfg.detector_zeta + 1.0, grid);
            atomic_write(fs::path(cfg.outputs_dir) / "oracle_intensity.csv",
                         intensity_csv(wave.xi, wave.zeta, wave.intensity));
        }
        if (!cmp.all_ok()) {
            std::cerr << "oracle comparison thresholds violated:";
            if (!cmp.envelope_ok) std::cerr << " envelope";
            if (!cmp.peaks_ok) std::cerr << " fringe-positions";
            if (!cmp.flux_ok) std::cerr << " flux";
            std::cerr << "\n";
            return exit_threshold;
        }
        std::cout << "oracle comparison passed\n";
        return exit_ok;
    } catch (const OracleResolutionError& e) {
        std::cerr << "oracle resolution failure: " << e.what() << "\n";
        return exit_oracle;
    } catch (const std::exception& e) {
        std::cerr << "runtime halt: " << e.what() << "\n";
        return exit_runtime;
    }
}

int cmd_sweep(const std::string& config_path, const std::string& parameter,
              const std::vector<double>& values) {
    RunConfig base;
    try {
        base = load_config(config_path);
        if (values.empty()) throw ConfigError("sweep needs at least one value");
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    }
    const auto points = sweep(base, parameter, values);
    const fs::path dir = base.outputs_dir;
    atomic_write(dir / "sweep.json", sweep_json(parameter, points).dump(2) + "\n");

    svg::Series s;
    s.width = 1.5;
    for (const auto& p : points)
        if (!std::isnan(p.first_gathering_zeta)) {
            s.x.push_back(p.value);
            s.y.push_back(p.first_gathering_zeta);
        }
    atomic_write(dir / "sweep.svg",
                 svg::line_plot({s}, parameter, "first gathering zeta  [lambda0]",
                                "first gathering vs " + parameter));
    std::cout << "wrote sweep.json, sweep.svg to " << dir.string() << "\n";
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hamiltonian ray tracing with the wave-potential coupling"};
    app.require_subcommand(1);

    std::string config_path;
    int figure = 1;
    std::string out_dir = ".";
    std::string parameter;
    std::vector<double> values;

    auto* run_cmd = app.add_subcommand("run", "run a simulation from a config file");
    run_cmd->add_option("config", config_path, "config file")->required();

    auto* rep_cmd = app.add_subcommand("reproduce", "reproduce reference figure 1..6");
    rep_cmd->add_option("figure", figure, "figure number")->required()
        ->check(CLI::Range(1, 6));
    rep_cmd->add_option("--out", out_dir, "output directory");

    auto* ora_cmd = app.add_subcommand("oracle-compare",
                                       "run simulator and wave oracle, compare");
    ora_cmd->add_option("config", config_path, "config file")->required();

    auto* swp_cmd = app.add_subcommand("sweep", "run one simulation per value");
    swp_cmd->add_option("config", config_path, "config file")->required();
    swp_cmd->add_option("--param", parameter, "epsilon|N|xi0|d_tau|n_rays")
        ->required();
    swp_cmd->add_option("--values", values, "sweep values")->required();

    auto* def_cmd = app.add_subcommand("defaults", "print the default config");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) return cmd_run(config_path);
        if (rep_cmd->parsed()) return cmd_reproduce(figure, out_dir);
        if (ora_cmd->parsed()) return cmd_oracle_compare(config_path);
        if (swp_cmd->parsed()) return cmd_sweep(config_path, parameter, values);
        if (def_cmd->parsed()) {
            std::cout << default_config_text();
            return exit_ok;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_runtime;
    }
    return exit_config;
}
