#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "wavetrace/errors.hpp"
#include "wavetrace/geometry.hpp"
#include "wavetrace/integrator.hpp"
#include "wavetrace/launch.hpp"
#include "wavetrace/medium.hpp"
#include "wavetrace/oracles.hpp"
#include "wavetrace/scales.hpp"

namespace wavetrace {

/// Run configuration as flat dotted keys. The system is deterministic by
/// construction; there is no RNG and no seed anywhere.
struct RunConfig {
    std::string front_end = "quantum";        // quantum | optical
    std::string profile_kind = "gaussian";    // gaussian | algebraic | two_beam | custom_samples
    double profile_epsilon = 0.25;
    int profile_N = 1;
    double profile_xi0 = 0.0;
    std::string profile_base = "gaussian";    // two_beam base kind
    double profile_scale = 1.0;
    std::string profile_samples_file;

    std::string medium_kind = "vacuum";       // vacuum | uniform_force
    double medium_force = 0.0;

    int fan_n_rays = 201;
    double fan_xi_min = std::numeric_limits<double>::quiet_NaN();  // auto
    double fan_xi_max = std::numeric_limits<double>::quiet_NaN();  // auto

    std::string integrator_scheme = "rk4";    // rk4 | leapfrog
    double integrator_d_tau = 0.1;
    int integrator_n_steps = 0;               // 0 = auto: ceil(4 pi / eps^2 / d_tau)
    bool integrator_go_limit = false;
    double integrator_g_scale = 1.0;
    std::string integrator_enforce_constraint = "auto";  // auto | on | off
    std::string integrator_caustic_policy = "halt";      // halt | sort_and_continue
    std::string integrator_g_freshness = "extrapolated"; // extrapolated | frozen
    double integrator_g_smoothing =
        std::numeric_limits<double>::quiet_NaN();  // auto: by profile sharpness
    double integrator_base_viscosity = 0.035; // momentum-angle diffusion
    double integrator_tail_viscosity = 0.15;  // extra diffusion below 5% amplitude

    double detector_zeta = 0.0;               // 0 = auto: 2 pi / eps^2
    double histogram_bin_width = 0.0;         // 0 = auto: w0/10 = 1/(10 eps)

    std::string outputs_dir = ".";
    int outputs_decimation = 1;
};

namespace cfgkeys {

template <typename Setter>
struct Key {
    const char* name;
    Setter set;
};

inline void assign(RunConfig& c, const std::string& key, const std::string& value) {
    auto bad_value = [&](const std::string& why) {
        throw ConfigError("config key '" + key + "': " + why + " (got '" + value + "')");
    };
    auto as_double = [&]() {
        try {
            std::size_t pos = 0;
            const double v = std::stod(value, &pos);
            if (pos != value.size()) bad_value("expected a number");
            return v;
        } catch (const std::exception&) {
            bad_value("expected a number");
            return 0.0;
        }
    };
    auto as_int = [&]() {
        try {
            std::size_t pos = 0;
            const int v = std::stoi(value, &pos);
            if (pos != value.size()) bad_value("expected an integer");
            return v;
        } catch (const std::exception&) {
            bad_value("expected an integer");
            return 0;
        }
    };
    auto as_bool = [&]() {
        if (value == "true" || value == "1" || value == "on") return true;
        if (value == "false" || value == "0" || value == "off") return false;
        bad_value("expected a boolean");
        return false;
    };

    if (key == "front_end") c.front_end = value;
    else if (key == "profile.kind") c.profile_kind = value;
    else if (key == "profile.epsilon") c.profile_epsilon = as_double();
    else if (key == "profile.N") c.profile_N = as_int();
    else if (key == "profile.xi0") c.profile_xi0 = as_double();
    else if (key == "profile.base") c.profile_base = value;
    else if (key == "profile.scale") c.profile_scale = as_double();
    else if (key == "profile.samples_file") c.profile_samples_file = value;
    else if (key == "medium.kind") c.medium_kind = value;
    else if (key == "medium.force") c.medium_force = as_double();
    else if (key == "fan.n_rays") c.fan_n_rays = as_int();
    else if (key == "fan.xi_min") c.fan_xi_min = as_double();
    else if (key == "fan.xi_max") c.fan_xi_max = as_double();
    else if (key == "integrator.scheme") c.integrator_scheme = value;
    else if (key == "integrator.d_tau") c.integrator_d_tau = as_double();
    else if (key == "integrator.n_steps") c.integrator_n_steps = as_int();
    else if (key == "integrator.go_limit") c.integrator_go_limit = as_bool();
    else if (key == "integrator.g_scale") c.integrator_g_scale = as_double();
    else if (key == "integrator.enforce_constraint") c.integrator_enforce_constraint = value;
    else if (key == "integrator.caustic_policy") c.integrator_caustic_policy = value;
    else if (key == "integrator.g_freshness") c.integrator_g_freshness = value;
    else if (key == "integrator.g_smoothing") c.integrator_g_smoothing = as_double();
    else if (key == "integrator.base_viscosity") c.integrator_base_viscosity = as_double();
    else if (key == "integrator.tail_viscosity") c.integrator_tail_viscosity = as_double();
    else if (key == "detector.zeta") c.detector_zeta = as_double();
    else if (key == "histogram.bin_width") c.histogram_bin_width = as_double();
    else if (key == "outputs.dir") c.outputs_dir = value;
    else if (key == "outputs.decimation") c.outputs_decimation = as_int();
    else throw ConfigError("unknown config key '" + key + "'");
}

}  // namespace cfgkeys

inline RunConfig parse_config_text(const std::string& text) {
    RunConfig c;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        const auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected 'key = value'");
        cfgkeys::assign(c, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return c;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str());
}

inline LaunchProfile build_profile(const RunConfig& c) {
    auto base_of = [&](const std::string& kind) {
        if (kind == "gaussian")
            return LaunchProfile::gaussian(c.profile_epsilon, c.profile_scale);
        if (kind == "algebraic")
            return LaunchProfile::algebraic(c.profile_epsilon, c.profile_N,
                                            c.profile_scale);
        throw ConfigError("config key 'profile.base': unsupported kind '" + kind +
                          "'");
    };
    if (c.profile_kind == "gaussian" || c.profile_kind == "algebraic")
        return base_of(c.profile_kind);
    if (c.profile_kind == "two_beam")
        return LaunchProfile::two_beam(base_of(c.profile_base), c.profile_xi0);
    if (c.profile_kind == "custom_samples") {
        if (c.profile_samples_file.empty())
            throw ConfigError("config key 'profile.samples_file' required for custom_samples");
        std::ifstream f(c.profile_samples_file);
        if (!f)
            throw ConfigError("config key 'profile.samples_file': cannot read '" +
                              c.profile_samples_file + "'");
        std::vector<double> xs, rs;
        std::string line;
        while (std::getline(f, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::replace(line.begin(), line.end(), ',', ' ');
            std::istringstream ls(line);
            double x, r;
            if (ls >> x >> r) { xs.push_back(x); rs.push_back(r); }
        }
        return LaunchProfile::custom_samples(std::move(xs), std::move(rs));
    }
    throw ConfigError("config key 'profile.kind': unknown kind '" + c.profile_kind + "'");
}

inline Medium build_medium(const RunConfig& c) {
    if (c.medium_kind == "vacuum") return Medium::vacuum();
    if (c.medium_kind == "uniform_force")
        return Medium::uniform_force(c.medium_force);
    throw ConfigError("config key 'medium.kind': unknown kind '" + c.medium_kind +
                      "' (supported: vacuum, uniform_force)");
}

inline IntegratorConfig build_integrator(const RunConfig& c, const Medium& medium) {
    IntegratorConfig ic;
    ic.d_tau = c.integrator_d_tau;
    ic.n_steps = c.integrator_n_steps;
    if (c.integrator_scheme == "rk4") ic.scheme = Scheme::explicit_rk4;
    else if (c.integrator_scheme == "leapfrog") ic.scheme = Scheme::symplectic_leapfrog;
    else throw ConfigError("config key 'integrator.scheme': unknown '" +
                           c.integrator_scheme + "'");
    ic.go_limit_mode = c.integrator_go_limit;
    ic.g_scale = c.integrator_g_scale;
    if (c.integrator_enforce_constraint == "auto")
        ic.enforce_constraint = medium.is_vacuum();
    else if (c.integrator_enforce_constraint == "on") ic.enforce_constraint = true;
    else if (c.integrator_enforce_constraint == "off") ic.enforce_constraint = false;
    else throw ConfigError("config key 'integrator.enforce_constraint': expected auto|on|off");
    if (c.integrator_caustic_policy == "halt") ic.caustic_policy = CausticPolicy::halt;
    else if (c.integrator_caustic_policy == "sort_and_continue")
        ic.caustic_policy = CausticPolicy::sort_and_continue;
    else throw ConfigError("config key 'integrator.caustic_policy': expected halt|sort_and_continue");
    if (c.integrator_g_freshness == "frozen") ic.g_freshness = GFreshness::frozen;
    else if (c.integrator_g_freshness == "extrapolated")
        ic.g_freshness = GFreshness::extrapolated;
    else throw ConfigError("config key 'integrator.g_freshness': expected extrapolated|frozen");
    ic.g_smoothing = c.integrator_g_smoothing;
    ic.base_viscosity = c.integrator_base_viscosity;
    ic.tail_viscosity = c.integrator_tail_viscosity;
    ic.record_every = c.outputs_decimation;
    return ic;
}

/// Fills every auto field with its concrete value so the effective config can
/// be serialized into summary.json.
inline RunConfig resolve(const RunConfig& in) {
    RunConfig c = in;
    if (c.front_end != "quantum" && c.front_end != "optical")
        throw ConfigError("config key 'front_end': expected quantum|optical");
    if (c.outputs_decimation < 1)
        throw ConfigError("config key 'outputs.decimation': must be >= 1");
    const LaunchProfile profile = build_profile(c);  // validates profile keys
    const double half = profile.default_half_domain();
    if (std::isnan(c.fan_xi_min)) c.fan_xi_min = -half;
    if (std::isnan(c.fan_xi_max)) c.fan_xi_max = half;
    const double eps = profile.epsilon() > 0.0 ? profile.epsilon() : 0.25;
    if (c.integrator_n_steps == 0)
        c.integrator_n_steps = static_cast<int>(
            std::ceil(4.0 * pi / (eps * eps) / c.integrator_d_tau));
    if (c.detector_zeta == 0.0) c.detector_zeta = 2.0 * pi / (eps * eps);
    // Sharper profiles need a wider G mollifier: the algebraic shoulder
    // curvature grows like N^2 relative to the gaussian's. The width scales
    // with the beam half width 1/eps so runs at different eps stay
    // self-similar.
    if (std::isnan(c.integrator_g_smoothing)) {
        const double base = c.profile_kind == "algebraic"
                                ? std::max(1.0, 0.7 * c.profile_N * c.profile_N)
                                : 0.7;
        c.integrator_g_smoothing = base * 0.25 / eps;
    }
    if (c.histogram_bin_width == 0.0) c.histogram_bin_width = 1.0 / (10.0 * eps);
    const Medium medium = build_medium(c);
    build_integrator(c, medium).validate(medium);  // validates integrator keys
    if (c.fan_n_rays < 5) throw ConfigError("config key 'fan.n_rays': must be >= 5");
    if (!(c.fan_xi_min < c.fan_xi_max))
        throw ConfigError("config key 'fan.xi_min': must be < fan.xi_max");
    if (!(c.detector_zeta > 0.0))
        throw ConfigError("config key 'detector.zeta': must be > 0");
    if (!(c.histogram_bin_width > 0.0))
        throw ConfigError("config key 'histogram.bin_width': must be > 0");
    return c;
}

inline nlohmann::json config_to_json(const RunConfig& c) {
    return nlohmann::json{
        {"front_end", c.front_end},
        {"profile.kind", c.profile_kind},
        {"profile.epsilon", c.profile_epsilon},
        {"profile.N", c.profile_N},
        {"profile.xi0", c.profile_xi0},
        {"profile.base", c.profile_base},
        {"profile.scale", c.profile_scale},
        {"profile.samples_file", c.profile_samples_file},
        {"medium.kind", c.medium_kind},
        {"medium.force", c.medium_force},
        {"fan.n_rays", c.fan_n_rays},
        {"fan.xi_min", c.fan_xi_min},
        {"fan.xi_max", c.fan_xi_max},
        {"integrator.scheme", c.integrator_scheme},
        {"integrator.d_tau", c.integrator_d_tau},
        {"integrator.n_steps", c.integrator_n_steps},
        {"integrator.go_limit", c.integrator_go_limit},
        {"integrator.g_scale", c.integrator_g_scale},
        {"integrator.enforce_constraint", c.integrator_enforce_constraint},
        {"integrator.caustic_policy", c.integrator_caustic_policy},
        {"integrator.g_freshness", c.integrator_g_freshness},
        {"integrator.g_smoothing", c.integrator_g_smoothing},
        {"integrator.base_viscosity", c.integrator_base_viscosity},
        {"integrator.tail_viscosity", c.integrator_tail_viscosity},
        {"detector.zeta", c.detector_zeta},
        {"histogram.bin_width", c.histogram_bin_width},
        {"outputs.dir", c.outputs_dir},
        {"outputs.decimation", c.outputs_decimation},
    };
}

inline std::string default_config_text() {
    const RunConfig c;
    std::ostringstream out;
    out << "# wavetrace run configuration (flat dotted keys)\n"
        << "front_end = " << c.front_end << "\n"
        << "profile.kind = " << c.profile_kind << "\n"
        << "profile.epsilon = " << c.profile_epsilon << "\n"
        << "profile.N = " << c.profile_N << "\n"
        << "profile.xi0 = " << c.profile_xi0 << "\n"
        << "profile.base = " << c.profile_base << "\n"
        << "profile.scale = " << c.profile_scale << "\n"
        << "medium.kind = " << c.medium_kind << "\n"
        << "medium.force = " << c.medium_force << "\n"
        << "fan.n_rays = " << c.fan_n_rays << "\n"
        << "# fan.xi_min / fan.xi_max default to the profile's natural domain\n"
        << "integrator.scheme = " << c.integrator_scheme << "\n"
        << "integrator.d_tau = " << c.integrator_d_tau << "\n"
        << "integrator.n_steps = 0   # 0 = auto: zeta_max ~ 4 pi / eps^2\n"
        << "integrator.go_limit = false\n"
        << "integrator.g_scale = 1\n"
        << "integrator.enforce_constraint = auto\n"
        << "integrator.caustic_policy = halt\n"
        << "integrator.g_freshness = extrapolated\n"
        << "# integrator.g_smoothing defaults by profile: 0.7 (gaussian) or\n"
        << "# max(1, 0.7 N^2) (algebraic), times 0.25/epsilon\n"
        << "integrator.base_viscosity = " << c.integrator_base_viscosity << "\n"
        << "integrator.tail_viscosity = " << c.integrator_tail_viscosity << "\n"
        << "detector.zeta = 0        # 0 = auto: 2 pi / eps^2\n"
        << "histogram.bin_width = 0  # 0 = auto: w0/10\n"
        << "outputs.dir = .\n"
        << "outputs.decimation = 1\n";
    return out.str();
}

}  // namespace wavetrace
