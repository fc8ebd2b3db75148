#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "wavetrace/config.hpp"
#include "wavetrace/io.hpp"
#include "wavetrace/pipeline.hpp"

using namespace wavetrace;

TEST_CASE("defaults parse and resolve") {
    const RunConfig c = parse_config_text(default_config_text());
    const RunConfig r = resolve(c);
    CHECK(r.fan_xi_min == doctest::Approx(-12.0));
    CHECK(r.fan_xi_max == doctest::Approx(12.0));
    CHECK(r.detector_zeta == doctest::Approx(2.0 * pi / 0.0625));
    CHECK(r.histogram_bin_width == doctest::Approx(0.4));
    CHECK(r.integrator_n_steps ==
          static_cast<int>(std::ceil(4.0 * pi / 0.0625 / 0.1)));
}

TEST_CASE("config errors name the offending key") {
    CHECK_THROWS_WITH_AS(resolve(parse_config_text("profile.epsilon = 1.5\n")),
                         doctest::Contains("epsilon"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("no.such.key = 1\n"),
                         doctest::Contains("no.such.key"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("fan.n_rays = many\n"),
                         doctest::Contains("fan.n_rays"), ConfigError);
    CHECK_THROWS_WITH_AS(resolve(parse_config_text("medium.kind = plasma\n")),
                         doctest::Contains("medium.kind"), ConfigError);
    CHECK_THROWS_WITH_AS(
        resolve(parse_config_text(
            "medium.kind = uniform_force\nmedium.force = 0.1\n"
            "integrator.enforce_constraint = on\n")),
        doctest::Contains("enforce_constraint"), ConfigError);
}

TEST_CASE("comments and blank lines are accepted") {
    const RunConfig c = parse_config_text(
        "# a comment\n\nprofile.kind = algebraic  # trailing\nprofile.N = 2\n");
    CHECK(c.profile_kind == "algebraic");
    CHECK(c.profile_N == 2);
}

TEST_CASE("effective config serializes with every key") {
    const nlohmann::json j = config_to_json(resolve(RunConfig{}));
    for (const char* key :
         {"front_end", "profile.kind", "profile.epsilon", "fan.n_rays",
          "integrator.d_tau", "integrator.n_steps", "detector.zeta",
          "histogram.bin_width", "outputs.dir"})
        CHECK(j.contains(key));
}

TEST_CASE("trajectories csv schema") {
    TrajectoryBundle b;
    b.launch_label = {0.0, 1.0};
    b.launch_amplitude = {1.0, 0.5};
    b.amplitude_scale = 2.0;
    StepRecord r;
    r.step = 0;
    r.tau = 0.0;
    r.xi = {0.0, 1.0};
    r.zeta = {0.0, 0.0};
    r.rho_x = {0.0, 0.0};
    r.rho_z = {1.0, 1.0};
    r.g = {-0.1, -0.2};
    b.records.push_back(r);
    const std::string csv = trajectories_csv(b);
    CHECK(csv.rfind("ray_id,step,tau,xi,zeta,rho_x,rho_z,R,G\n", 0) == 0);
    CHECK(csv.find("1,0,0,1,0,0,1,1,-0.2") != std::string::npos);  // R = 2*0.5
}

TEST_CASE("atomic write leaves no temp file behind") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "wavetrace_io_test";
    fs::remove_all(dir);
    atomic_write(dir / "x.txt", "hello");
    std::ifstream f(dir / "x.txt");
    std::string s;
    std::getline(f, s);
    CHECK(s == "hello");
    CHECK_FALSE(fs::exists(dir / "x.txt.tmp"));
    fs::remove_all(dir);
}

TEST_CASE("run artifacts and summary schema") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "wavetrace_run_test";
    fs::remove_all(dir);

    RunConfig cfg;
    cfg.fan_n_rays = 41;
    cfg.integrator_n_steps = 50;
    cfg.outputs_dir = dir.string();
    cfg.outputs_decimation = 5;
    const RunOutput out = execute(cfg);
    write_run_artifacts(out.resolved, out.bundle, out.fringe);

    CHECK(fs::exists(dir / "trajectories.csv"));
    CHECK(fs::exists(dir / "summary.json"));
    CHECK(fs::exists(dir / "pattern.svg"));

    std::ifstream f(dir / "summary.json");
    const nlohmann::json j = nlohmann::json::parse(f);
    CHECK(j["schema"] == "wavetrace-summary-v1");
    for (const char* key : {"config", "status", "diagnostics", "fringe_report"})
        CHECK(j.contains(key));
    CHECK(j["diagnostics"].contains("max_rho_drift"));
    CHECK(j["status"] == "ok");

    // svg renders standalone: no external references
    std::ifstream sf(dir / "pattern.svg");
    std::string svg((std::istreambuf_iterator<char>(sf)),
                    std::istreambuf_iterator<char>());
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("href") == std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("sweep records per-run errors and continues") {
    RunConfig base;
    base.fan_n_rays = 41;
    base.integrator_n_steps = 20;
    const auto points = sweep(base, "epsilon", {0.25, 1.5});
    REQUIRE(points.size() == 2);
    CHECK(points[0].error.empty());
    CHECK(points[1].error.find("epsilon") != std::string::npos);
}
