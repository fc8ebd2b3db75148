#include <doctest.h>

#include <cmath>

#include "wavetrace/fringes.hpp"

using namespace wavetrace;

namespace {

// Synthetic bundle: straight rays from zeta=0 to zeta=100 whose detector
// positions are prescribed by a mapping of the launch label.
TrajectoryBundle synthetic_bundle(int n, double half, double (*map)(double)) {
    TrajectoryBundle b;
    const double d = 2.0 * half / (n - 1);
    for (int i = 0; i < n; ++i) {
        b.launch_label.push_back(-half + i * d);
        b.launch_amplitude.push_back(1.0);
    }
    StepRecord r0, r1;
    r0.step = 0; r1.step = 1;
    r1.tau = 100.0;
    for (int i = 0; i < n; ++i) {
        const double x0 = b.launch_label[static_cast<std::size_t>(i)];
        r0.xi.push_back(x0); r0.zeta.push_back(0.0);
        r0.rho_x.push_back(0.0); r0.rho_z.push_back(1.0); r0.g.push_back(0.0);
        r1.xi.push_back(map(x0)); r1.zeta.push_back(100.0);
        r1.rho_x.push_back(0.0); r1.rho_z.push_back(1.0); r1.g.push_back(0.0);
    }
    b.records.push_back(r0);
    b.records.push_back(r1);
    return b;
}

}  // namespace

TEST_CASE("uniformly stretched fan shows no fringes") {
    const TrajectoryBundle b =
        synthetic_bundle(2001, 12.0, +[](double x) { return 2.0 * x; });
    // weight by a smooth gaussian launch amplitude
    TrajectoryBundle c = b;
    for (std::size_t i = 0; i < c.ray_count(); ++i)
        c.launch_amplitude[i] =
            std::exp(-0.0625 * c.launch_label[i] * c.launch_label[i]);
    const FringeReport rep = detect_fringes(c, 50.0, 0.4);
    CHECK_FALSE(rep.is_fringed);
    CHECK(rep.ray_density_histogram.size() >= 50);
}

TEST_CASE("gathered trajectories produce off-axis peaks") {
    // mapping compresses rays around +-6 at the detector
    const TrajectoryBundle b = synthetic_bundle(
        2001, 12.0, +[](double x) { return x + 4.0 * std::sin(pi * x / 6.0); });
    const FringeReport rep = detect_fringes(b, 100.0, 0.4);
    CHECK(rep.is_fringed);
    REQUIRE(!rep.peak_positions.empty());
    // peaks sorted by |xi|
    for (std::size_t i = 1; i < rep.peak_positions.size(); ++i)
        CHECK(std::abs(rep.peak_positions[i]) >=
              std::abs(rep.peak_positions[i - 1]));
}

TEST_CASE("detector beyond the simulated range is a range error") {
    const TrajectoryBundle b =
        synthetic_bundle(101, 12.0, +[](double x) { return x; });
    CHECK_THROWS_AS(detect_fringes(b, 150.0, 0.4), RangeError);
}

TEST_CASE("detector interpolation is linear between records") {
    const TrajectoryBundle b =
        synthetic_bundle(101, 12.0, +[](double x) { return 2.0 * x; });
    const auto xi = detector_crossings(b, 50.0);
    for (std::size_t i = 0; i < xi.size(); ++i)
        CHECK(xi[i] == doctest::Approx(1.5 * b.launch_label[i]).epsilon(1e-13));
}

TEST_CASE("intensity rows run through the same peak detector") {
    std::vector<double> xi, I;
    for (int j = -500; j <= 500; ++j) {
        const double x = 0.05 * j;
        xi.push_back(x);
        I.push_back(std::exp(-0.1 * x * x) +
                    0.6 * std::exp(-2.0 * (std::abs(x) - 8.0) * (std::abs(x) - 8.0)));
    }
    const FringeReport rep = detect_intensity_fringes(xi, I, 100.0, 0.4);
    CHECK(rep.is_fringed);
    bool near8 = false;
    for (double p : rep.peak_positions)
        if (std::abs(std::abs(p) - 8.0) < 0.5) near8 = true;
    CHECK(near8);
}

TEST_CASE("first gathering zeta") {
    // rays converge linearly toward the axis: spacing shrinks with zeta
    TrajectoryBundle b;
    const int n = 11;
    for (int i = 0; i < n; ++i) {
        b.launch_label.push_back(i - 5.0);
        b.launch_amplitude.push_back(1.0);
    }
    for (int k = 0; k <= 10; ++k) {
        StepRecord r;
        r.step = k;
        r.tau = 10.0 * k;
        const double shrink = 1.0 - 0.09 * k;
        for (int i = 0; i < n; ++i) {
            r.xi.push_back((i - 5.0) * shrink);
            r.zeta.push_back(10.0 * k);
            r.rho_x.push_back(0.0);
            r.rho_z.push_back(1.0);
            r.g.push_back(0.0);
        }
        b.records.push_back(r);
    }
    const double z = first_gathering_zeta(b, 0.25);
    // spacing ratio drops below 0.25 when 1 - 0.09 k < 0.25 -> k = 9
    CHECK(z == doctest::Approx(90.0).epsilon(1e-12));

    const TrajectoryBundle none =
        synthetic_bundle(101, 12.0, +[](double x) { return x; });
    CHECK(std::isnan(first_gathering_zeta(none)));
}
