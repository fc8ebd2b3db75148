#include <doctest.h>

#include <cmath>

#include "wavetrace/launch.hpp"

using namespace wavetrace;

TEST_CASE("gaussian profile values") {
    const LaunchProfile p = LaunchProfile::gaussian(0.25);
    CHECK(p.amplitude(0.0) == 1.0);
    CHECK(p.amplitude(4.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    // G(0) = R''(0)/R(0) = -2 eps^2
    CHECK(p.shape_second_derivative(0.0) / p.shape(0.0) ==
          doctest::Approx(-0.125).epsilon(1e-14));
    CHECK_THROWS_AS(LaunchProfile::gaussian(1.5), ConfigError);
    CHECK_THROWS_AS(LaunchProfile::gaussian(0.0), ConfigError);
}

TEST_CASE("algebraic profile values") {
    const LaunchProfile p = LaunchProfile::algebraic(0.25, 1);
    CHECK(p.amplitude(0.0) == 1.0);
    CHECK(p.amplitude(4.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(p.shape_second_derivative(0.0) / p.shape(0.0) ==
          doctest::Approx(-0.125).epsilon(1e-14));
    CHECK_THROWS_AS(LaunchProfile::algebraic(0.25, 0), ConfigError);

    // analytic second derivative against central differences
    const double h = 1e-4;
    for (int N : {1, 2, 3})
        for (double xi : {-7.0, -2.0, 0.5, 3.0, 6.0}) {
            const LaunchProfile q = LaunchProfile::algebraic(0.25, N);
            const double num =
                (q.shape(xi + h) - 2.0 * q.shape(xi) + q.shape(xi - h)) / (h * h);
            CHECK(q.shape_second_derivative(xi) ==
                  doctest::Approx(num).epsilon(1e-6));
        }
}

TEST_CASE("two-beam superposition") {
    const LaunchProfile base = LaunchProfile::gaussian(0.25);
    const LaunchProfile coincident = LaunchProfile::two_beam(base, 0.0);
    for (double xi : {-3.0, 0.0, 1.2, 5.0})
        CHECK(coincident.shape(xi) == doctest::Approx(2.0 * base.shape(xi)).epsilon(1e-15));

    const LaunchProfile two = LaunchProfile::two_beam(base, 8.0);
    CHECK(two.shape(8.0) ==
          doctest::Approx(1.0 + std::exp(-16.0)).epsilon(1e-12));

    // symmetry by construction
    double xi = -23.7;
    for (int i = 0; i < 1000; ++i) {
        xi += 0.0474;
        CHECK(two.shape(xi) == two.shape(-xi));
    }

    CHECK_THROWS_AS(LaunchProfile::two_beam(two, 1.0), ConfigError);
}

TEST_CASE("fan sampling and launch conditions") {
    const LaunchProfile p = LaunchProfile::gaussian(0.25);
    const WavefrontFan fan = sample_fan(p, 5, -2.0, 2.0);
    REQUIRE(fan.size() == 5);
    for (int i = 0; i < 5; ++i) {
        const RayState& r = fan.rays[static_cast<std::size_t>(i)];
        CHECK(r.launch_label == doctest::Approx(-2.0 + i).epsilon(1e-15));
        CHECK(r.rho_x == 0.0);
        CHECK(r.rho_z == 1.0);
        CHECK(r.zeta == 0.0);
        CHECK(r.tau == 0.0);
        CHECK(r.amplitude == p.shape(r.launch_label));
    }
    fan.validate();

    CHECK_THROWS_AS(sample_fan(p, 4, -2.0, 2.0), ConfigError);
    CHECK_THROWS_AS(sample_fan(p, 5, 2.0, -2.0), ConfigError);
    // edge below the amplitude floor: exp(-eps^2 xi^2) < 1e-8 at xi = 30/eps... use wide domain
    CHECK_THROWS_AS(sample_fan(p, 11, -30.0, 30.0), ConfigError);
}

TEST_CASE("amplitude scale is carried outside the dynamics") {
    const LaunchProfile a = LaunchProfile::gaussian(0.25, 1.0);
    const LaunchProfile b = LaunchProfile::gaussian(0.25, 7.3);
    CHECK(b.amplitude(1.0) == doctest::Approx(7.3 * a.amplitude(1.0)).epsilon(1e-15));
    const WavefrontFan fa = sample_fan(a, 21, -8.0, 8.0);
    const WavefrontFan fb = sample_fan(b, 21, -8.0, 8.0);
    for (std::size_t i = 0; i < fa.size(); ++i)
        CHECK(fa.rays[i].amplitude == fb.rays[i].amplitude);  // bitwise
}

TEST_CASE("custom samples are peak-normalized and interpolated") {
    const LaunchProfile p =
        LaunchProfile::custom_samples({-2.0, 0.0, 2.0}, {1.0, 4.0, 1.0});
    CHECK(p.shape(0.0) == 1.0);
    CHECK(p.shape(-2.0) == 0.25);
    CHECK(p.shape(1.0) == doctest::Approx(0.625).epsilon(1e-15));
    CHECK(p.scale() == 4.0);
    CHECK_THROWS_AS(LaunchProfile::custom_samples({0.0, 0.0}, {1.0, 1.0}),
                    ConfigError);
}

TEST_CASE("flat top widens with N") {
    // xi interval where R > 0.99 grows with N (bisection on the analytic shape)
    auto flat_edge = [](const LaunchProfile& p) {
        double lo = 0.0, hi = 100.0;
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            (p.shape(mid) > 0.99 ? lo : hi) = mid;
        }
        return lo;
    };
    double prev = 0.0;
    for (int N : {1, 2, 3, 4}) {
        const double edge = flat_edge(LaunchProfile::algebraic(0.25, N));
        CHECK(edge > prev);
        prev = edge;
    }
}
