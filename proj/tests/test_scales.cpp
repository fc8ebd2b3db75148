#include <doctest.h>

#include <cmath>

#include "wavetrace/medium.hpp"
#include "wavetrace/scales.hpp"

using namespace wavetrace;

TEST_CASE("ratio definitions of the dimensionless variables") {
    const PhysicalScales s = optical_scales(1.0e-6, 3.0e8, 4.0e-6);
    const double lambda0 = s.wavelength_lambda0;

    // x = lambda0, k = k0 along x, t = 0
    RayState r = to_dimensionless(s, FrontEnd::optical, {lambda0, 0.0},
                                  {s.wavenumber_k0, 0.0}, 0.0);
    CHECK(r.xi == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.rho_x == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.tau == 0.0);

    // launch condition: momentum p0 along z from the origin
    const PhysicalScales q = quantum_scales(9.1e-28, 1.6e-9, 1.0546e-27, 4.0e-4);
    RayState l = to_dimensionless(q, FrontEnd::quantum, {0.0, 0.0},
                                  {0.0, q.reference_momentum_p0}, 0.0);
    CHECK(l.xi == 0.0);
    CHECK(l.zeta == 0.0);
    CHECK(l.rho_x == 0.0);
    CHECK(l.rho_z == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(l.tau == 0.0);
}

TEST_CASE("physical -> dimensionless -> physical round trip") {
    const PhysicalScales s = quantum_scales(2.5, 0.8, 1.3, 40.0);
    const PhysicalState in{{3.7, 12.1}, {0.2 * s.reference_momentum_p0,
                                         0.97 * s.reference_momentum_p0}, 5.5};
    const RayState mid =
        to_dimensionless(s, FrontEnd::quantum, in.position, in.momentum, in.time);
    const PhysicalState back = from_dimensionless(s, FrontEnd::quantum, mid);
    CHECK(back.position.x == doctest::Approx(in.position.x).epsilon(1e-12));
    CHECK(back.position.y == doctest::Approx(in.position.y).epsilon(1e-12));
    CHECK(back.momentum.x == doctest::Approx(in.momentum.x).epsilon(1e-12));
    CHECK(back.momentum.y == doctest::Approx(in.momentum.y).epsilon(1e-12));
    CHECK(back.time == doctest::Approx(in.time).epsilon(1e-12));
}

TEST_CASE("quantum and optical front-ends agree on shared physical ratios") {
    // Build a quantum beam, then an optical beam with the matching lambda0,
    // and map one shared test vector through both.
    const PhysicalScales q = quantum_scales(2.0, 5.0, 0.7, 30.0);
    const PhysicalScales o =
        optical_scales(q.wavelength_lambda0, 3.0e8, q.beam_half_width_w0);

    const Vec2 pos{1.25 * q.wavelength_lambda0, -0.5 * q.wavelength_lambda0};
    const Vec2 mom_q{0.3 * q.reference_momentum_p0, 0.9 * q.reference_momentum_p0};
    const Vec2 mom_o{0.3 * o.wavenumber_k0, 0.9 * o.wavenumber_k0};
    const double t_q = 2.0 * q.wavelength_lambda0 /
                       (q.reference_momentum_p0 / q.particle_mass_m);
    const double t_o = 2.0 * o.wavelength_lambda0 / o.light_speed_c;

    const RayState a = to_dimensionless(q, FrontEnd::quantum, pos, mom_q, t_q);
    const RayState b = to_dimensionless(o, FrontEnd::optical, pos, mom_o, t_o);
    CHECK(a.xi == doctest::Approx(b.xi).epsilon(1e-13));
    CHECK(a.zeta == doctest::Approx(b.zeta).epsilon(1e-13));
    CHECK(a.rho_x == doctest::Approx(b.rho_x).epsilon(1e-13));
    CHECK(a.rho_z == doctest::Approx(b.rho_z).epsilon(1e-13));
    CHECK(a.tau == doctest::Approx(b.tau).epsilon(1e-13));
}

TEST_CASE("ray and phase velocity accessors satisfy v_ray * v_ph = c^2") {
    const PhysicalScales s = optical_scales(2.0e-6, 2.998e8, 1.0e-5);
    for (double n : {1.0, 1.33, 1.7}) {
        const double k = n * s.wavenumber_k0;  // eikonal-satisfying wavevector
        const double prod = s.ray_velocity(k) * s.phase_velocity(n);
        CHECK(prod == doctest::Approx(s.light_speed_c * s.light_speed_c)
                          .epsilon(1e-12));
    }
}

TEST_CASE("scale validation") {
    CHECK_THROWS_AS(optical_scales(-1.0, 3.0e8, 1.0), DomainError);
    CHECK_THROWS_AS(optical_scales(2.0, 3.0e8, 1.0), DomainError);  // eps > 1
    const PhysicalScales s = optical_scales(1.0, 1.0, 4.0);
    CHECK_THROWS_AS(
        to_dimensionless(s, FrontEnd::optical, {std::nan(""), 0.0}, {0.0, 1.0}, 0.0),
        DomainError);
}
