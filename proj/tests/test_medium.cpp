#include <doctest.h>

#include <cstdint>

#include "wavetrace/medium.hpp"

using namespace wavetrace;

TEST_CASE("optical <-> quantum bridge algebra") {
    CHECK(n_squared_to_potential(1.0) == 0.0);
    CHECK(potential_to_n_squared(0.36) == doctest::Approx(0.64).epsilon(1e-15));

    // round trip on pseudo-random fields (deterministic LCG); 1 - (1 - x) is
    // not exact in floating point, so allow an ulp-scale tolerance
    std::uint64_t state = 88172645463325252ull;
    for (int i = 0; i < 100; ++i) {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        const double n2 = 0.01 + (state >> 11) * (2.0 / 9007199254740992.0);
        CHECK(potential_to_n_squared(n_squared_to_potential(n2)) ==
              doctest::Approx(n2).epsilon(1e-15));
    }
}

TEST_CASE("media built from equivalent fields sample identically") {
    auto n2 = [](double xi, double zeta) { return 1.0 - 0.1 * xi * xi - 0.05 * zeta; };
    const Medium opt = Medium::refractive(n2);
    const Medium qm = Medium::potential(
        [n2](double xi, double zeta) { return n_squared_to_potential(n2(xi, zeta)); });
    for (double xi : {-1.0, 0.0, 0.5, 2.0})
        for (double zeta : {0.0, 1.0, 3.0}) {
            CHECK(opt.potential_over_E(xi, zeta) == qm.potential_over_E(xi, zeta));
            CHECK(opt.n_squared(xi, zeta) == qm.n_squared(xi, zeta));
        }
}

TEST_CASE("vacuum medium") {
    const Medium m = Medium::vacuum();
    CHECK(m.potential_over_E(3.0, -2.0) == 0.0);
    CHECK(m.n_squared(3.0, -2.0) == 1.0);
    CHECK(m.force(1.0, 1.0).x == 0.0);
    CHECK(m.force(1.0, 1.0).y == 0.0);
}

TEST_CASE("forbidden-region validation at sample time") {
    const Medium m = Medium::potential([](double xi, double) { return xi; });
    CHECK(m.potential_over_E(0.5, 0.0) == 0.5);
    CHECK_THROWS_AS(m.potential_over_E(1.5, 0.0), DomainError);

    const Medium r = Medium::refractive([](double, double) { return -0.5; });
    CHECK_THROWS_AS(r.potential_over_E(0.0, 0.0), DomainError);
}

TEST_CASE("uniform force helper") {
    const Medium m = Medium::uniform_force(0.25);
    const Vec2 f = m.force(1.7, -4.0);
    CHECK(f.x == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(f.y == 0.0);
}

TEST_CASE("finite-difference gradient fallback matches analytic one") {
    auto field = [](double xi, double zeta) { return 0.3 * xi * xi + 0.1 * zeta; };
    const Medium fd = Medium::potential(field);
    const Medium an = Medium::potential(
        field, [](double xi, double) { return Vec2{0.6 * xi, 0.1}; });
    const Vec2 a = fd.force(0.4, 0.2);
    const Vec2 b = an.force(0.4, 0.2);
    CHECK(a.x == doctest::Approx(b.x).epsilon(1e-8));
    CHECK(a.y == doctest::Approx(b.y).epsilon(1e-8));
}
