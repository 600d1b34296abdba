#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "sphd/asymptotics.hpp"
#include "sphd/energy.hpp"
#include "sphd/quadrature.hpp"

using Catch::Matchers::WithinAbs;

TEST_CASE("gauss-legendre exactness", "[quad]") {
    sphd::GaussLegendre rule(20);   // exact through degree 39
    for (int k = 0; k <= 39; ++k) {
        double got = rule.apply([k](double x) { return std::pow(x, k); }, -1.0, 1.0);
        double want = (k % 2 == 0) ? 2.0 / (k + 1) : 0.0;
        REQUIRE_THAT(got, WithinAbs(want, 1e-13));
    }
    // shifted interval: integral of x^2 over [0, 2] = 8/3
    REQUIRE_THAT(rule.apply([](double x) { return x * x; }, 0.0, 2.0),
                 WithinAbs(8.0 / 3.0, 1e-13));
}

TEST_CASE("adaptive integration", "[quad]") {
    REQUIRE_THAT(sphd::integrate_adaptive([](double x) { return 4.0 / (1.0 + x * x); }, 0.0,
                                          1.0, 1e-12),
                 WithinAbs(M_PI, 1e-11));
    // integrable endpoint singularity
    REQUIRE_THAT(sphd::integrate_adaptive([](double x) { return std::log(1.0 / x); }, 0.0, 1.0,
                                          1e-10),
                 WithinAbs(1.0, 1e-9));
    REQUIRE(sphd::integrate_adaptive([](double x) { return x; }, 2.0, 2.0) == 0.0);
    REQUIRE_THROWS_AS(sphd::integrate_adaptive([](double x) { return x; }, 0.0, 1.0, 0.0),
                      sphd::invalid_input);
    // non-integrable singularity: refinement stalls and reports its estimate
    try {
        sphd::integrate_adaptive([](double x) { return 1.0 / x; }, 0.0, 1.0, 1e-10);
        FAIL("expected quadrature_error");
    } catch (const sphd::quadrature_error& e) {
        REQUIRE(e.achieved_estimate > 0.0);
    }
}

TEST_CASE("weighted sphere integrals", "[quad]") {
    // (1-t^2)^(d/2-1) over [0,1]: d=2 gives 1, d=4 gives 2/3
    REQUIRE_THAT(sphd::weighted_upper_integral([](double) { return 1.0; }, 2, 0.0),
                 WithinAbs(1.0, 1e-12));
    REQUIRE_THAT(sphd::weighted_upper_integral([](double) { return 1.0; }, 4, 0.0),
                 WithinAbs(2.0 / 3.0, 1e-12));
    REQUIRE_THROWS_AS(sphd::weighted_upper_integral([](double) { return 1.0; }, 2, 1.0),
                      sphd::invalid_input);

    // zonal reduction integrates the constant to exactly the sphere measure
    for (int d = 2; d <= 6; ++d)
        REQUIRE_THAT(sphd::zonal_integral([](double) { return 1.0; }, d), WithinAbs(1.0, 1e-12));
    // second moment of a coordinate on S^2 is 1/3
    REQUIRE_THAT(sphd::zonal_integral([](double t) { return t * t; }, 2),
                 WithinAbs(1.0 / 3.0, 1e-12));
}

TEST_CASE("continuous log energy matches the closed form", "[quad]") {
    // V_log(S^d) carries an integrable log singularity at t = 1
    for (int d = 2; d <= 6; ++d)
        REQUIRE_THAT(sphd::continuous_log_energy(d),
                     WithinAbs(sphd::log_energy_constant(d), 1e-10));
    REQUIRE_THROWS_AS(sphd::continuous_log_energy(1), sphd::invalid_input);
}
