#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "sphd/gammafn.hpp"
#include "sphd/kernels.hpp"

using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// full partial sum of the stored expansion = head + tail at any split point
double full_sum(const sphd::KernelCoefficients& K, double x) {
    return sphd::kernel_head_eval(K, 0, x) + sphd::kernel_tail_eval(K, 0, x);
}

} // namespace

TEST_CASE("coefficient hypotheses are enforced", "[kernels]") {
    REQUIRE_THROWS_AS(sphd::riesz_coefficients(0.0, 4.0, 2, 10), sphd::invalid_input);
    REQUIRE_THROWS_AS(sphd::riesz_coefficients(2.0, 4.0, 1, 10), sphd::invalid_input);
    REQUIRE_THROWS_AS(sphd::riesz_coefficients(2.0, 4.0, 2, -1), sphd::invalid_input);
    REQUIRE_THROWS_WITH(sphd::riesz_coefficients(3.0, 2.0, 2, 10),
                        ContainsSubstring("lambda > s - 1"));
    REQUIRE_THROWS_WITH(sphd::log_coefficients(3.0, 2, 10),
                        ContainsSubstring("lambda > d + 1"));
    REQUIRE_THROWS_AS(sphd::log_coefficients(4.0, 3, 10), sphd::invalid_input);
    REQUIRE_NOTHROW(sphd::riesz_coefficients(2.0, 1.5, 2, 10));   // 1.5 > s - 1 = 1
}

TEST_CASE("kernel metadata", "[kernels]") {
    sphd::KernelCoefficients R = sphd::riesz_coefficients(3.0, 5.0, 2, 8);
    REQUIRE(R.basis_alpha() == 4.5);
    REQUIRE(R.term_degree(6) == 6);
    REQUIRE_THAT(R.distance_scale(), WithinRel(std::pow(2.0, -1.5), 1e-15));

    sphd::KernelCoefficients L = sphd::log_coefficients(5.0, 2, 8);
    REQUIRE(L.basis_alpha() == 3.5);
    REQUIRE(L.term_degree(6) == 7);   // coefficients attach to degree n+1
    REQUIRE(L.distance_scale() == 1.0);

    for (double c : R.coefficients) REQUIRE(c > 0.0);
    for (double c : L.coefficients) REQUIRE(c > 0.0);
}

TEST_CASE("riesz expansion converges to the closed kernel", "[kernels]") {
    // s=2, lambda=4, d=2: errors shrink through the doubling ladder and land
    // under the frozen threshold at nmax=2000
    for (double x : {0.0, 0.5, -0.5}) {
        const double exact = 1.0 / (1.0 - x);
        double prev = 1.0;
        for (int T : {125, 250, 500, 1000, 2000}) {
            sphd::KernelCoefficients K = sphd::riesz_coefficients(2.0, 4.0, 2, T);
            double err = std::abs(full_sum(K, x) - exact) / std::abs(exact);
            REQUIRE(err <= std::max(prev * 0.9, 1e-12));
            prev = err;
        }
        REQUIRE(prev < 2e-8);
    }
}

TEST_CASE("log expansion converges to the closed kernel", "[kernels]") {
    for (double x : {0.0, 0.5, -0.5, 0.9}) {
        const double exact = std::log(1.0 / (1.0 - x));
        double prev = 1.0;
        for (int T : {125, 250, 500, 1000, 2000}) {
            sphd::KernelCoefficients K = sphd::log_coefficients(5.0, 2, T);
            double err = std::abs(full_sum(K, x) - exact);
            // floor-guarded: once at roundoff the ladder stops shrinking
            REQUIRE(err <= std::max(prev * 0.75, 1e-12));
            prev = err;
        }
        REQUIRE(prev < 1e-11);
    }
}

TEST_CASE("log integration constant", "[kernels]") {
    sphd::KernelCoefficients K = sphd::log_coefficients(5.0, 2, 1000);
    REQUIRE_THAT(K.constant_term, WithinAbs(0.058623371036034, 1e-12));
    REQUIRE(K.constant_truncation_estimate > 0.0);
    REQUIRE(K.constant_truncation_estimate < 1e-10);
    // the constant pins the full series to zero at x = 0
    REQUIRE_THAT(full_sum(K, 0.0), WithinAbs(0.0, 1e-13));
}

TEST_CASE("head and tail partition the series", "[kernels]") {
    sphd::KernelCoefficients K = sphd::riesz_coefficients(2.0, 4.0, 2, 400);
    const double x = 0.3;
    double whole = full_sum(K, x);
    for (int t : {0, 1, 7, 40, 399, 400}) {
        double split = sphd::kernel_head_eval(K, t, x) + sphd::kernel_tail_eval(K, t, x);
        REQUIRE_THAT(split, WithinAbs(whole, 1e-12 * std::abs(whole)));
    }
    sphd::KernelCoefficients L = sphd::log_coefficients(5.0, 2, 400);
    double lwhole = full_sum(L, x);
    for (int t : {0, 3, 128, 400}) {
        double split = sphd::kernel_head_eval(L, t, x) + sphd::kernel_tail_eval(L, t, x);
        REQUIRE_THAT(split, WithinAbs(lwhole, 1e-12));
    }

    REQUIRE_THROWS_AS(sphd::kernel_head_eval(K, 401, x), sphd::invalid_input);
    REQUIRE_THROWS_AS(sphd::kernel_head_eval(K, -1, x), sphd::invalid_input);
    REQUIRE_THROWS_AS(sphd::kernel_tail_eval(K, 10, 1.0), sphd::invalid_input);
    REQUIRE(std::isfinite(sphd::kernel_head_eval(K, 10, 1.0)));   // head is a polynomial
}

TEST_CASE("truncation estimate is a usable yardstick", "[kernels]") {
    sphd::KernelCoefficients deep = sphd::riesz_coefficients(2.0, 4.0, 2, 2000);
    sphd::KernelCoefficients shallow = sphd::riesz_coefficients(2.0, 4.0, 2, 100);
    for (double x : {0.0, 0.5, -0.5}) {
        double est = sphd::tail_truncation_estimate(deep, x);
        REQUIRE(est >= 0.0);
        REQUIRE(est < 1e-5);
        // deeper truncation, smaller estimate
        REQUIRE(est < sphd::tail_truncation_estimate(shallow, x));
    }
    sphd::KernelCoefficients tiny = sphd::riesz_coefficients(2.0, 4.0, 2, 1);
    REQUIRE(std::isinf(sphd::tail_truncation_estimate(tiny, 0.5)));
}

TEST_CASE("head integral closed form", "[kernels]") {
    REQUIRE_THAT(sphd::head_integral(2.0, 4.0, 2, 0), WithinRel(4.0 / 7.0, 1e-12));
    REQUIRE_THAT(sphd::head_integral(2.0, 4.0, 2, 10), WithinRel(1.212750648045, 1e-9));
    REQUIRE_THAT(sphd::head_integral(2.0, 4.0, 2, 40), WithinRel(1.770774103561, 1e-9));
    REQUIRE_THAT(sphd::head_integral(3.0, 5.0, 3, 39), WithinRel(1.800698556303, 1e-9));
    // odd t adds nothing: degree-t term integrates to zero
    REQUIRE(sphd::head_integral(2.0, 4.0, 2, 11) == sphd::head_integral(2.0, 4.0, 2, 10));

    // against direct zonal quadrature of the distance-scaled head
    sphd::KernelCoefficients K = sphd::riesz_coefficients(2.0, 4.0, 2, 64);
    for (int t : {0, 5, 16, 33}) {
        double quad = sphd::zonal_integral(
            [&](double x) { return K.distance_scale() * sphd::kernel_head_eval(K, t, x); }, 2,
            1e-12);
        REQUIRE_THAT(quad, WithinRel(sphd::head_integral(2.0, 4.0, 2, t), 1e-11));
    }

    REQUIRE_THROWS_AS(sphd::head_integral(0.0, 4.0, 2, 10), sphd::invalid_input);
    REQUIRE_THROWS_AS(sphd::head_integral(2.0, 0.9, 2, 10), sphd::invalid_input);
    REQUIRE_THROWS_AS(sphd::head_integral(2.0, 0.6, 3, 10), sphd::invalid_input);
    REQUIRE_THROWS_AS(sphd::head_integral(2.0, 4.0, 2, -1), sphd::invalid_input);
}

TEST_CASE("head growth at the diagonal", "[kernels]") {
    // H_{s,t}(1) grows like t^s for s = 2: the ratio stays in a narrow band
    sphd::KernelCoefficients K = sphd::riesz_coefficients(2.0, 4.0, 2, 512);
    for (int t : {32, 64, 128, 256, 512}) {
        double h1 = K.distance_scale() * sphd::kernel_head_eval(K, t, 1.0);
        double ratio = h1 / (static_cast<double>(t) * t);
        REQUIRE(ratio > 0.05);
        REQUIRE(ratio < 0.12);
    }

    // s = d = 2: the head integral tracks (1/2) H_{[t/2]} within a bounded gap
    for (int t : {8, 32, 128, 512}) {
        double hsum = 0.0;
        for (int n = 1; n <= t / 2; ++n) hsum += 1.0 / n;
        REQUIRE(std::abs(sphd::head_integral(2.0, 4.0, 2, t) - 0.5 * hsum) < 0.1);
    }
}
