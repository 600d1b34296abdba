#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <string>
#include <vector>

#include "sphd/asymptotics.hpp"

using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("continuous log energy constants", "[asymptotics]") {
    REQUIRE_THAT(sphd::log_energy_constant(2), WithinAbs(0.5 - std::log(2.0), 1e-16));
    REQUIRE(sphd::log_energy_constant(3) == -0.25);
    REQUIRE_THAT(sphd::log_energy_constant(4), WithinAbs(-0.2764805138932787, 1e-15));
    REQUIRE_THAT(sphd::log_energy_constant(5), WithinAbs(-7.0 / 24.0, 1e-15));
    REQUIRE_THAT(sphd::log_energy_constant(6), WithinAbs(-0.3014805138932786, 1e-15));
    REQUIRE_THROWS_AS(sphd::log_energy_constant(1), sphd::invalid_input);
}

TEST_CASE("log energy prediction", "[asymptotics]") {
    sphd::AsymptoticPrediction p = sphd::predict_log_energy(2, 1000);
    REQUIRE_THAT(p.leading_term, WithinRel(-193147.1805599453, 1e-12));
    REQUIRE_THAT(p.second_term, WithinRel(-3453.8776394910683, 1e-12));
    REQUIRE(p.predicted == p.leading_term + p.second_term);
    REQUIRE(p.remainder_order == "O(N)");
    REQUIRE_FALSE(p.bound_only);
    REQUIRE(p.kind == sphd::EnergyKind::log);

    // N = 1: no pair term, the prediction degenerates to the constant
    sphd::AsymptoticPrediction q = sphd::predict_log_energy(3, 1);
    REQUIRE(q.leading_term == sphd::log_energy_constant(3));
    REQUIRE(q.second_term == 0.0);

    REQUIRE_THROWS_AS(sphd::predict_log_energy(1, 10), sphd::invalid_input);
    REQUIRE_THROWS_AS(sphd::predict_log_energy(2, 0), sphd::invalid_input);
}

TEST_CASE("riesz energy prediction at s = d", "[asymptotics]") {
    // d=2, t=4: coefficient (1/(2 sqrt(pi))) * Gamma(3/2)/Gamma(1) * H_2 = 3/8
    sphd::AsymptoticPrediction p = sphd::predict_riesz_energy(2, 2.0, 100, 4);
    REQUIRE_THAT(p.leading_term, WithinRel(0.375 * 100.0 * 100.0, 1e-15));
    REQUIRE(p.second_term == 0.0);
    REQUIRE(p.t == 4);
    REQUIRE_FALSE(p.bound_only);
    REQUIRE(p.remainder_order == "O(N^2)");

    REQUIRE_THROWS_AS(sphd::predict_riesz_energy(2, 2.0, 100), sphd::invalid_input);     // t missing
    REQUIRE_THROWS_AS(sphd::predict_riesz_energy(2, 2.0, 100, 1), sphd::invalid_input);  // t < 2
    REQUIRE_THROWS_AS(sphd::predict_riesz_energy(2, 1.0, 100, 4), sphd::invalid_input);  // s < d
}

TEST_CASE("riesz energy prediction at s > d is an order bound", "[asymptotics]") {
    sphd::AsymptoticPrediction p = sphd::predict_riesz_energy(2, 3.0, 100);
    REQUIRE(p.bound_only);
    REQUIRE(p.leading_term == std::pow(100.0, 2.5));
    REQUIRE(p.second_term == 0.0);
    REQUIRE(p.remainder_order == "-");
}

TEST_CASE("limit constants", "[asymptotics]") {
    // d = 2 lands on 1/8 to the bit
    REQUIRE(sphd::limit_constant_s_equals_d(2) == 0.125);
    REQUIRE_THAT(sphd::limit_constant_s_equals_d(3), WithinAbs(1.0 / (3.0 * M_PI), 1e-15));
    REQUIRE_THAT(sphd::limit_constant_s_equals_d(4), WithinAbs(0.09375, 1e-15));
    // the recurrence form and the lgamma reference form agree to roundoff
    for (int d = 2; d <= 8; ++d)
        REQUIRE_THAT(sphd::limit_constant_s_equals_d(d),
                     WithinAbs(sphd::limit_constant_reference_form(d), 1e-15));
    REQUIRE_THROWS_AS(sphd::limit_constant_s_equals_d(1), sphd::invalid_input);
}

TEST_CASE("alternative d=2 coefficient bookkeeping", "[asymptotics]") {
    REQUIRE(sphd::shifted_harmonic_d2_coefficient(0) == 0.25);
    REQUIRE_THAT(sphd::shifted_harmonic_d2_coefficient(3), WithinRel(25.0 / 48.0, 1e-15));
    // the two N^2 coefficients differ by (log 2)/4 in the limit
    double hsum = 0.0;
    for (int n = 1; n <= 500; ++n) hsum += 1.0 / n;
    double gap = sphd::shifted_harmonic_d2_coefficient(1000) - 0.25 * hsum;
    REQUIRE_THAT(gap, WithinAbs(0.25 * std::log(2.0), 1e-3));
    REQUIRE_THROWS_AS(sphd::shifted_harmonic_d2_coefficient(-1), sphd::invalid_input);
}

TEST_CASE("residual exponent fitting", "[asymptotics]") {
    auto synth = [](double coef, double power) {
        std::vector<sphd::SweepRecord> recs;
        for (std::size_t N : {10u, 30u, 100u, 300u, 1000u}) {
            sphd::SweepRecord r;
            r.N = N;
            r.residual = coef * std::pow(static_cast<double>(N), power);
            recs.push_back(r);
        }
        return recs;
    };

    sphd::FitResult lin = sphd::fit_residual_exponent(synth(7.0, 1.0));
    REQUIRE_THAT(lin.exponent, WithinAbs(1.0, 1e-12));
    REQUIRE_THAT(lin.intercept, WithinAbs(std::log(7.0), 1e-11));
    REQUIRE_THAT(lin.r_squared, WithinAbs(1.0, 1e-12));
    REQUIRE(lin.count == 5);

    sphd::FitResult quad = sphd::fit_residual_exponent(synth(3.0, 2.0));
    REQUIRE_THAT(quad.exponent, WithinAbs(2.0, 1e-12));

    // negative residuals fit through |residual|
    sphd::FitResult neg = sphd::fit_residual_exponent(synth(-3.0, 2.0));
    REQUIRE_THAT(neg.exponent, WithinAbs(2.0, 1e-12));

    // too few usable records
    auto few = synth(7.0, 1.0);
    few.resize(3);
    REQUIRE_THROWS_AS(sphd::fit_residual_exponent(few), sphd::invalid_input);

    // residuals at the numerical floor carry no information and are dropped
    auto floor_recs = synth(7.0, 1.0);
    for (auto& r : floor_recs) r.residual = 1e-30;
    REQUIRE_THROWS_AS(sphd::fit_residual_exponent(floor_recs), sphd::invalid_input);

    // failed records are skipped
    auto mixed = synth(7.0, 1.0);
    mixed[0].ok = false;
    sphd::FitResult m = sphd::fit_residual_exponent(mixed);
    REQUIRE(m.count == 4);

    // all N equal: degenerate
    auto flat = synth(7.0, 1.0);
    for (auto& r : flat) r.N = 50;
    for (auto& r : flat) r.residual = 350.0;
    REQUIRE_THROWS_AS(sphd::fit_residual_exponent(flat), sphd::invalid_input);
}

TEST_CASE("sweep over generated sources", "[asymptotics]") {
    sphd::SweepOptions opt;
    opt.source = sphd::SweepSource::fibonacci;
    opt.N_values = {20, 40};
    opt.kinds = {{sphd::EnergyKind::log, 0.0},
                 {sphd::EnergyKind::riesz, 2.0},
                 {sphd::EnergyKind::riesz, 3.0}};
    std::vector<sphd::SweepRecord> recs = sphd::sweep(opt);
    REQUIRE(recs.size() == 6);

    // log and s > d predictions need no design degree
    for (std::size_t i : {0u, 2u, 3u, 5u}) {
        REQUIRE(recs[i].ok);
        REQUIRE(recs[i].error.empty());
        REQUIRE(recs[i].min_separation > 0.0);
        REQUIRE_THAT(recs[i].residual,
                     WithinAbs(recs[i].measured - (recs[i].leading + recs[i].second), 1e-9));
    }
    REQUIRE(recs[0].source == "fibonacci(N=20)");
    REQUIRE(recs[3].source == "fibonacci(N=40)");
    REQUIRE(recs[0].kind == sphd::EnergyKind::log);
    REQUIRE(recs[0].N == 20);
    REQUIRE(recs[2].s == 3.0);
    REQUIRE(recs[2].leading == std::pow(20.0, 2.5));

    // s = d wants a design degree; generated sources have none, so the
    // riesz:2 records come back marked instead of aborting the sweep
    for (std::size_t i : {1u, 4u}) {
        REQUIRE_FALSE(recs[i].ok);
        REQUIRE(recs[i].kind == sphd::EnergyKind::riesz);
        REQUIRE(recs[i].s == 2.0);
        REQUIRE_THAT(recs[i].error, ContainsSubstring("t >= 2"));
    }

    // s < d is rejected by the prediction, recorded per record
    sphd::SweepOptions rnd;
    rnd.source = sphd::SweepSource::random;
    rnd.d = 3;
    rnd.N_values = {30};
    rnd.kinds = {{sphd::EnergyKind::riesz, 2.0}};
    std::vector<sphd::SweepRecord> rrec = sphd::sweep(rnd);
    REQUIRE(rrec.size() == 1);
    REQUIRE_FALSE(rrec[0].ok);
    REQUIRE_THAT(rrec[0].error, ContainsSubstring("s >= d"));
    REQUIRE(rrec[0].source == "random(N=30)");
}

TEST_CASE("sweep failure modes", "[asymptotics]") {
    sphd::SweepOptions empty_kinds;
    empty_kinds.source = sphd::SweepSource::fibonacci;
    empty_kinds.N_values = {20};
    REQUIRE_THROWS_AS(sphd::sweep(empty_kinds), sphd::invalid_input);

    sphd::SweepOptions empty_range;
    empty_range.source = sphd::SweepSource::designs;
    empty_range.kinds = {{sphd::EnergyKind::log, 0.0}};
    REQUIRE_THROWS_WITH(sphd::sweep(empty_range), ContainsSubstring("empty t range"));

    sphd::SweepOptions no_files;
    no_files.source = sphd::SweepSource::files;
    no_files.kinds = {{sphd::EnergyKind::log, 0.0}};
    REQUIRE_THROWS_AS(sphd::sweep(no_files), sphd::invalid_input);

    // a missing file poisons its own records only
    sphd::SweepOptions files;
    files.source = sphd::SweepSource::files;
    files.files = {"/nonexistent/points.txt"};
    files.kinds = {{sphd::EnergyKind::log, 0.0}, {sphd::EnergyKind::riesz, 2.0}};
    std::vector<sphd::SweepRecord> recs = sphd::sweep(files);
    REQUIRE(recs.size() == 2);
    for (const auto& r : recs) {
        REQUIRE_FALSE(r.ok);
        REQUIRE_THAT(r.error, ContainsSubstring("cannot open"));
        REQUIRE(r.source == "/nonexistent/points.txt");
    }
}

TEST_CASE("sweep over constructed designs", "[asymptotics]") {
    sphd::SweepOptions opt;
    opt.source = sphd::SweepSource::designs;
    opt.d = 2;
    opt.t_values = {1, 2};
    opt.kinds = {{sphd::EnergyKind::log, 0.0}};
    opt.construct.polish_energy = false;
    std::vector<sphd::SweepRecord> recs = sphd::sweep(opt);
    REQUIRE(recs.size() == 2);
    REQUIRE(recs[0].t == 1);
    REQUIRE(recs[0].N == 4);    // default (t+1)^2
    REQUIRE(recs[1].N == 9);
    for (const auto& r : recs) {
        REQUIRE(r.ok);
        REQUIRE_THAT(r.source, ContainsSubstring("design(t="));
        REQUIRE(std::abs(r.residual) < 10.0);   // designs track the prediction closely
    }
}
