#ifndef SPHD_CAP_HPP
#define SPHD_CAP_HPP

#include <cmath>
#include <string>
#include <utility>

#include "sphd/errors.hpp"
#include "sphd/gammafn.hpp"
#include "sphd/quadrature.hpp"

namespace sphd {

// Normalizing constant of the zonal reduction on S^d:
// Gamma((d+1)/2) / (sqrt(pi) Gamma(d/2)).
inline double zonal_norm_constant(int d) {
    if (d < 2) throw invalid_input("zonal_norm_constant: d >= 2 required");
    return std::exp(lgamma_ratio(0.5 * (d + 1), 0.5 * d)) / std::sqrt(M_PI);
}

// Normalized surface measure of a spherical cap of angular radius phi:
// sigma(S(x; phi)) = C_d * integral_{cos phi}^{1} (1-t^2)^(d/2-1) dt.
inline double cap_area(int d, double phi) {
    if (d < 2) throw invalid_input("cap_area: d >= 2 required");
    if (!(phi > 0.0 && phi <= M_PI))
        throw invalid_input("cap_area: phi must lie in (0, pi], got " + std::to_string(phi));
    double c = std::cos(phi);
    if (c >= 1.0) return 0.0;
    double raw = weighted_upper_integral([](double) { return 1.0; }, d, c, 1e-14);
    return zonal_norm_constant(d) * raw;
}

// Cap measure as a function of the cap height h = 1 - cos phi in [0, 2].
inline double cap_area_from_height(int d, double h) {
    if (!(h >= 0.0 && h <= 2.0)) throw invalid_input("cap_area_from_height: h in [0,2] required");
    if (h == 0.0) return 0.0;
    double raw = weighted_upper_integral([](double) { return 1.0; }, d, 1.0 - h, 1e-14);
    return zonal_norm_constant(d) * raw;
}

// alpha_N = arccos(1 - c1^2 / (8 N^(2/d))): the angular radius such that a
// cap of radius alpha_N around the antipode of any point of a well-separated
// set contains at most one point.
inline double alpha_N(double c1, long N, int d) {
    if (!(c1 > 0.0)) throw invalid_input("alpha_N: c1 > 0 required");
    if (N < 1) throw invalid_input("alpha_N: N >= 1 required");
    if (d < 2) throw invalid_input("alpha_N: d >= 2 required");
    double arg = 1.0 - c1 * c1 / (8.0 * std::pow(static_cast<double>(N), 2.0 / d));
    if (arg < -1.0 || arg > 1.0)
        throw invalid_input("alpha_N: arccos argument " + std::to_string(arg) +
                            " outside [-1, 1]; c1 too large for this N");
    return std::acos(arg);
}

// beta_N: the angular radius whose cap has normalized measure exactly 1/N.
// Solved by bisection on the cap height to 1e-14; returns (beta_N, b0)
// where the height is b0 * N^(-2/d).
inline std::pair<double, double> beta_N(int d, long N) {
    if (d < 2) throw invalid_input("beta_N: d >= 2 required");
    if (N < 2) throw invalid_input("beta_N: N >= 2 required");
    const double target = 1.0 / static_cast<double>(N);
    double lo = 0.0, hi = 2.0;   // cap height bracket: measure 0 .. 1
    // cap_area_from_height is continuous and strictly increasing, so the
    // bracket always holds; 60 bisections take the height interval below 2e-18.
    for (int iter = 0; iter < 200 && (hi - lo) > 1e-14; ++iter) {
        double mid = 0.5 * (lo + hi);
        if (cap_area_from_height(d, mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    double h = 0.5 * (lo + hi);
    double beta = std::acos(1.0 - h);
    double b0 = h * std::pow(static_cast<double>(N), 2.0 / d);
    return {beta, b0};
}

} // namespace sphd

#endif
