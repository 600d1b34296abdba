#ifndef SPHD_QUADRATURE_HPP
#define SPHD_QUADRATURE_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "sphd/errors.hpp"
#include "sphd/summation.hpp"

namespace sphd {

// Gauss-Legendre rule on [-1,1], nodes found by Newton iteration on the
// Legendre recurrence. Exact for polynomials of degree <= 2n-1.
class GaussLegendre {
public:
    explicit GaussLegendre(int n) : nodes_(n), weights_(n) {
        for (int k = 0; k < n; ++k) {
            // Chebyshev-like initial guess, then Newton.
            double x = std::cos(M_PI * (k + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int iter = 0; iter < 100; ++iter) {
                double p0 = 1.0, p1 = x;
                for (int m = 2; m <= n; ++m) {
                    double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            nodes_[k] = x;
            weights_[k] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
    }

    double apply(const std::function<double(double)>& f, double a, double b) const {
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        KahanSum acc;
        for (std::size_t k = 0; k < nodes_.size(); ++k)
            acc.add(weights_[k] * f(mid + half * nodes_[k]));
        return half * acc.total();
    }

private:
    std::vector<double> nodes_, weights_;
};

// Globally adaptive bisection on a fixed Gauss-Legendre panel: the segment
// with the largest local estimate |two half-panels - one whole panel| is
// refined until the summed estimate meets abs_tol. (A per-segment budget
// that halves on each split chases integrable endpoint singularities
// forever -- error and budget shrink at the same rate -- and ends up
// evaluating the integrand at rounding distance from the endpoint. The
// global queue terminates because panel errors decay geometrically.)
// Throws quadrature_error carrying the achieved estimate when refinement
// stalls anyway.
inline double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                 double abs_tol = 1e-12, int max_depth = 60) {
    if (!(abs_tol > 0.0)) throw invalid_input("integrate_adaptive: tolerance must be positive");
    if (a == b) return 0.0;
    if (a > b) return -integrate_adaptive(f, b, a, abs_tol, max_depth);
    static const GaussLegendre rule(20);

    struct Seg {
        double a, b, value, err;
        int depth;
    };
    auto measure = [&](double lo, double hi, int depth) {
        double whole = rule.apply(f, lo, hi);
        double m = 0.5 * (lo + hi);
        double halves = rule.apply(f, lo, m) + rule.apply(f, m, hi);
        double err = std::abs(halves - whole);
        if (!std::isfinite(halves))
            throw quadrature_error("integrate_adaptive: non-finite integrand value", err);
        return Seg{lo, hi, halves, err, depth};
    };

    std::vector<Seg> segs{measure(a, b, 0)};
    while (true) {
        double total_err = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < segs.size(); ++i) {
            total_err += segs[i].err;
            if (segs[i].err > segs[worst].err) worst = i;
        }
        if (total_err <= abs_tol) break;
        Seg w = segs[worst];
        double m = 0.5 * (w.a + w.b);
        if (w.depth >= max_depth || m <= w.a || m >= w.b)
            throw quadrature_error("integrate_adaptive: refinement stalled (singularity too "
                                   "strong or tolerance too tight)", total_err);
        segs[worst] = measure(w.a, m, w.depth + 1);
        segs.push_back(measure(m, w.b, w.depth + 1));
    }
    KahanSum total;
    for (const Seg& s : segs) total.add(s.value);
    return total.total();
}

// integral_{lo}^{1} g(t) (1-t^2)^(d/2-1) dt with the substitution
// t = 1 - u^2, which absorbs the (1-t)^(d/2-1) endpoint factor into the
// smooth u^(d-1) and tames integrable singularities of g at t -> 1:
//    = integral_0^{sqrt(1-lo)} 2 g(1-u^2) u^(d-1) (2-u^2)^(d/2-1) du.
inline double weighted_upper_integral(const std::function<double(double)>& g, int d, double lo,
                                      double abs_tol = 1e-13) {
    if (d < 2) throw invalid_input("weighted_upper_integral: d >= 2 required");
    if (!(lo >= -1.0 && lo < 1.0))
        throw invalid_input("weighted_upper_integral: lower limit must lie in [-1, 1)");
    double umax = std::sqrt(1.0 - lo);
    auto h = [&](double u) {
        // rounding guards: u*u can overshoot 2 by an ulp at the far end, and
        // 1 - u*u rounds to exactly 1 once u*u underflows past machine eps;
        // both sit under a vanishing weight but would poison g.
        double w = 2.0 * std::pow(u, d - 1) * std::pow(std::max(0.0, 2.0 - u * u), 0.5 * d - 1.0);
        double t = 1.0 - u * u;
        if (t < -1.0) t = -1.0;
        if (t >= 1.0 && u > 0.0) t = std::nextafter(1.0, 0.0);
        return w * g(t);
    };
    return integrate_adaptive(h, 0.0, umax, abs_tol);
}

// integral_{-1}^{1} g(t) (1-t^2)^(d/2-1) dt, split at 0 with mirrored
// substitutions t = 1-u^2 and t = -1+v^2 so both endpoints are tamed.
inline double weighted_full_integral(const std::function<double(double)>& g, int d,
                                     double abs_tol = 1e-13) {
    double upper = weighted_upper_integral(g, d, 0.0, 0.5 * abs_tol);
    auto gm = [&](double t) { return g(-t); };
    double lower = weighted_upper_integral(gm, d, 0.0, 0.5 * abs_tol);
    return upper + lower;
}

} // namespace sphd

#endif
