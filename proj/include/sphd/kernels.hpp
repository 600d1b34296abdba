#ifndef SPHD_KERNELS_HPP
#define SPHD_KERNELS_HPP

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "sphd/errors.hpp"
#include "sphd/gammafn.hpp"
#include "sphd/jacobi.hpp"
#include "sphd/summation.hpp"

namespace sphd {

enum class KernelKind { riesz, log };

// Jacobi-basis expansion of a zonal kernel.
//
// riesz: (1-x)^(-s/2) = sum_(n>=0) a_n P_n^(lam-1/2, lam-1/2)(x),
//   a_n = 2^(2 lam - s/2) pi^(-1/2) Gamma(lam) Gamma(lam - s/2 + 1/2)
//         (n+lam) (s/2)_n (2 lam)_n / (Gamma(n + 2 lam - s/2 + 1) (lam+1/2)_n).
//
// log: log 1/(1-x) = constant_term + sum_(n>=0) b_n P_(n+1)^(lam-3/2, lam-3/2)(x),
//   b_n = 2^(2 lam) pi^(-1/2) Gamma(lam) Gamma(lam-1/2)
//         (n+lam) n! (2 lam)_n / ((n+2 lam-1) Gamma(n+2 lam) (lam+1/2)_n),
//   constant_term = - sum_(n=0)^(nmax) b_n P_(n+1)(0), the integration
//   constant that pins the series to 0 at x = 0. coefficients[n] stores the
//   weight of the degree-(n+1) basis member.
//
// Both coefficient families are positive and are assembled in log space;
// plain Gamma products overflow near n ~ 170.
struct KernelCoefficients {
    KernelKind kind = KernelKind::riesz;
    double s = 0.0;           // riesz only
    double lambda = 0.0;
    int d = 2;
    int nmax = 0;
    std::vector<double> coefficients;
    double constant_term = 0.0;                  // log only
    double constant_truncation_estimate = 0.0;   // log only

    // Basis parameter alpha = beta of the attached Jacobi family.
    double basis_alpha() const {
        return kind == KernelKind::riesz ? lambda - 0.5 : lambda - 1.5;
    }
    // Polynomial degree of coefficients[n].
    int term_degree(int n) const { return kind == KernelKind::riesz ? n : n + 1; }
    // Scale factor from this raw (1-x) normalization to the distance kernel
    // in |x - y| = sqrt(2(1-x)): riesz carries 2^(-s/2); the log split needs none.
    double distance_scale() const {
        return kind == KernelKind::riesz ? std::pow(2.0, -0.5 * s) : 1.0;
    }
};

inline KernelCoefficients riesz_coefficients(double s, double lambda, int d, int nmax) {
    if (!(s > 0.0)) throw invalid_input("riesz_coefficients: s > 0 required");
    if (d < 2) throw invalid_input("riesz_coefficients: d >= 2 required");
    if (nmax < 0) throw invalid_input("riesz_coefficients: nmax >= 0 required");
    if (!(lambda > s - 1.0))
        throw invalid_input("riesz_coefficients: expansion hypothesis lambda > s - 1 violated "
                            "(lambda=" + std::to_string(lambda) + ", s=" + std::to_string(s) + ")");
    if (!(lambda > 0.0)) throw invalid_input("riesz_coefficients: lambda > 0 required");

    KernelCoefficients K;
    K.kind = KernelKind::riesz;
    K.s = s;
    K.lambda = lambda;
    K.d = d;
    K.nmax = nmax;
    K.coefficients.resize(nmax + 1);
    const double logC = (2.0 * lambda - 0.5 * s) * std::log(2.0) - 0.5 * std::log(M_PI) +
                        std::lgamma(lambda) + std::lgamma(lambda - 0.5 * s + 0.5);
    for (int n = 0; n <= nmax; ++n) {
        double lg = logC + std::log(n + lambda);
        lg += pochhammer_log(0.5 * s, n);
        lg += pochhammer_log(2.0 * lambda, n);
        lg -= std::lgamma(n + 2.0 * lambda - 0.5 * s + 1.0);
        lg -= pochhammer_log(lambda + 0.5, n);
        K.coefficients[n] = std::exp(lg);
    }
    return K;
}

inline KernelCoefficients log_coefficients(double lambda, int d, int nmax) {
    if (d < 2) throw invalid_input("log_coefficients: d >= 2 required");
    if (nmax < 0) throw invalid_input("log_coefficients: nmax >= 0 required");
    if (!(lambda > d + 1.0))
        throw invalid_input("log_coefficients: expansion hypothesis lambda > d + 1 violated "
                            "(lambda=" + std::to_string(lambda) + ", d=" + std::to_string(d) + ")");

    KernelCoefficients K;
    K.kind = KernelKind::log;
    K.lambda = lambda;
    K.d = d;
    K.nmax = nmax;
    K.coefficients.resize(nmax + 1);
    const double logC = 2.0 * lambda * std::log(2.0) - 0.5 * std::log(M_PI) +
                        std::lgamma(lambda) + std::lgamma(lambda - 0.5);
    for (int n = 0; n <= nmax; ++n) {
        double lg = logC + std::log(n + lambda);
        lg += std::lgamma(n + 1.0);
        lg += pochhammer_log(2.0 * lambda, n);
        lg -= std::log(n + 2.0 * lambda - 1.0);
        lg -= std::lgamma(n + 2.0 * lambda);
        lg -= pochhammer_log(lambda + 0.5, n);
        K.coefficients[n] = std::exp(lg);
    }
    // Integration constant: the series must vanish at x = 0. Degrees n+1
    // run over 0..nmax+1; odd-degree symmetric Jacobi values at 0 vanish
    // and the surviving terms alternate in sign with decreasing magnitude,
    // so the first omitted term bounds the truncation error.
    std::vector<double> at_zero;
    JacobiRecurrence rec(nmax + 1, JacobiParams(lambda - 1.5, lambda - 1.5));
    rec.batch(0.0, at_zero);
    KahanSum c;
    double last_nonzero = 0.0;
    for (int n = 0; n <= nmax; ++n) {
        double term = K.coefficients[n] * at_zero[n + 1];
        c.add(-term);
        if (term != 0.0) last_nonzero = std::abs(term);
    }
    K.constant_term = c.total();
    K.constant_truncation_estimate = last_nonzero;
    return K;
}

// Partial sum of the expansion terms of polynomial degree <= t, in the raw
// (1-x) normalization. For the log kind this includes the constant term.
inline double kernel_head_eval(const KernelCoefficients& K, int t, double x) {
    if (t < 0 || t > K.nmax)
        throw invalid_input("kernel_head_eval: need 0 <= t <= nmax");
    check_eval_point(x);
    std::vector<double> P;
    JacobiRecurrence rec(K.term_degree(K.nmax), JacobiParams(K.basis_alpha(), K.basis_alpha()));
    rec.batch(x, P);
    KahanSum acc;
    if (K.kind == KernelKind::riesz) {
        for (int n = 0; n <= t; ++n) acc.add(K.coefficients[n] * P[n]);
    } else {
        acc.add(K.constant_term);
        for (int n = 0; n + 1 <= t; ++n) acc.add(K.coefficients[n] * P[n + 1]);
    }
    return acc.total();
}

// The complementary truncated tail: degrees t+1 .. (largest stored). For
// interior |x| < 1, head + tail reproduces the kernel up to the nmax
// truncation, whose size tail_truncation_estimate reports.
inline double kernel_tail_eval(const KernelCoefficients& K, int t, double x) {
    if (t < 0 || t > K.nmax)
        throw invalid_input("kernel_tail_eval: need 0 <= t <= nmax");
    if (!(x > -1.0 && x < 1.0))
        throw invalid_input("kernel_tail_eval: tail series requires |x| < 1");
    std::vector<double> P;
    JacobiRecurrence rec(K.term_degree(K.nmax), JacobiParams(K.basis_alpha(), K.basis_alpha()));
    rec.batch(x, P);
    KahanSum acc;
    if (K.kind == KernelKind::riesz) {
        for (int n = t + 1; n <= K.nmax; ++n) acc.add(K.coefficients[n] * P[n]);
    } else {
        for (int n = t; n <= K.nmax; ++n) acc.add(K.coefficients[n] * P[n + 1]);
    }
    return acc.total();
}

// Geometric remainder estimate for the degrees beyond nmax at a given x,
// from the ratio of the last two stored terms.
inline double tail_truncation_estimate(const KernelCoefficients& K, double x) {
    if (K.nmax < 2) return std::numeric_limits<double>::infinity();
    check_eval_point(x);
    std::vector<double> P;
    JacobiRecurrence rec(K.term_degree(K.nmax), JacobiParams(K.basis_alpha(), K.basis_alpha()));
    rec.batch(x, P);
    double t1 = std::abs(K.coefficients[K.nmax] * P[K.term_degree(K.nmax)]);
    double t0 = std::abs(K.coefficients[K.nmax - 1] * P[K.term_degree(K.nmax - 1)]);
    if (t1 == 0.0 || t0 == 0.0) {
        // Parity can zero alternate terms at x = 0; fall back two steps.
        t1 = std::max(t1, std::abs(K.coefficients[K.nmax - 2] * P[K.term_degree(K.nmax - 2)]));
        t0 = std::max(t0, t1);
    }
    double r = t0 > 0.0 ? std::min(t1 / t0, 0.999) : 0.0;
    return t1 * r / (1.0 - r) + t1;
}

// Closed form of integral over S^d of H_(s,t)(<x, y>) dsigma(x) in the
// |x-y| distance scaling (prefactor 2^(2 lam - s)); only even degrees
// contribute because odd zonal Jacobi integrals vanish.
inline double head_integral(double s, double lambda, int d, int t) {
    if (!(s > 0.0)) throw invalid_input("head_integral: s > 0 required");
    if (d < 2) throw invalid_input("head_integral: d >= 2 required");
    if (t < 0) throw invalid_input("head_integral: t >= 0 required");
    if (!(lambda > s - 1.0))
        throw invalid_input("head_integral: requires lambda > s - 1");
    if (!(lambda > 0.5 * d - 0.5))
        throw invalid_input("head_integral: requires lambda > d/2 - 1/2");
    const double logC = (2.0 * lambda - s) * std::log(2.0) - 0.5 * std::log(M_PI) +
                        std::lgamma(lambda) + std::lgamma(lambda - 0.5 * s + 0.5);
    KahanSum acc;
    for (int m = 0; 2 * m <= t; ++m) {
        double lg = logC + std::log(2.0 * m + lambda);
        lg += pochhammer_log(0.5 * s, 2 * m);
        lg -= std::lgamma(2.0 * m + 2.0 * lambda - 0.5 * s + 1.0);
        lg += pochhammer_log(lambda, m);
        lg += pochhammer_log(lambda - 0.5 * d + 0.5, m);
        lg -= pochhammer_log(0.5 * d + 0.5, m);
        lg -= std::lgamma(m + 1.0);
        acc.add(std::exp(lg));
    }
    return acc.total();
}

} // namespace sphd

#endif
