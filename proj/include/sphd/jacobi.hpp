#ifndef SPHD_JACOBI_HPP
#define SPHD_JACOBI_HPP

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "sphd/cap.hpp"
#include "sphd/errors.hpp"
#include "sphd/gammafn.hpp"
#include "sphd/quadrature.hpp"

namespace sphd {

struct JacobiParams {
    double alpha;
    double beta;

    JacobiParams(double a, double b) : alpha(a), beta(b) {
        if (!(a > -1.0) || !(b > -1.0))
            throw invalid_input("JacobiParams: alpha and beta must exceed -1");
    }
};

// Three-term recurrence  P_n = (A_n x + B_n) P_(n-1) - C_n P_(n-2)
// with the coefficients precomputed per degree, so evaluating the same
// family at many x (Gram-matrix loops) costs three fused ops per degree.
// Forward recurrence in the degree is stable on [-1, 1].
class JacobiRecurrence {
public:
    JacobiRecurrence(int nmax, JacobiParams p) : nmax_(nmax), p_(p) {
        if (nmax < 0) throw invalid_input("JacobiRecurrence: nmax >= 0 required");
        A_.resize(nmax + 1, 0.0);
        B_.resize(nmax + 1, 0.0);
        C_.resize(nmax + 1, 0.0);
        const double a = p.alpha, b = p.beta;
        for (int n = 2; n <= nmax; ++n) {
            double apb = a + b;
            double den = 2.0 * n * (n + apb) * (2.0 * n + apb - 2.0);
            A_[n] = (2.0 * n + apb - 1.0) * (2.0 * n + apb) * (2.0 * n + apb - 2.0) / den;
            B_[n] = (2.0 * n + apb - 1.0) * (a * a - b * b) / den;
            C_[n] = 2.0 * (n + a - 1.0) * (n + b - 1.0) * (2.0 * n + apb) / den;
        }
    }

    int nmax() const { return nmax_; }
    const JacobiParams& params() const { return p_; }

    // All degrees 0..nmax at one x; out is resized to nmax+1.
    void batch(double x, std::vector<double>& out) const {
        out.resize(nmax_ + 1);
        out[0] = 1.0;
        if (nmax_ >= 1) out[1] = 0.5 * (p_.alpha - p_.beta) + 0.5 * (p_.alpha + p_.beta + 2.0) * x;
        for (int n = 2; n <= nmax_; ++n)
            out[n] = (A_[n] * x + B_[n]) * out[n - 1] - C_[n] * out[n - 2];
    }

    double eval(int n, double x) const {
        if (n > nmax_) throw invalid_input("JacobiRecurrence: degree exceeds table");
        double p0 = 1.0;
        if (n == 0) return p0;
        double p1 = 0.5 * (p_.alpha - p_.beta) + 0.5 * (p_.alpha + p_.beta + 2.0) * x;
        for (int m = 2; m <= n; ++m) {
            double p2 = (A_[m] * x + B_[m]) * p1 - C_[m] * p0;
            p0 = p1;
            p1 = p2;
        }
        return p1;
    }

    // Stream visit(n, P_n(x)) for n = 0..nmax without allocating; the inner
    // loop of pairwise kernel sums.
    template <class F>
    void scan(double x, F&& visit) const {
        double p0 = 1.0;
        visit(0, p0);
        if (nmax_ == 0) return;
        double p1 = 0.5 * (p_.alpha - p_.beta) + 0.5 * (p_.alpha + p_.beta + 2.0) * x;
        visit(1, p1);
        for (int n = 2; n <= nmax_; ++n) {
            double p2 = (A_[n] * x + B_[n]) * p1 - C_[n] * p0;
            visit(n, p2);
            p0 = p1;
            p1 = p2;
        }
    }

private:
    int nmax_;
    JacobiParams p_;
    std::vector<double> A_, B_, C_;
};

inline void check_eval_point(double x) {
    if (!(x >= -1.0 && x <= 1.0))
        throw invalid_input("jacobi: evaluation point " + std::to_string(x) +
                            " outside [-1, 1]");
}

inline double jacobi_eval(int n, JacobiParams p, double x) {
    if (n < 0) throw invalid_input("jacobi_eval: n >= 0 required");
    check_eval_point(x);
    return JacobiRecurrence(n, p).eval(n, x);
}

inline std::vector<double> jacobi_batch(int nmax, JacobiParams p, double x) {
    if (nmax < 0) throw invalid_input("jacobi_batch: nmax >= 0 required");
    check_eval_point(x);
    std::vector<double> out;
    JacobiRecurrence(nmax, p).batch(x, out);
    return out;
}

// P_n^(alpha,beta)(1) = Gamma(n+alpha+1) / (Gamma(alpha+1) n!).
inline double jacobi_at_one(int n, double alpha) {
    if (n < 0) throw invalid_input("jacobi_at_one: n >= 0 required");
    return std::exp(lgamma_ratio(n + alpha + 1.0, alpha + 1.0) - std::lgamma(n + 1.0));
}

// d/dx P_n^(a,b)(x) = ((a+b+n+1)/2) P_(n-1)^(a+1,b+1)(x); 0 for n = 0.
inline double jacobi_derivative(int n, JacobiParams p, double x) {
    if (n < 0) throw invalid_input("jacobi_derivative: n >= 0 required");
    if (n == 0) return 0.0;
    check_eval_point(x);
    double factor = 0.5 * (p.alpha + p.beta + n + 1.0);
    return factor * jacobi_eval(n - 1, JacobiParams(p.alpha + 1.0, p.beta + 1.0), x);
}

// Connection coefficients of P_n^(lam-1/2, lam-1/2) in the ultraspherical
// family P_m^(d/2-1, d/2-1):
//   P_n^(lam-1/2) = sum_k c_k P_(n-2k)^(d/2-1),  k = 0..[n/2].
// Every factor is a positive Pochhammer when lam > d/2 - 1/2, so the
// products are formed in log space without sign tracking.
inline std::vector<std::pair<int, double>> connection_expand(int n, double lambda, int d) {
    if (n < 0) throw invalid_input("connection_expand: n >= 0 required");
    if (d < 2) throw invalid_input("connection_expand: d >= 2 required");
    if (!(lambda > 0.5 * d - 0.5))
        throw invalid_input("connection_expand: requires lambda > d/2 - 1/2");
    const double half_d = 0.5 * d;
    double log_pref = pochhammer_log(lambda + 0.5, n) - pochhammer_log(2.0 * lambda, n);
    std::vector<std::pair<int, double>> terms;
    terms.reserve(n / 2 + 1);
    for (int k = 0; k <= n / 2; ++k) {
        int m = n - 2 * k;
        double lg = log_pref;
        lg += pochhammer_log(static_cast<double>(d - 1), m) - pochhammer_log(half_d, m);
        lg += pochhammer_log(lambda, n - k);
        lg += pochhammer_log(half_d + 0.5, m);
        lg += pochhammer_log(lambda - half_d + 0.5, k);
        lg -= pochhammer_log(half_d + 0.5, n - k);
        lg -= pochhammer_log(half_d - 0.5, m);
        lg -= std::lgamma(k + 1.0);
        terms.emplace_back(m, std::exp(lg));
    }
    return terms;
}

// integral over S^d of P_n^(lam-1/2, lam-1/2)(<x, y>) dsigma(x):
// zero at odd n; at n = 2m the closed form from the connection expansion
// (only the constant term of the ultraspherical family survives).
inline double zonal_jacobi_integral(int n, double lambda, int d) {
    if (n < 0) throw invalid_input("zonal_jacobi_integral: n >= 0 required");
    if (d < 2) throw invalid_input("zonal_jacobi_integral: d >= 2 required");
    if (!(lambda > 0.5 * d - 0.5))
        throw invalid_input("zonal_jacobi_integral: requires lambda > d/2 - 1/2");
    if (n % 2 == 1) return 0.0;
    int m = n / 2;
    double lg = pochhammer_log(lambda + 0.5, n) - pochhammer_log(2.0 * lambda, n);
    lg += pochhammer_log(lambda, m);
    lg += pochhammer_log(lambda - 0.5 * d + 0.5, m);
    lg -= pochhammer_log(0.5 * d + 0.5, m);
    lg -= std::lgamma(m + 1.0);
    return std::exp(lg);
}

// integral over S^d of f(<x, y>) dsigma(x)
//   = C_d integral_(-1)^(1) f(t) (1-t^2)^(d/2-1) dt,
// with C_d = Gamma((d+1)/2)/(sqrt(pi) Gamma(d/2)). Adaptive panels with
// endpoint substitution, so integrable singularities of f at +-1 are fine.
inline double zonal_integral(const std::function<double(double)>& f, int d,
                             double abs_tol = 1e-12) {
    if (d < 2) throw invalid_input("zonal_integral: d >= 2 required");
    return zonal_norm_constant(d) * weighted_full_integral(f, d, abs_tol);
}

} // namespace sphd

#endif
