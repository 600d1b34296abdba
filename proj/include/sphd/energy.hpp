#ifndef SPHD_ENERGY_HPP
#define SPHD_ENERGY_HPP

#include <cmath>
#include <mutex>
#include <string>
#include <vector>

#include "sphd/errors.hpp"
#include "sphd/kernels.hpp"
#include "sphd/parallel.hpp"
#include "sphd/point_set.hpp"

namespace sphd {

enum class EnergyKind { log, riesz };

struct EnergyReport {
    EnergyKind kind = EnergyKind::log;
    double s = 0.0;                 // riesz exponent; unused for log
    double value = 0.0;
    std::size_t N = 0;
    int d = 2;
    std::string method = "direct";
    bool deterministic = false;
    double min_separation = 0.0;
};

namespace detail {

// Shared preamble: size/duplicate validation plus the separation figure
// every report carries. Duplicates make both energies infinite.
inline double energy_min_sep(const PointSet& X, const ExecPolicy& policy, bool allow_single) {
    check_point_set(X);
    if (X.size() < 2) {
        if (allow_single) return 0.0;
        throw invalid_input("energy: empty pair sum for N < 2 (pass allow_single to get 0)");
    }
    double sep = min_separation(X, policy);
    if (sep == 0.0) throw singular_input("energy: duplicate points make the energy singular");
    return sep;
}

} // namespace detail

// E_log = sum over ordered pairs i != j of log 1/|x_i - x_j|.
inline EnergyReport log_energy(const PointSet& X, const ExecPolicy& policy = {},
                               bool allow_single = false) {
    EnergyReport rep;
    rep.kind = EnergyKind::log;
    rep.N = X.size();
    rep.d = X.d;
    rep.deterministic = policy.deterministic;
    rep.min_separation = detail::energy_min_sep(X, policy, allow_single);
    if (X.size() < 2) return rep;
    std::size_t N = X.size();
    // sum_(i != j) log 1/|.| = - sum_(i<j) log |.|^2
    double total = parallel_row_sum(N - 1, policy, [&](std::size_t i) {
        KahanSum row;
        for (std::size_t j = i + 1; j < N; ++j) row.add(std::log(X.dist2(i, j)));
        return row.total();
    });
    rep.value = -total;
    return rep;
}

// E_s = (1/2) sum over ordered pairs i != j of |x_i - x_j|^(-s).
inline EnergyReport riesz_energy(const PointSet& X, double s, const ExecPolicy& policy = {},
                                 bool allow_single = false) {
    if (!(s > 0.0)) throw invalid_input("riesz_energy: s > 0 required");
    EnergyReport rep;
    rep.kind = EnergyKind::riesz;
    rep.s = s;
    rep.N = X.size();
    rep.d = X.d;
    rep.deterministic = policy.deterministic;
    rep.min_separation = detail::energy_min_sep(X, policy, allow_single);
    if (X.size() < 2) return rep;
    std::size_t N = X.size();
    const double e = -0.5 * s;
    rep.value = parallel_row_sum(N - 1, policy, [&](std::size_t i) {
        KahanSum row;
        for (std::size_t j = i + 1; j < N; ++j) row.add(std::pow(X.dist2(i, j), e));
        return row.total();
    });
    return rep;
}

// V_log(S^d) = double integral of log 1/|x-y| over the product of uniform
// measures, reduced to one zonal integral of -(1/2) log(2(1-t)).
inline double continuous_log_energy(int d) {
    if (d < 2) throw invalid_input("continuous_log_energy: d >= 2 required");
    return zonal_integral([](double t) { return -0.5 * std::log(2.0 * (1.0 - t)); }, d, 1e-12);
}

struct KernelSplitEnergy {
    double head = 0.0;   // E over the degree <= t part, distance scaling
    double tail = 0.0;   // E over the rest, truncated at nmax
    double total() const { return head + tail; }
};

// Split the pair energy through the truncated kernel expansion:
//   riesz: E_s = 2^(-1-s/2) sum_(i!=j) [head_raw + tail_raw](<x_i,x_j>)
//   log:   E_log = (1/2) sum_(i!=j) [head + tail](<x_i,x_j>) - (N^2-N)(log 2)/2
// where head/tail are the raw-normalization partial series of K and the log
// constant sits inside the head. head + tail reproduces the direct energy up
// to the nmax truncation. Exactly antipodal or coincident pairs sit on the
// boundary of the expansion's validity and are rejected with their indices.
inline KernelSplitEnergy kernel_split_energy(const PointSet& X, const KernelCoefficients& K,
                                             int t, const ExecPolicy& policy = {}) {
    check_point_set(X);
    if (X.size() < 2) throw invalid_input("kernel_split_energy: N >= 2 required");
    if (X.d != K.d)
        throw invalid_input("kernel_split_energy: point set dimension differs from kernel d");
    if (t < 0 || t > K.nmax) throw invalid_input("kernel_split_energy: need 0 <= t <= nmax");

    std::size_t N = X.size();
    JacobiRecurrence rec(K.term_degree(K.nmax), JacobiParams(K.basis_alpha(), K.basis_alpha()));
    std::vector<double> row_head(N - 1, 0.0), row_tail(N - 1, 0.0);
    std::string bad_pair;
    std::mutex bad_mutex;
    detail::parallel_for(N - 1, policy.resolved_threads(), [&](std::size_t i) {
        KahanSum h, r;
        for (std::size_t j = i + 1; j < N; ++j) {
            double g = X.inner(i, j);
            g = std::min(1.0, std::max(-1.0, g));
            if (g >= 1.0 - 1e-14 || g <= -1.0 + 1e-14) {
                std::lock_guard<std::mutex> lock(bad_mutex);
                if (bad_pair.empty())
                    bad_pair = (g > 0 ? "coincident" : "antipodal") + std::string(" pair (") +
                               std::to_string(i + 1) + ", " + std::to_string(j + 1) + ")";
                return;
            }
            if (K.kind == KernelKind::riesz) {
                rec.scan(g, [&](int n, double Pn) {
                    double term = K.coefficients[n] * Pn;
                    if (n <= t)
                        h.add(term);
                    else
                        r.add(term);
                });
            } else {
                h.add(K.constant_term);
                rec.scan(g, [&](int n, double Pn) {
                    if (n == 0) return;   // coefficients attach to degrees >= 1
                    double term = K.coefficients[n - 1] * Pn;
                    if (n <= t)
                        h.add(term);
                    else
                        r.add(term);
                });
            }
        }
        row_head[i] = h.total();
        row_tail[i] = r.total();
    });
    if (!bad_pair.empty())
        throw singular_input("kernel_split_energy: " + bad_pair +
                             " lies outside the open interval of expansion validity");

    KernelSplitEnergy E;
    double head_pairs = compensated_total(row_head);
    double tail_pairs = compensated_total(row_tail);
    if (K.kind == KernelKind::riesz) {
        double scale = K.distance_scale();   // 2^(-s/2): ordered-pair 2 and 1/2 cancel
        E.head = scale * head_pairs;
        E.tail = scale * tail_pairs;
    } else {
        double Nd = static_cast<double>(N);
        E.head = head_pairs - 0.5 * (Nd * Nd - Nd) * std::log(2.0);
        E.tail = tail_pairs;
    }
    return E;
}

// Convenience wrapper that builds the coefficients too.
inline KernelSplitEnergy kernel_split_energy(const PointSet& X, EnergyKind kind, double s,
                                             double lambda, int t, int nmax,
                                             const ExecPolicy& policy = {}) {
    KernelCoefficients K = (kind == EnergyKind::riesz) ? riesz_coefficients(s, lambda, X.d, nmax)
                                                       : log_coefficients(lambda, X.d, nmax);
    return kernel_split_energy(X, K, t, policy);
}

} // namespace sphd

#endif
