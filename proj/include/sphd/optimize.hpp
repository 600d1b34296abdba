#ifndef SPHD_OPTIMIZE_HPP
#define SPHD_OPTIMIZE_HPP

#include <cmath>
#include <cstddef>
#include <deque>
#include <limits>
#include <vector>

namespace sphd {
namespace detail {

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

struct OptResult {
    double f = std::numeric_limits<double>::infinity();
    double grad_norm = std::numeric_limits<double>::infinity();
    int iters = 0;
    bool converged = false;
};

// Plain two-loop L-BFGS with Armijo backtracking. fg(x, grad) -> f must fill
// grad; a non-finite f is treated as an out-of-domain step and backtracked.
// Memory is dropped and a steepest-descent step retried once before giving up,
// which rides out the occasional bad curvature pair near flat minima. Besides
// grad_tol/f_target, the loop exits once several consecutive accepted steps
// make only roundoff-level progress -- these objectives bottom out at a
// noise floor rather than at a clean gradient zero.
template <class FG>
OptResult lbfgs_minimize(std::vector<double>& x, FG&& fg, int max_iters,
                         double grad_tol = 1e-13,
                         double f_target = -std::numeric_limits<double>::infinity(),
                         std::size_t memory = 8) {
    const std::size_t n = x.size();
    std::vector<double> g(n), g_new(n), x_new(n), p(n), q(n);
    std::deque<std::vector<double>> s_hist, y_hist;
    std::deque<double> rho_hist;
    OptResult out;
    out.f = fg(x, g);
    if (!std::isfinite(out.f)) return out;
    int stall = 0;

    for (int iter = 0; iter < max_iters; ++iter) {
        out.iters = iter;
        out.grad_norm = norm2(g);
        if (out.grad_norm <= grad_tol || out.f <= f_target) {
            out.converged = true;
            return out;
        }

        bool tried_sd = s_hist.empty();
        for (;;) {
            // direction from the two-loop recursion (or -g if no memory)
            q = g;
            std::vector<double> alpha_hist(s_hist.size());
            for (std::size_t k = s_hist.size(); k-- > 0;) {
                double a = rho_hist[k] * dot(s_hist[k], q);
                alpha_hist[k] = a;
                for (std::size_t i = 0; i < n; ++i) q[i] -= a * y_hist[k][i];
            }
            double h0 = 1.0;
            if (!s_hist.empty()) {
                const auto& sl = s_hist.back();
                const auto& yl = y_hist.back();
                double yy = dot(yl, yl);
                if (yy > 0) h0 = dot(sl, yl) / yy;
            } else {
                h0 = 1.0 / std::max(1.0, out.grad_norm);
            }
            for (std::size_t i = 0; i < n; ++i) q[i] *= h0;
            for (std::size_t k = 0; k < s_hist.size(); ++k) {
                double b = rho_hist[k] * dot(y_hist[k], q);
                for (std::size_t i = 0; i < n; ++i)
                    q[i] += (alpha_hist[k] - b) * s_hist[k][i];
            }
            for (std::size_t i = 0; i < n; ++i) p[i] = -q[i];

            double dg = dot(g, p);
            if (!(dg < 0)) {   // not a descent direction: fall back
                s_hist.clear();
                y_hist.clear();
                rho_hist.clear();
                for (std::size_t i = 0; i < n; ++i) p[i] = -g[i];
                dg = -dot(g, g);
                tried_sd = true;
            }

            double step = 1.0;
            double f_new = std::numeric_limits<double>::infinity();
            bool ok = false;
            for (int ls = 0; ls < 30; ++ls) {
                for (std::size_t i = 0; i < n; ++i) x_new[i] = x[i] + step * p[i];
                f_new = fg(x_new, g_new);
                if (std::isfinite(f_new) && f_new <= out.f + 1e-4 * step * dg) {
                    ok = true;
                    break;
                }
                step *= 0.5;
            }
            if (ok) {
                // curvature-guarded memory update
                std::vector<double> s_vec(n), y_vec(n);
                for (std::size_t i = 0; i < n; ++i) {
                    s_vec[i] = x_new[i] - x[i];
                    y_vec[i] = g_new[i] - g[i];
                }
                double sy = dot(s_vec, y_vec);
                if (sy > 1e-10 * norm2(s_vec) * norm2(y_vec)) {
                    s_hist.push_back(std::move(s_vec));
                    y_hist.push_back(std::move(y_vec));
                    rho_hist.push_back(1.0 / sy);
                    if (s_hist.size() > memory) {
                        s_hist.pop_front();
                        y_hist.pop_front();
                        rho_hist.pop_front();
                    }
                }
                double progress = out.f - f_new;
                x.swap(x_new);
                g.swap(g_new);
                out.f = f_new;
                if (progress <= 8.0 * std::numeric_limits<double>::epsilon() *
                                    (1.0 + std::abs(out.f)))
                    ++stall;
                else
                    stall = 0;
                if (stall >= 5) {
                    out.iters = iter + 1;
                    out.grad_norm = norm2(g);
                    out.converged = true;   // pinned at the floating-point floor
                    return out;
                }
                break;
            }
            if (tried_sd) {
                out.iters = iter;
                return out;   // no progress possible at this scale
            }
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
            tried_sd = true;
        }
    }
    out.iters = max_iters;
    out.grad_norm = norm2(g);
    out.converged = out.grad_norm <= grad_tol || out.f <= f_target;
    return out;
}

} // namespace detail
} // namespace sphd

#endif
