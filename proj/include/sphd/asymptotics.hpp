#ifndef SPHD_ASYMPTOTICS_HPP
#define SPHD_ASYMPTOTICS_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "sphd/designs.hpp"
#include "sphd/energy.hpp"
#include "sphd/errors.hpp"
#include "sphd/gammafn.hpp"
#include "sphd/point_set.hpp"

namespace sphd {

// V_log(S^d) in closed form. Writing the digamma difference through harmonic
// numbers keeps it exact for integer d:
//   d = 2m:   -log 2 + (H_{d-1} - H_{m-1})/2
//   d = 2m+1:  H_{d-1}/2 - sum_{k=1}^{m} 1/(2k-1)
inline double log_energy_constant(int d) {
    if (d < 2) throw invalid_input("log_energy_constant: d >= 2 required");
    auto harmonic = [](int n) {
        double h = 0.0;
        for (int k = 1; k <= n; ++k) h += 1.0 / k;
        return h;
    };
    if (d % 2 == 0) {
        int m = d / 2;
        return -std::log(2.0) + 0.5 * (harmonic(d - 1) - harmonic(m - 1));
    }
    int m = (d - 1) / 2;
    double odd = 0.0;
    for (int k = 1; k <= m; ++k) odd += 1.0 / (2.0 * k - 1.0);
    return 0.5 * harmonic(d - 1) - odd;
}

struct AsymptoticPrediction {
    EnergyKind kind = EnergyKind::log;
    double s = 0.0;
    std::size_t N = 0;
    int d = 2;
    int t = -1;   // only meaningful for the s = d prediction
    double leading_term = 0.0;
    double second_term = 0.0;
    double predicted = 0.0;   // always leading_term + second_term
    std::string remainder_order;
    bool bound_only = false;  // s > d: an order envelope, not a forecast
};

inline AsymptoticPrediction predict_log_energy(int d, std::size_t N) {
    if (d < 2 || N < 1) throw invalid_input("predict_log_energy: need d >= 2, N >= 1");
    AsymptoticPrediction p;
    p.kind = EnergyKind::log;
    p.N = N;
    p.d = d;
    double Nd = static_cast<double>(N);
    p.leading_term = Nd * Nd * log_energy_constant(d);
    p.second_term = -(1.0 / d) * Nd * std::log(Nd);
    p.predicted = p.leading_term + p.second_term;
    p.remainder_order = "O(N)";
    return p;
}

namespace detail {

// Gamma((d+1)/2) / Gamma(d/2) by upward recurrence from the half-integer base
// cases; exact cancellations survive (the d = 2 limit constant lands on 1/8
// to the bit), unlike a round trip through exp(lgamma).
inline double gamma_half_ratio(int d) {
    double r = (d % 2 == 0) ? std::sqrt(M_PI) / 2.0 : 1.0 / std::sqrt(M_PI);
    for (int k = (d % 2 == 0) ? 2 : 1; k < d; k += 2) r *= (k + 1.0) / k;
    return r;
}

} // namespace detail

// (1/(2d sqrt(pi))) Gamma(d/2+1/2)/Gamma(d/2); agrees with the reference form
// (1/(2d)) Gamma((d+1)/2)/(Gamma(d/2) Gamma(1/2)) identically.
inline double limit_constant_s_equals_d(int d) {
    if (d < 2) throw invalid_input("limit_constant_s_equals_d: d >= 2 required");
    return detail::gamma_half_ratio(d) / (2.0 * d * std::sqrt(M_PI));
}

inline double limit_constant_reference_form(int d) {
    if (d < 2) throw invalid_input("limit_constant_reference_form: d >= 2 required");
    return std::exp(std::lgamma(0.5 * (d + 1)) - std::lgamma(0.5 * d) - std::lgamma(0.5)) /
           (2.0 * d);
}

// The d = 2 literature records the same N^2 coefficient with a shifted
// harmonic sum, (1/4) sum_{k=0}^{t} 1/(k+1); both are kept so sweeps can
// report either bookkeeping. They differ by about (log 2)/4 inside O(N^2).
inline double shifted_harmonic_d2_coefficient(int t) {
    if (t < 0) throw invalid_input("shifted_harmonic_d2_coefficient: t >= 0 required");
    double h = 0.0;
    for (int k = 0; k <= t; ++k) h += 1.0 / (k + 1.0);
    return 0.25 * h;
}

inline AsymptoticPrediction predict_riesz_energy(int d, double s, std::size_t N, int t = -1) {
    if (d < 2 || N < 1) throw invalid_input("predict_riesz_energy: need d >= 2, N >= 1");
    if (s < static_cast<double>(d))
        throw invalid_input("predict_riesz_energy: s >= d required (s < d has a different law)");
    AsymptoticPrediction p;
    p.kind = EnergyKind::riesz;
    p.s = s;
    p.N = N;
    p.d = d;
    double Nd = static_cast<double>(N);
    if (s == static_cast<double>(d)) {
        if (t < 2) throw invalid_input("predict_riesz_energy: s = d needs t >= 2");
        p.t = t;
        double hsum = 0.0;
        for (int n = 1; n <= t / 2; ++n) hsum += 1.0 / n;
        double coef = detail::gamma_half_ratio(d) / (2.0 * std::sqrt(M_PI));
        p.leading_term = coef * hsum * Nd * Nd;
        p.second_term = 0.0;
        p.remainder_order = "O(N^2)";
    } else {
        p.leading_term = std::pow(Nd, 1.0 + s / d);
        p.second_term = 0.0;
        p.remainder_order = "-";
        p.bound_only = true;   // only the growth order is known here, no constant
    }
    p.predicted = p.leading_term + p.second_term;
    return p;
}

enum class SweepSource { designs, files, fibonacci, random };

struct SweepKindSpec {
    EnergyKind kind = EnergyKind::log;
    double s = 0.0;   // riesz only
};

struct SweepRecord {
    int t = 0;        // design degree when the source is constructed designs
    std::size_t N = 0;
    int d = 2;
    EnergyKind kind = EnergyKind::log;
    double s = 0.0;
    double measured = 0.0;
    double leading = 0.0;
    double second = 0.0;
    double residual = 0.0;   // measured - (leading + second)
    double min_separation = 0.0;
    std::string source;
    bool ok = true;
    std::string error;
};

struct SweepOptions {
    SweepSource source = SweepSource::designs;
    int d = 2;
    std::vector<int> t_values;              // designs
    std::vector<std::size_t> N_values;      // fibonacci / random
    std::vector<std::string> files;         // files
    std::vector<SweepKindSpec> kinds;
    std::uint64_t seed = 1;
    ConstructOptions construct = {.restarts = 1, .polish_energy = true};
};

namespace detail {

inline void sweep_measure(const PointSet& X, int t, const std::string& source_tag,
                          const std::vector<SweepKindSpec>& kinds, const ExecPolicy& policy,
                          std::vector<SweepRecord>& out) {
    for (const auto& ks : kinds) {
        SweepRecord rec;
        rec.t = t;
        rec.N = X.size();
        rec.d = X.d;
        rec.kind = ks.kind;
        rec.s = ks.kind == EnergyKind::riesz ? ks.s : 0.0;
        rec.source = source_tag;
        try {
            EnergyReport er = ks.kind == EnergyKind::log ? log_energy(X, policy)
                                                         : riesz_energy(X, ks.s, policy);
            rec.measured = er.value;
            rec.min_separation = er.min_separation;
            AsymptoticPrediction p = ks.kind == EnergyKind::log
                                         ? predict_log_energy(X.d, X.size())
                                         : predict_riesz_energy(X.d, ks.s, X.size(), t);
            rec.leading = p.leading_term;
            rec.second = p.second_term;
            rec.residual = rec.measured - p.predicted;
        } catch (const std::exception& e) {
            rec.ok = false;
            rec.error = e.what();
        }
        out.push_back(std::move(rec));
    }
}

} // namespace detail

// Runs the configured point-set source through every requested energy kind.
// Failures are recorded per record; the sweep always completes.
inline std::vector<SweepRecord> sweep(const SweepOptions& opt, const ExecPolicy& policy = {}) {
    if (opt.kinds.empty()) throw invalid_input("sweep: no energy kinds given");
    std::vector<SweepRecord> out;
    switch (opt.source) {
        case SweepSource::designs: {
            if (opt.t_values.empty()) throw invalid_input("sweep: empty t range");
            for (int t : opt.t_values) {
                std::string tag = "design(t=" + std::to_string(t) + ")";
                try {
                    auto [X, cert] = construct_design(opt.d, t, 0, opt.seed, opt.construct, policy);
                    detail::sweep_measure(X, t, tag, opt.kinds, policy, out);
                } catch (const std::exception& e) {
                    for (const auto& ks : opt.kinds) {
                        SweepRecord rec;
                        rec.t = t;
                        rec.d = opt.d;
                        rec.kind = ks.kind;
                        rec.s = ks.kind == EnergyKind::riesz ? ks.s : 0.0;
                        rec.source = tag;
                        rec.ok = false;
                        rec.error = e.what();
                        out.push_back(std::move(rec));
                    }
                }
            }
            break;
        }
        case SweepSource::files: {
            if (opt.files.empty()) throw invalid_input("sweep: empty file list");
            for (const auto& path : opt.files) {
                try {
                    PointSet X = load_point_set(path, opt.d);
                    detail::sweep_measure(X, 0, path, opt.kinds, policy, out);
                } catch (const std::exception& e) {
                    for (const auto& ks : opt.kinds) {
                        SweepRecord rec;
                        rec.d = opt.d;
                        rec.kind = ks.kind;
                        rec.s = ks.kind == EnergyKind::riesz ? ks.s : 0.0;
                        rec.source = path;
                        rec.ok = false;
                        rec.error = e.what();
                        out.push_back(std::move(rec));
                    }
                }
            }
            break;
        }
        case SweepSource::fibonacci:
        case SweepSource::random: {
            if (opt.N_values.empty()) throw invalid_input("sweep: empty N range");
            std::uint64_t idx = 0;
            for (std::size_t N : opt.N_values) {
                bool fib = opt.source == SweepSource::fibonacci;
                std::string tag =
                    (fib ? "fibonacci(N=" : "random(N=") + std::to_string(N) + ")";
                try {
                    PointSet X = fib ? generate_fibonacci(N)
                                     : generate_random_uniform(opt.d, N, opt.seed + idx);
                    detail::sweep_measure(X, 0, tag, opt.kinds, policy, out);
                } catch (const std::exception& e) {
                    for (const auto& ks : opt.kinds) {
                        SweepRecord rec;
                        rec.N = N;
                        rec.d = opt.d;
                        rec.kind = ks.kind;
                        rec.s = ks.kind == EnergyKind::riesz ? ks.s : 0.0;
                        rec.source = tag;
                        rec.ok = false;
                        rec.error = e.what();
                        out.push_back(std::move(rec));
                    }
                }
                ++idx;
            }
            break;
        }
    }
    return out;
}

struct FitResult {
    double exponent = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::size_t count = 0;
};

// Least squares of log|residual| against log N. Records whose residual is
// numerically zero relative to N^2 carry no growth information and are
// dropped before fitting.
inline FitResult fit_residual_exponent(const std::vector<SweepRecord>& records) {
    std::vector<double> lx, ly;
    for (const auto& r : records) {
        if (!r.ok || r.N < 1) continue;
        double Nd = static_cast<double>(r.N);
        if (std::abs(r.residual) < 1e-12 * Nd * Nd) continue;
        lx.push_back(std::log(Nd));
        ly.push_back(std::log(std::abs(r.residual)));
    }
    if (lx.size() < 4)
        throw invalid_input("fit_residual_exponent: need at least 4 usable records, have " +
                            std::to_string(lx.size()));
    bool spread = false;
    for (double v : lx)
        if (v != lx.front()) spread = true;
    if (!spread)
        throw invalid_input("fit_residual_exponent: degenerate fit, all N equal");
    double n = static_cast<double>(lx.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    if (sxx == 0.0)
        throw invalid_input("fit_residual_exponent: degenerate fit, all N equal");
    FitResult fit;
    fit.exponent = sxy / sxx;
    fit.intercept = my - fit.exponent * mx;
    double ss_res = syy - sxy * sxy / sxx;
    fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    fit.count = lx.size();
    return fit;
}

} // namespace sphd

#endif
