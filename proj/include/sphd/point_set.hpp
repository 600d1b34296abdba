#ifndef SPHD_POINT_SET_HPP
#define SPHD_POINT_SET_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sphd/errors.hpp"
#include "sphd/parallel.hpp"

namespace sphd {

// N unit vectors in R^(d+1), stored row-major in one flat buffer.
// Immutable by convention once built; all library operations treat it as
// read-only, so concurrent use is safe.
struct PointSet {
    int d = 2;                    // sphere S^d subset of R^(d+1)
    std::vector<double> coords;   // N * (d+1) doubles, row i = point i
    std::string label;            // where it came from: file path or generator tag

    std::size_t size() const { return dim() == 0 ? 0 : coords.size() / dim(); }
    std::size_t dim() const { return static_cast<std::size_t>(d) + 1; }
    const double* point(std::size_t i) const { return coords.data() + i * dim(); }
    double* point(std::size_t i) { return coords.data() + i * dim(); }

    double inner(std::size_t i, std::size_t j) const {
        const double* a = point(i);
        const double* b = point(j);
        double s = 0.0;
        for (std::size_t k = 0; k < dim(); ++k) s += a[k] * b[k];
        return s;
    }
    double dist2(std::size_t i, std::size_t j) const {
        const double* a = point(i);
        const double* b = point(j);
        double s = 0.0;
        for (std::size_t k = 0; k < dim(); ++k) {
            double t = a[k] - b[k];
            s += t * t;
        }
        return s;
    }
};

// Spherical cap S(center; phi): all x with dist(x, center) <= angle phi.
struct CapSpec {
    std::vector<double> center;
    double angular_radius;   // radians, in (0, pi]

    CapSpec(std::vector<double> c, double phi) : center(std::move(c)), angular_radius(phi) {
        double n2 = 0.0;
        for (double v : center) n2 += v * v;
        if (std::abs(std::sqrt(n2) - 1.0) > 1e-10)
            throw invalid_input("CapSpec: center must be a unit vector");
        if (!(phi > 0.0 && phi <= M_PI))
            throw invalid_input("CapSpec: angular radius must lie in (0, pi]");
    }
};

inline void check_point_set(const PointSet& X) {
    if (X.d < 2) throw invalid_input("PointSet: d >= 2 required");
    if (X.size() < 1) throw invalid_input("PointSet: at least one point required");
    if (X.coords.size() % X.dim() != 0)
        throw invalid_input("PointSet: coordinate buffer is not a multiple of d+1");
    for (std::size_t i = 0; i < X.size(); ++i) {
        double n2 = X.inner(i, i);
        if (std::abs(std::sqrt(n2) - 1.0) > 1e-10)
            throw invalid_input("PointSet: point " + std::to_string(i + 1) +
                                " is not unit norm within 1e-10");
    }
}

// Text format: one point per line, d+1 whitespace-separated decimal fields;
// blank lines and lines starting with '#' are skipped. Rows whose norm is
// within 1e-8 of 1 are renormalized; anything further off is rejected with
// its (1-based, comment-counting) row index.
inline PointSet load_point_set(const std::string& path, int d) {
    if (d < 2) throw invalid_input("load_point_set: d >= 2 required");
    std::ifstream in(path);
    if (!in) throw invalid_input("load_point_set: cannot open '" + path + "'");
    PointSet X;
    X.d = d;
    X.label = path;
    std::string line;
    std::size_t lineno = 0;
    const std::size_t dim = static_cast<std::size_t>(d) + 1;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t first = line.find_first_not_of(" \t\r\n");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream fields(line);
        std::vector<double> row;
        double v;
        while (fields >> v) row.push_back(v);
        if (!fields.eof()) {
            throw invalid_input("load_point_set: malformed number at line " +
                                std::to_string(lineno));
        }
        if (row.size() != dim)
            throw invalid_input("load_point_set: line " + std::to_string(lineno) + " has " +
                                std::to_string(row.size()) + " fields, expected " +
                                std::to_string(dim));
        double n2 = 0.0;
        for (double c : row) n2 += c * c;
        double norm = std::sqrt(n2);
        if (std::abs(norm - 1.0) > 1e-8)
            throw invalid_input("load_point_set: row " + std::to_string(lineno) +
                                " has norm " + std::to_string(norm) +
                                ", more than 1e-8 from 1");
        for (double c : row) X.coords.push_back(c / norm);
    }
    if (X.size() < 1) throw invalid_input("load_point_set: no points in '" + path + "'");
    return X;
}

inline void save_point_set(const PointSet& X, const std::string& path,
                           const std::string& header = "") {
    std::ofstream out(path);
    if (!out) throw invalid_input("save_point_set: cannot write '" + path + "'");
    if (!header.empty()) out << "# " << header << "\n";
    out.precision(17);
    for (std::size_t i = 0; i < X.size(); ++i) {
        const double* p = X.point(i);
        for (std::size_t k = 0; k < X.dim(); ++k) out << (k ? " " : "") << p[k];
        out << "\n";
    }
}

// min over i != j of |x_i - x_j|. Zero iff a point is duplicated.
inline double min_separation(const PointSet& X, const ExecPolicy& policy = {}) {
    std::size_t N = X.size();
    if (N < 2) throw invalid_input("min_separation: undefined for fewer than 2 points");
    std::vector<double> row_min(N - 1, std::numeric_limits<double>::infinity());
    detail::parallel_for(N - 1, policy.resolved_threads(), [&](std::size_t i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = i + 1; j < N; ++j) best = std::min(best, X.dist2(i, j));
        row_min[i] = best;
    });
    double best = std::numeric_limits<double>::infinity();
    for (double v : row_min) best = std::min(best, v);
    return std::sqrt(best);
}

// Measured well-separation constant c1 = min_separation * N^(1/d).
inline double separation_constant(const PointSet& X, const ExecPolicy& policy = {}) {
    return min_separation(X, policy) *
           std::pow(static_cast<double>(X.size()), 1.0 / static_cast<double>(X.d));
}

// Uniform points on S^d: normalized standard Gaussian vectors. The Gaussian
// pairs come from an explicit Box-Muller transform so a fixed seed yields
// the same points on every platform (std::normal_distribution does not
// promise that).
inline PointSet generate_random_uniform(int d, std::size_t N, std::uint64_t seed) {
    if (d < 2) throw invalid_input("generate_random_uniform: d >= 2 required");
    if (N < 1) throw invalid_input("generate_random_uniform: N >= 1 required");
    std::mt19937_64 rng(seed);
    auto unit_open = [&]() {
        // (0,1], avoids log(0)
        return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
    };
    PointSet X;
    X.d = d;
    X.label = "random(seed=" + std::to_string(seed) + ")";
    X.coords.reserve(N * (d + 1));
    for (std::size_t i = 0; i < N; ++i) {
        std::vector<double> g;
        g.reserve(d + 1);
        while (g.size() < static_cast<std::size_t>(d) + 1) {
            double u1 = unit_open(), u2 = unit_open();
            double r = std::sqrt(-2.0 * std::log(u1));
            g.push_back(r * std::cos(2.0 * M_PI * u2));
            if (g.size() < static_cast<std::size_t>(d) + 1)
                g.push_back(r * std::sin(2.0 * M_PI * u2));
        }
        double n2 = 0.0;
        for (double v : g) n2 += v * v;
        if (n2 == 0.0) { --i; continue; }
        double inv = 1.0 / std::sqrt(n2);
        for (double v : g) X.coords.push_back(v * inv);
    }
    return X;
}

// Golden-angle Fibonacci lattice on S^2: z_i = 1 - (2i+1)/N,
// theta_i = 2 pi i / golden ratio. Deterministic, well spread.
inline PointSet generate_fibonacci(std::size_t N) {
    if (N < 1) throw invalid_input("generate_fibonacci: N >= 1 required");
    PointSet X;
    X.d = 2;
    X.label = "fibonacci";
    X.coords.reserve(N * 3);
    const double golden = 0.5 * (1.0 + std::sqrt(5.0));
    for (std::size_t i = 0; i < N; ++i) {
        double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(N);
        double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        double theta = 2.0 * M_PI * static_cast<double>(i) / golden;
        X.coords.push_back(r * std::cos(theta));
        X.coords.push_back(r * std::sin(theta));
        X.coords.push_back(z);
    }
    return X;
}

} // namespace sphd

#endif
