#ifndef SPHD_PARALLEL_HPP
#define SPHD_PARALLEL_HPP

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

#include "sphd/summation.hpp"

namespace sphd {

// How pairwise loops run. threads == 0 means hardware concurrency.
// deterministic == true fixes the reduction order so results are
// bit-identical across runs and across thread counts; false allows
// dynamic scheduling (results then agree only to ~1e-10 relative).
struct ExecPolicy {
    int threads = 0;
    bool deterministic = false;

    int resolved_threads() const {
        if (threads > 0) return threads;
        unsigned hc = std::thread::hardware_concurrency();
        return hc == 0 ? 1 : static_cast<int>(hc);
    }
};

namespace detail {

// Run fn(i) for i in [0, n) across threads. Static block split; no output
// ordering guarantees beyond fn itself writing to disjoint slots.
inline void parallel_for(std::size_t n, int nthreads, const std::function<void(std::size_t)>& fn) {
    if (nthreads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::size_t nt = std::min<std::size_t>(static_cast<std::size_t>(nthreads), n);
    std::vector<std::thread> pool;
    pool.reserve(nt);
    std::atomic<std::size_t> next{0};
    for (std::size_t k = 0; k < nt; ++k) {
        pool.emplace_back([&]() {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= n) break;
                fn(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace detail

// Sum row_sum(i) over i in [0, n).
//
// Deterministic mode: every row value is stored in a slot indexed by i and
// the reduction walks rows 0..n-1 with one compensated accumulator. The
// row values themselves must be deterministic (sequential inner loops);
// then the total is bit-identical for any thread count.
//
// Free mode: rows are claimed dynamically; each worker keeps its own
// compensated accumulator and the per-worker totals are merged in worker
// index order. Different thread counts regroup terms, so totals agree
// only to compensated-summation accuracy.
inline double parallel_row_sum(std::size_t n, const ExecPolicy& policy,
                               const std::function<double(std::size_t)>& row_sum) {
    int nthreads = policy.resolved_threads();
    if (policy.deterministic) {
        std::vector<double> rows(n, 0.0);
        detail::parallel_for(n, nthreads, [&](std::size_t i) { rows[i] = row_sum(i); });
        return compensated_total(rows);
    }
    if (nthreads <= 1 || n <= 1) {
        KahanSum acc;
        for (std::size_t i = 0; i < n; ++i) acc.add(row_sum(i));
        return acc.total();
    }
    std::size_t nt = std::min<std::size_t>(static_cast<std::size_t>(nthreads), n);
    std::vector<KahanSum> partial(nt);
    std::vector<std::thread> pool;
    pool.reserve(nt);
    std::atomic<std::size_t> next{0};
    for (std::size_t k = 0; k < nt; ++k) {
        pool.emplace_back([&, k]() {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= n) break;
                partial[k].add(row_sum(i));
            }
        });
    }
    for (auto& th : pool) th.join();
    KahanSum acc;
    for (std::size_t k = 0; k < nt; ++k) acc.merge(partial[k]);
    return acc.total();
}

} // namespace sphd

#endif
