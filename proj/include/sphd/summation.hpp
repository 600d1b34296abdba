#ifndef SPHD_SUMMATION_HPP
#define SPHD_SUMMATION_HPP

#include <cmath>
#include <cstddef>
#include <vector>

namespace sphd {

// Kahan-Babuska (Neumaier variant) compensated accumulator.
// add() is branch-cheap; total() folds the carry back in.
class KahanSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            carry_ += (sum_ - t) + x;
        else
            carry_ += (x - t) + sum_;
        sum_ = t;
    }
    // Merge another accumulator; order of merges matters for bit-identity,
    // callers that care must merge in a fixed order.
    void merge(const KahanSum& o) {
        add(o.sum_);
        add(o.carry_);
    }
    double total() const { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

// Sum a vector in index order with compensation. Deterministic by construction.
inline double compensated_total(const std::vector<double>& xs) {
    KahanSum acc;
    for (double x : xs) acc.add(x);
    return acc.total();
}

} // namespace sphd

#endif
