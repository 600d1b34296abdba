#ifndef SPHD_GAMMAFN_HPP
#define SPHD_GAMMAFN_HPP

#include <cmath>
#include <string>

#include "sphd/errors.hpp"

namespace sphd {

// log (a)_n = log Gamma(n+a) - log Gamma(a), the rising factorial in log
// space. Restricted to a > 0 so both gamma arguments stay off the poles;
// callers that need negative a must multiply the finite product directly.
inline double pochhammer_log(double a, long n) {
    if (!(a > 0.0))
        throw invalid_input("pochhammer_log: requires a > 0, got a=" + std::to_string(a));
    if (n < 0)
        throw invalid_input("pochhammer_log: requires n >= 0");
    if (n == 0) return 0.0;   // (a)_0 = 1
    return std::lgamma(static_cast<double>(n) + a) - std::lgamma(a);
}

// (a)_n by direct multiplication; works for any real a, used for small-n
// cross checks and for Pochhammers with possibly nonpositive arguments.
inline double pochhammer_product(double a, long n) {
    double p = 1.0;
    for (long k = 0; k < n; ++k) p *= a + static_cast<double>(k);
    return p;
}

// Gamma(n+a) / Gamma(n+b) through log-gamma; grows like n^(a-b).
inline double gamma_ratio(long n, double a, double b) {
    double na = static_cast<double>(n) + a;
    double nb = static_cast<double>(n) + b;
    if (!(na > 0.0) || !(nb > 0.0))
        throw invalid_input("gamma_ratio: n+a and n+b must be positive, got n+a=" +
                            std::to_string(na) + ", n+b=" + std::to_string(nb));
    return std::exp(std::lgamma(na) - std::lgamma(nb));
}

// log of Gamma(x)/Gamma(y) for positive x, y; building block for the
// coefficient products that would overflow as plain gammas near n ~ 170.
inline double lgamma_ratio(double x, double y) {
    if (!(x > 0.0) || !(y > 0.0))
        throw invalid_input("lgamma_ratio: arguments must be positive");
    return std::lgamma(x) - std::lgamma(y);
}

} // namespace sphd

#endif
