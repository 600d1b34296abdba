#ifndef SPHD_ERRORS_HPP
#define SPHD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sphd {

// Bad arguments, malformed files, violated hypotheses. CLI exit code 2.
class invalid_input : public std::runtime_error {
public:
    explicit invalid_input(const std::string& msg) : std::runtime_error(msg) {}
};

// Inputs on which the requested quantity is genuinely undefined
// (duplicate points for energies, antipodal pairs for kernel splits).
// CLI exit code 3.
class singular_input : public std::runtime_error {
public:
    explicit singular_input(const std::string& msg) : std::runtime_error(msg) {}
};

// Adaptive quadrature could not reach the requested tolerance.
// Carries the best error estimate actually achieved.
class quadrature_error : public std::runtime_error {
public:
    quadrature_error(const std::string& msg, double achieved)
        : std::runtime_error(msg + " (achieved error estimate " + std::to_string(achieved) + ")"),
          achieved_estimate(achieved) {}
    double achieved_estimate;
};

// A quantity that is provably nonnegative came out materially negative,
// or similar broken internal invariants. Not a user error.
class internal_error : public std::logic_error {
public:
    explicit internal_error(const std::string& msg) : std::logic_error(msg) {}
};

} // namespace sphd

#endif
