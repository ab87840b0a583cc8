#pragma once

#include <stdexcept>
#include <string>

namespace stpca {

/// Precondition or API-contract violation (bad sizes, unnormalized input, ...).
class contract_error : public std::logic_error {
public:
    explicit contract_error(const std::string& what) : std::logic_error(what) {}
};

/// Requested object exceeds the configured desk-scale caps.
class size_error : public std::length_error {
public:
    explicit size_error(const std::string& what) : std::length_error(what) {}
};

/// Iterative solver failed to reach tolerance within its budget.
class convergence_error : public std::runtime_error {
public:
    convergence_error(const std::string& what, double best_value, int iterations)
        : std::runtime_error(what), best_value(best_value), iterations(iterations) {}
    double best_value = 0.0;
    int iterations = 0;
};

/// Degenerate starting state for a ratio estimator (zero denominator).
class degenerate_start_error : public std::runtime_error {
public:
    explicit degenerate_start_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace stpca
