#pragma once

#include <stdexcept>
#include <string>

namespace primesum {

/// Argument outside the mathematical domain of a formula (e.g. n < 3 where ln ln n is needed).
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Index not covered by a prime store or scan range.
class out_of_range : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Request exceeds the configured memory budget.
class resource_exhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Adaptive quadrature hit its recursion cap before meeting the tolerance.
class non_convergence : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input that cannot support the requested fit or search.
class degenerate_input : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or corrupt cache file.
class format_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace primesum
