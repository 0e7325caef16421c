#pragma once

#include <stdexcept>
#include <string>

namespace bayesrec {

/// Bad user input: malformed files, inconsistent shapes, contract violations.
/// Maps to CLI exit code 1.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure: a factorization that cannot be repaired, degenerate
/// systems. Maps to CLI exit code 2.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace bayesrec
