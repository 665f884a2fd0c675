#pragma once

#include <stdexcept>
#include <string>

namespace sdecomp {

/// Precondition or type-invariant violation (length/rate mismatch, bad config).
class ContractViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// NaN/Inf produced inside an iterative solver.
class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Fewer extrema than needed to build spline envelopes.
class NotEnoughExtrema : public std::runtime_error {
public:
    NotEnoughExtrema() : std::runtime_error("not enough extrema for envelope interpolation") {}
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
    if (!condition) throw ContractViolation(message);
}

}  // namespace sdecomp
