#pragma once

#include <stdexcept>
#include <string>

namespace qfock {

/// Base class for all domain errors raised by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Two operands live on different grids (grids compare element-wise).
struct GridMismatch : Error {
    explicit GridMismatch(const std::string& msg) : Error(msg) {}
};

/// A cell index is outside the grid.
struct IndexOutOfRange : Error {
    explicit IndexOutOfRange(const std::string& msg) : Error(msg) {}
};

/// An exponential-vector existence condition is violated
/// (||f||_inf >= 1/2, or ||f||_inf * ||g||_inf >= 1/4 for series work).
struct ExistenceViolation : Error {
    explicit ExistenceViolation(const std::string& msg) : Error(msg) {}
};

/// A truncated series failed to reach its tolerance within the term cap.
struct NoConvergence : Error {
    explicit NoConvergence(const std::string& msg) : Error(msg) {}
};

/// The normal-ordering rewriter produced more terms than the budget allows.
struct BudgetExceeded : Error {
    explicit BudgetExceeded(const std::string& msg) : Error(msg) {}
};

/// An intermediate or final value exceeds double range.
struct Overflow : Error {
    explicit Overflow(const std::string& msg) : Error(msg) {}
};

/// Malformed user input (job files, operator specs, bad configuration).
struct InputError : Error {
    explicit InputError(const std::string& msg) : Error(msg) {}
};

/// An operator fails the contraction precondition of a battery.
struct NotAContraction : Error {
    explicit NotAContraction(const std::string& msg) : Error(msg) {}
};

}  // namespace qfock
