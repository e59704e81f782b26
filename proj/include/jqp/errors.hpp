#pragma once

#include <stdexcept>
#include <string>

namespace jqp {

// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Operands have incompatible matrix dimensions.
class DimensionMismatch : public Error {
  public:
    explicit DimensionMismatch(const std::string& what) : Error(what) {}
};

// An input failed a structural validity check (not Hermitian, not a state,
// not an idempotent, malformed scenario, ...).
class ValidationError : public Error {
  public:
    explicit ValidationError(const std::string& what) : Error(what) {}
};

// A conditional probability or expectation was requested on an event of
// probability (numerically) zero.
class ConditioningOnNull : public Error {
  public:
    explicit ConditioningOnNull(const std::string& what) : Error(what) {}
};

// A construction requiring compatibility was attempted on an incompatible
// input (e.g. a conditional expectation where none exists).
class IncompatibleError : public Error {
  public:
    explicit IncompatibleError(const std::string& what) : Error(what) {}
};

// A linear solve / fixed-point construction failed to meet its residual
// bound, or produced an internally inconsistent result.
class SolveError : public Error {
  public:
    explicit SolveError(const std::string& what) : Error(what) {}
};

// A matrix logarithm does not exist in the required branch (non-invertible
// kernel, or spectrum obstructing a real principal logarithm).
class LogarithmError : public Error {
  public:
    explicit LogarithmError(const std::string& what) : Error(what) {}
};

} // namespace jqp
