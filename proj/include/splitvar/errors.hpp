#pragma once

#include <stdexcept>
#include <string>

namespace splitvar {

/// Base class for every error raised by the library. `kind()` is a stable
/// machine-readable tag used by the command line front end.
class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

private:
  std::string kind_;
};

/// Parameter outside the admissible domain of an operation.
class DomainError : public Error {
public:
  explicit DomainError(const std::string& m) : Error("DomainError", m) {}
};

/// Recession estimate did not settle: the density is not of linear growth.
class NonLinearGrowth : public Error {
public:
  explicit NonLinearGrowth(const std::string& m) : Error("NonLinearGrowth", m) {}
};

/// Conjugate search failures (non-concave objective, maximizer at the
/// search boundary in strict mode, argument outside the effective domain).
class ConjugateError : public Error {
public:
  ConjugateError(std::string kind, const std::string& m) : Error(std::move(kind), m) {}
};

/// A structural invariant of an input object is violated.
class InvariantError : public Error {
public:
  explicit InvariantError(const std::string& m) : Error("InvariantError", m) {}
};

/// Invalid configuration (schedule order, tolerances, unknown ids, ...).
class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& m) : Error("ConfigError", m) {}
};

/// Non-finite energy encountered during evaluation.
class OverflowError : public Error {
public:
  explicit OverflowError(const std::string& m) : Error("Overflow", m) {}
};

/// Negative curvature encountered in the discrete Hessian.
class NonConvexDetected : public Error {
public:
  explicit NonConvexDetected(const std::string& m) : Error("NonConvexDetected", m) {}
};

/// Solver did not reach its tolerance.
class SolverError : public Error {
public:
  explicit SolverError(const std::string& m) : Error("SolverError", m) {}
};

/// A numerical contract (e.g. weak duality) failed beyond its tolerance.
class ContractViolation : public Error {
public:
  explicit ContractViolation(const std::string& m) : Error("ContractViolation", m) {}
};

} // namespace splitvar
