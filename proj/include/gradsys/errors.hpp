#pragma once

#include <stdexcept>
#include <string>

namespace gradsys {

/// Raised when an operation is called outside its precondition.
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// Exponent tuple violates the admissibility inequalities; the message names
/// the inequality that failed.
class AdmissibilityError : public DomainError {
 public:
  explicit AdmissibilityError(const std::string& what) : DomainError(what) {}
};

/// Linear solver failed to reach its tolerance inside the iteration cap.
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

/// Adaptive radial quadrature could not converge (divergent integrand).
class QuadratureError : public std::runtime_error {
 public:
  explicit QuadratureError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gradsys
