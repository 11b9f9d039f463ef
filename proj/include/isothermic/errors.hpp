#pragma once

#include <stdexcept>
#include <string>

namespace isothermic {

// Rejected input (parameters, coefficients, grids, CLI arguments).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The algebraic relation between b, c and the profile coefficients does not
// hold. residual() is the signed value of the first integral it implies.
class ConstraintError : public ValidationError {
 public:
  ConstraintError(const std::string& what, double residual)
      : ValidationError(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

// A stencil, patch or integration path reached a masked parameter point.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace isothermic
