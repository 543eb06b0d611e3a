#pragma once

#include <stdexcept>
#include <string>

namespace fieldent {

// Input fails a structural precondition (non-symmetric matrix, bad index set, ...).
class invalid_state_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A symplectic eigenvalue violates the uncertainty bound mu >= 1.
class unphysical_state_error : public std::domain_error {
 public:
  unphysical_state_error(const std::string& msg, double offending)
      : std::domain_error(msg), offending_value(offending) {}
  double offending_value;
};

// Quadrature or eigensolver did not reach the requested accuracy.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& msg, double partial = 0.0,
                           double residual = 0.0)
      : std::runtime_error(msg), partial_value(partial), residual_norm(residual) {}
  double partial_value;
  double residual_norm;
};

}  // namespace fieldent
