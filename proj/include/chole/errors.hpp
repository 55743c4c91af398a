#pragma once

#include <stdexcept>
#include <string>

namespace chole {

// Invalid parameters: negative radii, out-of-range shapes, wrong variant.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The hole region is not contained in the droplet as required.
class ContainmentError : public DomainError {
 public:
  using DomainError::DomainError;
};

// The (potential, region) pair has no implemented formula.
class NotCoveredError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class PoleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BranchCutError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Numerical tolerance not reached. Carries the best available estimate.
class ToleranceError : public std::runtime_error {
 public:
  ToleranceError(const std::string& what, double estimate, double error)
      : std::runtime_error(what), estimate_(estimate), error_(error) {}
  double estimate() const { return estimate_; }
  double error() const { return error_; }

 private:
  double estimate_;
  double error_;
};

}  // namespace chole
