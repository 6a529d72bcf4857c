#pragma once

#include <stdexcept>
#include <string>

namespace spinflip {

/// A zero of the field denominator whose numerators do not vanish with it.
class SingularityError : public std::runtime_error {
 public:
  SingularityError(double time, double residual);

  double time() const { return time_; }
  double residual() const { return residual_; }

 private:
  double time_;
  double residual_;
};

/// A numerical scheme failed its convergence gate.
class IntegratorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reference energy coincides with an eigenvalue of the eliminated block.
class DegenerateReferenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace spinflip
