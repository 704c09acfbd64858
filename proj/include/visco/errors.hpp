#pragma once

#include <stdexcept>
#include <string>

namespace visco {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Raised when the flow map stops being a diffeomorphism (min J <= 0).
class SingularMap : public Error {
 public:
  explicit SingularMap(double min_jacobian)
      : Error("singular flow map: min J = " + std::to_string(min_jacobian)),
        min_jacobian_(min_jacobian) {}
  double min_jacobian() const { return min_jacobian_; }

 private:
  double min_jacobian_;
};

class NoConvergence : public Error {
 public:
  NoConvergence(int iterations, double residual)
      : Error("pressure fixed point did not converge after " + std::to_string(iterations) +
              " iterations (relative residual " + std::to_string(residual) + ")"),
        iterations_(iterations),
        residual_(residual) {}
  int iterations() const { return iterations_; }
  double residual() const { return residual_; }

 private:
  int iterations_;
  double residual_;
};

class StepRejected : public Error {
 public:
  using Error::Error;
};

class NonZeroMean : public Error {
 public:
  using Error::Error;
};

class OutOfRange : public Error {
 public:
  using Error::Error;
};

class NotDivergenceFree : public Error {
 public:
  using Error::Error;
};

class NonPositiveSamples : public Error {
 public:
  using Error::Error;
};

class WindowTooSmall : public Error {
 public:
  using Error::Error;
};

}  // namespace visco
