#pragma once

#include <stdexcept>
#include <string>

namespace taillab {

enum class ErrorKind {
  InvalidArgument,
  Resolution,          // grid does not resolve an orbital
  GridMismatch,
  Domain,              // evaluation point outside the validity region
  SingularDenominator, // U_eff - E crosses zero inside the series window
  Conditioning,        // banded system is (nearly) singular
  Truncation,          // bound orbital support touches the grid edge
  Accuracy,            // quadrature failed the order-doubling test
  InsufficientOscillations,
  NoisyProfile,
  NotPowerLaw,
  Solver,              // chemical potential bisection failed
};

const char *to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string &what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

} // namespace taillab
