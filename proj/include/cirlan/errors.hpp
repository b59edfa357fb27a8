#pragma once

#include <stdexcept>
#include <string>

namespace cirlan {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid argument value (nonpositive step, negative order, ...).
struct DomainError : Error {
  using Error::Error;
};

// Operation called with parameters outside the regime it is defined for.
struct WrongRegime : Error {
  using Error::Error;
};

// Critical-case rates need log(n*delta) > 0.
struct CriticalHorizonTooShort : Error {
  using Error::Error;
};

// Perturbed drift level a_n would drop below sigma.
struct AlternativeLeavesParameterSpace : Error {
  using Error::Error;
};

// Log-likelihood ratios are only defined for a shared diffusion scale.
struct SigmaMismatch : Error {
  using Error::Error;
};

// Finite-difference step would push a below sigma.
struct StepLeavesDomain : Error {
  using Error::Error;
};

// Normal equations of the discretized MLE are numerically singular.
struct DegenerateDesign : Error {
  using Error::Error;
};

// A critical/supercritical limit log-LR was requested without a limit draw.
struct MissingDraw : Error {
  using Error::Error;
};

struct EmptySample : Error {
  using Error::Error;
};

}  // namespace cirlan
