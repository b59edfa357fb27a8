#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cirlan/errors.hpp"

namespace cirlan {

// Model dX = (a - b X) dt + sqrt(2 sigma X) dB, X_0 = x0.
// a >= sigma > 0 keeps the process strictly positive; sigma is a known
// constant throughout the toolkit, only (a, b) are treated as unknown.
struct CirParams {
  double a;
  double b;
  double sigma;
  double x0;

  CirParams(double a_, double b_, double sigma_, double x0_);

  // Skips validation. For internal process variants (e.g. a zero-reversion
  // process started from 0) and for drift-only test configurations.
  static CirParams unchecked(double a_, double b_, double sigma_, double x0_);

  // Order of the Bessel function in the transition density: a/sigma - 1.
  double bessel_order() const { return a / sigma - 1.0; }

 private:
  CirParams() = default;
};

enum class Regime { Subcritical, Critical, Supercritical };

const char* to_string(Regime regime);

// Equidistant observation grid t_k = k * delta, k = 0..n.
struct SamplingScheme {
  std::int64_t n;
  double delta;

  SamplingScheme(std::int64_t n_, double delta_);

  double horizon() const { return static_cast<double>(n) * delta; }
};

// Perturbation z = (u, v) applied at the regime's local rates.
struct LocalAlternative {
  double u = 0.0;
  double v = 0.0;
};

// Local scales (phi_1n, phi_2n) for the drift pair (a, b).
struct RatePair {
  double phi1;
  double phi2;
};

inline double condition_a_threshold() { return 5.0 + 3.0 * 1.4142135623730951; }

// Sign of b decides the case: b > 0 subcritical, b = 0 critical, b < 0
// supercritical. Exact comparison on the stored value.
Regime classify_regime(const CirParams& params);

// a/sigma > 5 + 3*sqrt(2).
bool check_condition_a(const CirParams& params);

// Regime-dependent local rates:
//   subcritical   (1/sqrt(n delta), 1/sqrt(n delta))
//   critical      (1/sqrt(log(n delta)), 1/(n delta)), needs n delta > 1
//   supercritical (1, exp(b0 n delta / 2))
RatePair local_rates(const CirParams& params0, const SamplingScheme& scheme);

// (a0 + u phi1, b0 + v phi2, sigma, x0) for explicitly supplied rates.
CirParams local_alternative_params_with_rates(const CirParams& params0,
                                              const RatePair& rates,
                                              const LocalAlternative& z);

CirParams local_alternative_params(const CirParams& params0,
                                   const SamplingScheme& scheme,
                                   const LocalAlternative& z);

// Advisory single-scheme proxies for the asymptotic rate conditions. Never
// throws; returns human-readable warnings.
std::vector<std::string> validate_scheme(const CirParams& params0,
                                         const SamplingScheme& scheme,
                                         double tol);

}  // namespace cirlan
