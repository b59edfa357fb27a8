#pragma once

#include "cirlan/errors.hpp"

namespace cirlan {

// Evaluation strategy for log I_nu(x). Selection is a pure function of
// (nu, x); the switchover points are validated by overlap tests.
enum class BesselRegime { SeriesSmallArg, AsymptoticLargeArg, UniformLargeOrder };

BesselRegime bessel_regime(double nu, double x);

// log I_nu(x) for nu >= 0, x >= 0. Returns -inf for (nu > 0, x = 0) and
// 0 for (nu = 0, x = 0). Everything is evaluated in log scale so the
// likelihood layer can combine it with exponential prefactors that would
// overflow on their own.
double log_bessel_i(double nu, double x);

// log( e^{-x} I_nu(x) ). The exponentially scaled form is the one the
// transition density actually needs: for small time steps the argument is
// O(1/dt) and log I_nu(x) - x must be formed without cancellation.
double log_bessel_i_scaled(double nu, double x);

// log Gamma(z) for z > 0, computed in extended precision internally.
double log_gamma(double z);

// Regularized incomplete gamma functions P(s, x) and Q(s, x) = 1 - P(s, x).
double regularized_gamma_p(double s, double x);
double regularized_gamma_q(double s, double x);

// Standard normal CDF.
double normal_cdf(double x);

}  // namespace cirlan
