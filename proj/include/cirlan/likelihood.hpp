#pragma once

#include <Eigen/Core>

#include "cirlan/core.hpp"
#include "cirlan/sim.hpp"

namespace cirlan {

// log p(dt, x, y) of the CIR transition density, fully in log scale. The
// three factors of the closed-form density (scale, exponential, Bessel) are
// combined so that the large cancelling parts of the exponent and of
// log I_nu never appear individually:
//   log p = -log c - (sqrt(x e^{-b dt}) - sqrt(y))^2 / c
//           + (nu/2) log(y / (x e^{-b dt})) + log( e^{-w} I_nu(w) ),
// with w = 2 sqrt(x y e^{-b dt}) / c.
double log_transition_density(const CirParams& params, double dt, double x,
                              double y);

// CDF of the transition law as a Poisson mixture of regularized gamma
// functions. Intended for moderate noncentrality (quantile and GOF work).
double transition_cdf(const CirParams& params, double dt, double x, double y);

// Sum of step log-densities along the path's grid.
double path_loglik(const CirParams& params, const Path& path);

// path_loglik(params1) - path_loglik(params0); both must share sigma.
double loglr(const CirParams& params0, const CirParams& params1, const Path& path);

struct ScorePair {
  double s_a;
  double s_b;
};

// Leading term of the score occurring in the log-likelihood expansion:
//   s_a = (y - x - (a - b x) dt) / (2 sigma x),
//   s_b = -(y - x - (a - b x) dt) / (2 sigma).
ScorePair score_main_term(const CirParams& params, double dt, double x, double y);

// Central finite differences of log p in a and b. Passing a step of 0 picks
// the default max(1e-5, 1e-7 |a|). The a-step must keep a - h_a >= sigma.
ScorePair score_fd(const CirParams& params, double dt, double x, double y,
                   double h_a = 0.0, double h_b = 0.0);

// Asymptotic Fisher information of the subcritical case:
//   (1/2 sigma) [ b0/(a0 - sigma), -1; -1, a0/b0 ].
Eigen::Matrix2d fisher_info_subcritical(const CirParams& params0);

// Deterministic (a,a) entry of the critical information, 1/(2 sigma (a0 - sigma)).
double critical_info_deterministic(const CirParams& params0);

}  // namespace cirlan
