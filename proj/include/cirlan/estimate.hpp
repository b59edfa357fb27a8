#pragma once

#include <Eigen/Core>
#include <cstdint>

#include "cirlan/core.hpp"
#include "cirlan/rng.hpp"
#include "cirlan/sim.hpp"

namespace cirlan {

struct EstimateResult {
  double a_hat = 0.0;
  double b_hat = 0.0;
  bool converged = false;
  int iterations = 0;
  double loglik_at_optimum = 0.0;
  // Set when the estimate sits at or below the a = sigma boundary.
  bool boundary_warning = false;
};

// Discretization of the time-continuous MLE: left-endpoint Riemann sums for
// the time integrals, telescoping / sum of relative increments for the
// stochastic integrals. With
//   S1 = delta sum 1/x_k, S2 = delta sum x_k, T = n delta,
//   D1 = sum (x_{k+1} - x_k)/x_k, D2 = x_n - x_0,
// solves [S1, -T; T, -S2] (a, b)' = (D1, D2)'. Throws DegenerateDesign when
// the system is numerically singular with a nonzero right-hand side; a
// singular system with zero increments returns (0, 0) flagged.
EstimateResult mle_discretized(const Path& path, double sigma);

struct OptimOptions {
  double xtol = 1e-7;
  int max_iter = 500;
};

// Derivative-free (Nelder-Mead) maximization of the exact discrete
// log-likelihood over {a >= sigma} x R, with reflection at the boundary.
// converged = false when max_iter is hit before the simplex collapses.
EstimateResult mle_exact(const Path& path, double sigma, Eigen::Vector2d init,
                         const OptimOptions& opts = {});

enum class EstimatorKind { Discretized, Exact };

struct EfficiencyReport {
  int m = 0;
  Eigen::Vector2d mean_error;
  Eigen::Matrix2d sample_cov_scaled;  // covariance of sqrt(n delta)-scaled errors
  Eigen::Matrix2d crlb;               // inverse asymptotic Fisher information
  double max_rel_dev = 0.0;
};

// Monte Carlo comparison of the rate-scaled estimator covariance against the
// Cramer-Rao bound. Subcritical only (deterministic information).
EfficiencyReport efficiency_experiment(const CirParams& params0,
                                       const SamplingScheme& scheme, int m,
                                       EstimatorKind estimator, RngStream& rng,
                                       unsigned threads = 0);

}  // namespace cirlan
