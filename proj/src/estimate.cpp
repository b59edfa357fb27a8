#include "cirlan/estimate.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "cirlan/likelihood.hpp"
#include "cirlan/parallel.hpp"

namespace cirlan {

namespace {

double loglik_if_valid(const Path& path, double sigma, double a, double b) {
  if (!(a >= sigma)) return std::numeric_limits<double>::quiet_NaN();
  return path_loglik(CirParams::unchecked(a, b, sigma, path.values[0]), path);
}

}  // namespace

EstimateResult mle_discretized(const Path& path, double sigma) {
  if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
  const std::int64_t n = path.steps();
  const double delta = path.delta;
  double inv_sum = 0.0;
  double sum = 0.0;
  double d1 = 0.0;
  for (std::int64_t k = 0; k < n; ++k) {
    const double x = path.values[k];
    inv_sum += 1.0 / x;
    sum += x;
    d1 += (path.values[k + 1] - x) / x;
  }
  const double s1 = delta * inv_sum;
  const double s2 = delta * sum;
  const double horizon = delta * static_cast<double>(n);
  const double d2 = path.values[n] - path.values[0];

  EstimateResult result;
  const double det = horizon * horizon - s1 * s2;  // <= 0 by Cauchy-Schwarz
  if (!(std::fabs(det) > 1e-12 * s1 * s2)) {
    if (d1 == 0.0 && d2 == 0.0) {
      result.a_hat = 0.0;
      result.b_hat = 0.0;
      result.converged = true;
      result.boundary_warning = true;
      result.loglik_at_optimum = std::numeric_limits<double>::quiet_NaN();
      return result;
    }
    throw DegenerateDesign("discretized MLE normal equations are singular");
  }
  result.a_hat = (horizon * d2 - s2 * d1) / det;
  result.b_hat = (s1 * d2 - horizon * d1) / det;
  result.converged = true;
  result.boundary_warning = result.a_hat < sigma;
  result.loglik_at_optimum = loglik_if_valid(path, sigma, result.a_hat, result.b_hat);
  return result;
}

EstimateResult mle_exact(const Path& path, double sigma, Eigen::Vector2d init,
                         const OptimOptions& opts) {
  if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
  if (!(init[0] >= sigma)) throw DomainError("init must satisfy a >= sigma");

  const auto clamp_a = [sigma](Eigen::Vector2d p) {
    if (p[0] < sigma) p[0] = 2.0 * sigma - p[0];  // reflect at the boundary
    if (p[0] < sigma) p[0] = sigma;               // very large overshoot
    return p;
  };
  const auto objective = [&](const Eigen::Vector2d& p) {
    return path_loglik(CirParams::unchecked(p[0], p[1], sigma, path.values[0]), path);
  };

  std::array<Eigen::Vector2d, 3> vertex = {
      init, clamp_a(init + Eigen::Vector2d(0.1, 0.0)),
      init + Eigen::Vector2d(0.0, 0.1)};
  std::array<double, 3> value;
  for (int i = 0; i < 3; ++i) value[i] = objective(vertex[i]);

  const double init_value = value[0];
  EstimateResult result;
  int iter = 0;
  for (; iter < opts.max_iter; ++iter) {
    // Sort descending: vertex[0] best (largest log-likelihood).
    std::array<int, 3> order = {0, 1, 2};
    std::sort(order.begin(), order.end(), [&](int i, int j) { return value[i] > value[j]; });
    std::array<Eigen::Vector2d, 3> sv;
    std::array<double, 3> sf;
    for (int i = 0; i < 3; ++i) {
      sv[i] = vertex[order[i]];
      sf[i] = value[order[i]];
    }
    vertex = sv;
    value = sf;

    const double diameter = std::max((vertex[0] - vertex[1]).norm(),
                                     std::max((vertex[0] - vertex[2]).norm(),
                                              (vertex[1] - vertex[2]).norm()));
    if (diameter < opts.xtol) {
      result.converged = true;
      break;
    }

    const Eigen::Vector2d centroid = 0.5 * (vertex[0] + vertex[1]);
    const Eigen::Vector2d reflected = clamp_a(centroid + (centroid - vertex[2]));
    const double f_reflected = objective(reflected);
    if (f_reflected > value[0]) {
      const Eigen::Vector2d expanded = clamp_a(centroid + 2.0 * (centroid - vertex[2]));
      const double f_expanded = objective(expanded);
      if (f_expanded > f_reflected) {
        vertex[2] = expanded;
        value[2] = f_expanded;
      } else {
        vertex[2] = reflected;
        value[2] = f_reflected;
      }
    } else if (f_reflected > value[1]) {
      vertex[2] = reflected;
      value[2] = f_reflected;
    } else {
      const Eigen::Vector2d contracted = clamp_a(centroid + 0.5 * (vertex[2] - centroid));
      const double f_contracted = objective(contracted);
      if (f_contracted > value[2]) {
        vertex[2] = contracted;
        value[2] = f_contracted;
      } else {
        for (int i = 1; i < 3; ++i) {
          vertex[i] = clamp_a(vertex[0] + 0.5 * (vertex[i] - vertex[0]));
          value[i] = objective(vertex[i]);
        }
      }
    }
  }

  int best = 0;
  for (int i = 1; i < 3; ++i) {
    if (value[i] > value[best]) best = i;
  }
  result.a_hat = std::max(vertex[best][0], sigma);
  result.b_hat = vertex[best][1];
  result.iterations = iter;
  result.loglik_at_optimum = std::max(value[best], init_value);
  if (value[best] < init_value) {
    // Never report a point worse than the starting one.
    result.a_hat = init[0];
    result.b_hat = init[1];
    result.loglik_at_optimum = init_value;
  }
  result.boundary_warning = result.a_hat <= sigma * (1.0 + 1e-12);
  return result;
}

EfficiencyReport efficiency_experiment(const CirParams& params0,
                                       const SamplingScheme& scheme, int m,
                                       EstimatorKind estimator, RngStream& rng,
                                       unsigned threads) {
  if (classify_regime(params0) != Regime::Subcritical) {
    throw WrongRegime("efficiency experiment targets the subcritical case");
  }
  if (m < 2) throw DomainError("efficiency experiment needs m >= 2");

  const double rate = std::sqrt(scheme.horizon());
  std::vector<Eigen::Vector2d> errors(m);
  const std::uint64_t seed = rng.seed();
  const std::uint64_t stream0 = rng.stream_id();
  parallel_for(
      m,
      [&](std::int64_t i) {
        RngStream path_rng(seed, stream0 + static_cast<std::uint64_t>(i));
        const Path path = simulate_path(params0, scheme, path_rng);
        EstimateResult est = mle_discretized(path, params0.sigma);
        if (estimator == EstimatorKind::Exact) {
          Eigen::Vector2d init(std::max(est.a_hat, params0.sigma), est.b_hat);
          est = mle_exact(path, params0.sigma, init);
        }
        errors[i] = rate * Eigen::Vector2d(est.a_hat - params0.a, est.b_hat - params0.b);
      },
      threads);

  EfficiencyReport report;
  report.m = m;
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  for (const auto& e : errors) mean += e;
  mean /= static_cast<double>(m);
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  for (const auto& e : errors) {
    const Eigen::Vector2d centered = e - mean;
    cov += centered * centered.transpose();
  }
  cov /= static_cast<double>(m - 1);
  report.mean_error = mean / rate;
  report.sample_cov_scaled = cov;
  report.crlb = fisher_info_subcritical(params0).inverse();
  double max_rel = 0.0;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      max_rel = std::max(max_rel, std::fabs(cov(r, c) - report.crlb(r, c)) /
                                      std::fabs(report.crlb(r, c)));
    }
  }
  report.max_rel_dev = max_rel;
  return report;
}

}  // namespace cirlan
