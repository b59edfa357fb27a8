#include "cirlan/likelihood.hpp"

#include <cmath>

#include "cirlan/specfun.hpp"

namespace cirlan {

double log_transition_density(const CirParams& params, double dt, double x,
                              double y) {
  if (!(dt > 0.0)) throw DomainError("dt must be positive");
  if (!(x > 0.0)) throw DomainError("transition start must be positive");
  if (!(y > 0.0)) throw DomainError("transition end must be positive");
  const TransitionConstants tc = transition_constants(params, dt);
  const double nu = params.bessel_order();
  const double xm = x * tc.em;
  const double w = 2.0 * std::sqrt(xm * y) / tc.c;
  const double gap = std::sqrt(xm) - std::sqrt(y);
  return -std::log(tc.c) - gap * gap / tc.c +
         0.5 * nu * (std::log(y) - std::log(x) + params.b * dt) +
         log_bessel_i_scaled(nu, w);
}

double transition_cdf(const CirParams& params, double dt, double x, double y) {
  if (!(dt > 0.0)) throw DomainError("dt must be positive");
  if (!(x >= 0.0)) throw DomainError("transition start must be nonnegative");
  if (!(y >= 0.0)) throw DomainError("transition end must be nonnegative");
  if (y == 0.0) return 0.0;
  const TransitionConstants tc = transition_constants(params, dt);
  const double lam = x > 0.0 ? 0.5 * tc.lambda(x) : 0.0;
  const double scaled = y / tc.c;
  if (lam == 0.0) return regularized_gamma_p(tc.shape, scaled);
  if (lam > 1e6) {
    throw DomainError("transition_cdf: noncentrality too large for mixture sum");
  }
  // Poisson-weighted mixture, expanded outward from the modal count.
  const long kc = static_cast<long>(lam);
  const double log_lam = std::log(lam);
  const double log_w0 = kc * log_lam - lam - std::lgamma(kc + 1.0);
  double cdf = 0.0;
  double w = std::exp(log_w0);
  for (long k = kc; k >= 0; --k) {
    cdf += w * regularized_gamma_p(tc.shape + k, scaled);
    if (w < 1e-18 && k < kc) break;
    w *= k / lam;
  }
  w = std::exp(log_w0);
  for (long k = kc + 1; k < kc + 2000000L; ++k) {
    w *= lam / k;
    cdf += w * regularized_gamma_p(tc.shape + k, scaled);
    if (w < 1e-18) break;
  }
  return std::min(cdf, 1.0);
}

double path_loglik(const CirParams& params, const Path& path) {
  double total = 0.0;
  for (std::int64_t k = 0; k < path.steps(); ++k) {
    total += log_transition_density(params, path.delta, path.values[k],
                                    path.values[k + 1]);
  }
  return total;
}

double loglr(const CirParams& params0, const CirParams& params1, const Path& path) {
  if (params0.sigma != params1.sigma) {
    throw SigmaMismatch("log-likelihood ratio needs a shared sigma");
  }
  return path_loglik(params1, path) - path_loglik(params0, path);
}

ScorePair score_main_term(const CirParams& params, double dt, double x, double y) {
  if (!(dt > 0.0) || !(x > 0.0) || !(y > 0.0)) {
    throw DomainError("score_main_term needs positive dt, x, y");
  }
  const double centered = y - x - (params.a - params.b * x) * dt;
  const double s_a = centered / (2.0 * params.sigma * x);
  return {s_a, -centered / (2.0 * params.sigma)};
}

ScorePair score_fd(const CirParams& params, double dt, double x, double y,
                   double h_a, double h_b) {
  if (h_a == 0.0) h_a = std::max(1e-5, 1e-7 * std::fabs(params.a));
  if (h_b == 0.0) h_b = std::max(1e-5, 1e-7 * std::fabs(params.b));
  if (!(params.a - h_a >= params.sigma)) {
    throw StepLeavesDomain("finite-difference step in a crosses a = sigma");
  }
  const CirParams a_plus = CirParams::unchecked(params.a + h_a, params.b, params.sigma, params.x0);
  const CirParams a_minus = CirParams::unchecked(params.a - h_a, params.b, params.sigma, params.x0);
  const CirParams b_plus = CirParams::unchecked(params.a, params.b + h_b, params.sigma, params.x0);
  const CirParams b_minus = CirParams::unchecked(params.a, params.b - h_b, params.sigma, params.x0);
  ScorePair score;
  score.s_a = (log_transition_density(a_plus, dt, x, y) -
               log_transition_density(a_minus, dt, x, y)) /
              (2.0 * h_a);
  score.s_b = (log_transition_density(b_plus, dt, x, y) -
               log_transition_density(b_minus, dt, x, y)) /
              (2.0 * h_b);
  return score;
}

Eigen::Matrix2d fisher_info_subcritical(const CirParams& params0) {
  if (!(params0.b > 0.0)) throw WrongRegime("subcritical information needs b0 > 0");
  if (!(params0.a > params0.sigma)) {
    throw DomainError("subcritical information needs a0 > sigma");
  }
  const double scale = 1.0 / (2.0 * params0.sigma);
  Eigen::Matrix2d info;
  info << scale * params0.b / (params0.a - params0.sigma), -scale,
          -scale, scale * params0.a / params0.b;
  return info;
}

double critical_info_deterministic(const CirParams& params0) {
  if (!(params0.a > params0.sigma)) {
    throw DomainError("critical information needs a0 > sigma");
  }
  return 1.0 / (2.0 * params0.sigma * (params0.a - params0.sigma));
}

}  // namespace cirlan
