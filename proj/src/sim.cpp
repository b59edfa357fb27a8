#include "cirlan/sim.hpp"

#include <cmath>
#include <limits>

namespace cirlan {

Path::Path(double t0_, double delta_, Eigen::VectorXd values_)
    : t0(t0_), delta(delta_), values(std::move(values_)) {
  if (!(delta > 0.0)) throw DomainError("path needs a positive grid step");
  if (values.size() < 2) throw DomainError("path needs at least two values");
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0)) throw DomainError("path values must be strictly positive");
  }
}

TransitionConstants transition_constants(const CirParams& params, double dt) {
  if (!(dt > 0.0)) throw DomainError("dt must be positive");
  const double bdt = params.b * dt;
  TransitionConstants tc;
  tc.em = std::exp(-bdt);
  // -expm1(-b dt)/b is exact through b -> 0; the explicit switch keeps the
  // b = 0 formula bit-reproducible near the critical point.
  tc.c = std::fabs(bdt) < 1e-10 ? params.sigma * dt
                                : params.sigma * (-std::expm1(-bdt)) / params.b;
  tc.shape = params.a / params.sigma;
  return tc;
}

double exact_transition_sample(const CirParams& params, double x, double dt,
                               RngStream& rng) {
  if (!(x >= 0.0)) throw DomainError("transition start must be nonnegative");
  const TransitionConstants tc = transition_constants(params, dt);
  const double k = x > 0.0 ? rng.poisson(0.5 * tc.lambda(x)) : 0.0;
  return rng.gamma(tc.shape + k, tc.c);
}

Path simulate_path(const CirParams& params, const SamplingScheme& scheme,
                   RngStream& rng) {
  Eigen::VectorXd values(scheme.n + 1);
  values[0] = params.x0;
  double x = params.x0;
  for (std::int64_t k = 1; k <= scheme.n; ++k) {
    x = exact_transition_sample(params, x, scheme.delta, rng);
    values[k] = x;
  }
  return Path(0.0, scheme.delta, std::move(values));
}

Path simulate_path_euler_symmetrized(const CirParams& params,
                                     const SamplingScheme& scheme,
                                     int substeps, RngStream& rng) {
  if (substeps < 1) throw DomainError("substeps must be >= 1");
  const double h = scheme.delta / substeps;
  const double sqrt_h = std::sqrt(h);
  Eigen::VectorXd values(scheme.n + 1);
  values[0] = params.x0;
  double x = params.x0;
  for (std::int64_t k = 1; k <= scheme.n; ++k) {
    for (int j = 0; j < substeps; ++j) {
      const double diff = std::sqrt(2.0 * params.sigma * std::max(x, 0.0));
      x = std::fabs(x + (params.a - params.b * x) * h + diff * sqrt_h * rng.normal());
    }
    values[k] = x > 0.0 ? x : std::numeric_limits<double>::min();
  }
  return Path(0.0, scheme.delta, std::move(values));
}

namespace {

// Zero-reversion process with drift `a`, simulated exactly on a uniform grid
// from `start`; returns endpoint and trapezoidal time integral.
struct EndpointIntegral {
  double endpoint;
  double integral;
};

EndpointIntegral simulate_drift_only(double a, double sigma, double start,
                                     double total_time, int substeps,
                                     RngStream& rng) {
  const CirParams flat = CirParams::unchecked(a, 0.0, sigma, 1.0);
  const double h = total_time / substeps;
  double x = start;
  double acc = 0.5 * x;
  for (int j = 1; j < substeps; ++j) {
    x = exact_transition_sample(flat, x, h, rng);
    acc += x;
  }
  x = exact_transition_sample(flat, x, h, rng);
  acc += 0.5 * x;
  return {x, acc * h};
}

}  // namespace

CriticalLimitDraw simulate_critical_limit(const CirParams& params0, int substeps,
                                          RngStream& rng) {
  if (substeps < 2) throw DomainError("substeps must be >= 2");
  const EndpointIntegral ei =
      simulate_drift_only(params0.a, params0.sigma, 0.0, 1.0, substeps, rng);
  return {ei.endpoint, ei.integral, rng.normal()};
}

SupercriticalLimitDraw simulate_supercritical_limit(const CirParams& params0,
                                                    int substeps, RngStream& rng) {
  if (!(params0.b < 0.0)) {
    throw WrongRegime("supercritical limit draw needs b0 < 0");
  }
  if (substeps < 2) throw DomainError("substeps must be >= 2");
  const double total_time = -1.0 / params0.b;
  const EndpointIntegral ei = simulate_drift_only(params0.a, params0.sigma,
                                                  params0.x0, total_time,
                                                  substeps, rng);
  SupercriticalLimitDraw draw;
  draw.r_end = ei.endpoint;
  draw.int_r = ei.integral;
  draw.v_stat = std::log(draw.r_end) - std::log(params0.x0) -
                (params0.a - params0.sigma) * draw.int_r;
  draw.z1 = rng.normal();
  return draw;
}

double sample_limit_loglr(const CirParams& params0, const LocalAlternative& z,
                          RngStream& rng) {
  if (classify_regime(params0) != Regime::Subcritical) {
    throw MissingDraw("critical/supercritical limit log-LR needs a simulated draw");
  }
  if (!(params0.a > params0.sigma)) throw DomainError("limit law needs a > sigma");
  // q = z' I(a0,b0) z with the subcritical information matrix
  // (1/2 sigma) [ b/(a - sigma), -1; -1, a/b ].
  const double q = (z.u * z.u * params0.b / (params0.a - params0.sigma) -
                    2.0 * z.u * z.v + z.v * z.v * params0.a / params0.b) /
                   (2.0 * params0.sigma);
  if (q == 0.0) return 0.0;
  return -0.5 * q + std::sqrt(q) * rng.normal();
}

double sample_limit_loglr(const CirParams& params0, const LocalAlternative& z,
                          const CriticalLimitDraw& draw) {
  if (!(params0.a > params0.sigma)) throw DomainError("limit law needs a > sigma");
  const double two_sigma = 2.0 * params0.sigma;
  const double info_a = 1.0 / (two_sigma * (params0.a - params0.sigma));
  const double score = z.u * draw.g * std::sqrt(info_a) +
                       z.v * (params0.a - draw.r1) / two_sigma;
  const double quad = z.u * z.u * info_a + z.v * z.v * draw.int_r / two_sigma;
  return score - 0.5 * quad;
}

double sample_limit_loglr(const CirParams& params0, const LocalAlternative& z,
                          const SupercriticalLimitDraw& draw) {
  if (!(params0.b < 0.0)) {
    throw WrongRegime("supercritical limit log-LR needs b0 < 0");
  }
  const double two_sigma = 2.0 * params0.sigma;
  const double info_b = -draw.r_end / params0.b / two_sigma;
  const double score = z.u * draw.v_stat / two_sigma +
                       z.v * std::sqrt(info_b) * draw.z1;
  const double quad = z.u * z.u * draw.int_r / two_sigma + z.v * z.v * info_b;
  return score - 0.5 * quad;
}

}  // namespace cirlan
