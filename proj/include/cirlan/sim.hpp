#pragma once

#include <Eigen/Core>
#include <cstdint>

#include "cirlan/core.hpp"
#include "cirlan/rng.hpp"

namespace cirlan {

// A discretely observed trajectory on a uniform grid starting at t0.
// Values are strictly positive and there are at least two of them.
struct Path {
  double t0;
  double delta;
  Eigen::VectorXd values;

  Path(double t0_, double delta_, Eigen::VectorXd values_);

  std::int64_t steps() const { return values.size() - 1; }
};

// Scale, mean factor and shape of the transition law over one step:
// X_{t+dt} | X_t = x is Gamma-Poisson mixed with scale c, Poisson mean
// lambda(x)/2 and base shape a/sigma (the noncentral chi-squared reading of
// the CIR transition, Cox-Ingersoll-Ross 1985).
struct TransitionConstants {
  double c;      // sigma (1 - e^{-b dt}) / b, continued as sigma dt at b = 0
  double em;     // e^{-b dt}
  double shape;  // a / sigma

  double lambda(double x) const { return 2.0 * x * em / c; }
  double mean(double x) const { return x * em + shape * c; }
  double variance(double x) const { return c * c * (shape + lambda(x)); }
};

TransitionConstants transition_constants(const CirParams& params, double dt);

// One exact draw from the transition law: K ~ Poisson(lambda(x)/2), then
// Gamma(a/sigma + K, c). x = 0 is allowed (the auxiliary zero-start process).
double exact_transition_sample(const CirParams& params, double x, double dt,
                               RngStream& rng);

// Markov chain of exact transition draws from x0 on the scheme's grid.
Path simulate_path(const CirParams& params, const SamplingScheme& scheme,
                   RngStream& rng);

// Symmetrized Euler scheme x <- |x + (a - b x) h + sqrt(2 sigma max(x,0)) dW|
// on a refined sub-grid, recording every delta. Cross-check oracle only;
// zeros are repaired to the smallest positive double before recording.
Path simulate_path_euler_symmetrized(const CirParams& params,
                                     const SamplingScheme& scheme,
                                     int substeps, RngStream& rng);

// Endpoint and integral functionals of the auxiliary zero-reversion process
// R (drift a, no mean reversion) that make up the critical limit law, plus
// the independent standard normal used by the a-direction of that law.
struct CriticalLimitDraw {
  double r1;     // R_1 from R_0 = 0
  double int_r;  // trapezoid of int_0^1 R_s ds
  double g;      // independent standard normal
};

CriticalLimitDraw simulate_critical_limit(const CirParams& params0, int substeps,
                                          RngStream& rng);

// Same functionals on [0, -1/b0] started from x0, for the supercritical
// limit law; v_stat = log(r_end) - log(x0) - (a - sigma) int_r.
struct SupercriticalLimitDraw {
  double r_end;
  double int_r;
  double v_stat;
  double z1;  // independent standard normal
};

SupercriticalLimitDraw simulate_supercritical_limit(const CirParams& params0,
                                                    int substeps, RngStream& rng);

// One draw of the limit of the log-likelihood ratio under the local
// alternative z. Subcritical: closed-form Gaussian N(-q/2, q) with
// q = z' I(a0,b0) z. Critical/supercritical: quadratic form in the supplied
// limit draw. The rng overload throws MissingDraw outside the subcritical
// case.
double sample_limit_loglr(const CirParams& params0, const LocalAlternative& z,
                          RngStream& rng);
double sample_limit_loglr(const CirParams& params0, const LocalAlternative& z,
                          const CriticalLimitDraw& draw);
double sample_limit_loglr(const CirParams& params0, const LocalAlternative& z,
                          const SupercriticalLimitDraw& draw);

}  // namespace cirlan
