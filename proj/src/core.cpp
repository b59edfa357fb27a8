#include "cirlan/core.hpp"

#include <cmath>
#include <sstream>

namespace cirlan {

namespace {

void require_finite(double value, const char* name) {
  if (!std::isfinite(value)) {
    throw DomainError(std::string(name) + " must be finite");
  }
}

}  // namespace

CirParams::CirParams(double a_, double b_, double sigma_, double x0_)
    : a(a_), b(b_), sigma(sigma_), x0(x0_) {
  require_finite(a, "a");
  require_finite(b, "b");
  require_finite(sigma, "sigma");
  require_finite(x0, "x0");
  if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
  if (!(a >= sigma)) throw DomainError("a must satisfy a >= sigma");
  if (!(x0 > 0.0)) throw DomainError("x0 must be positive");
}

CirParams CirParams::unchecked(double a_, double b_, double sigma_, double x0_) {
  CirParams p;
  p.a = a_;
  p.b = b_;
  p.sigma = sigma_;
  p.x0 = x0_;
  return p;
}

const char* to_string(Regime regime) {
  switch (regime) {
    case Regime::Subcritical: return "subcritical";
    case Regime::Critical: return "critical";
    case Regime::Supercritical: return "supercritical";
  }
  return "unknown";
}

SamplingScheme::SamplingScheme(std::int64_t n_, double delta_) : n(n_), delta(delta_) {
  if (n < 2) throw DomainError("scheme needs at least two steps");
  require_finite(delta, "delta");
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw DomainError("delta must lie in (0, 1]");
  }
}

Regime classify_regime(const CirParams& params) {
  if (params.b > 0.0) return Regime::Subcritical;
  if (params.b < 0.0) return Regime::Supercritical;
  return Regime::Critical;
}

bool check_condition_a(const CirParams& params) {
  return params.a / params.sigma > condition_a_threshold();
}

RatePair local_rates(const CirParams& params0, const SamplingScheme& scheme) {
  const double horizon = scheme.horizon();
  switch (classify_regime(params0)) {
    case Regime::Subcritical: {
      const double phi = 1.0 / std::sqrt(horizon);
      return {phi, phi};
    }
    case Regime::Critical: {
      if (!(horizon > 1.0)) {
        throw CriticalHorizonTooShort("critical rates need n*delta > 1");
      }
      return {1.0 / std::sqrt(std::log(horizon)), 1.0 / horizon};
    }
    case Regime::Supercritical:
      return {1.0, std::exp(params0.b * horizon / 2.0)};
  }
  throw Error("unreachable");
}

CirParams local_alternative_params_with_rates(const CirParams& params0,
                                              const RatePair& rates,
                                              const LocalAlternative& z) {
  require_finite(z.u, "u");
  require_finite(z.v, "v");
  const double a_n = params0.a + z.u * rates.phi1;
  const double b_n = params0.b + z.v * rates.phi2;
  if (!(a_n >= params0.sigma)) {
    std::ostringstream msg;
    msg << "perturbed drift level a_n = " << a_n << " drops below sigma = "
        << params0.sigma;
    throw AlternativeLeavesParameterSpace(msg.str());
  }
  return CirParams(a_n, b_n, params0.sigma, params0.x0);
}

CirParams local_alternative_params(const CirParams& params0,
                                   const SamplingScheme& scheme,
                                   const LocalAlternative& z) {
  return local_alternative_params_with_rates(params0, local_rates(params0, scheme), z);
}

std::vector<std::string> validate_scheme(const CirParams& params0,
                                         const SamplingScheme& scheme,
                                         double tol) {
  if (!(tol > 0.0)) throw DomainError("tol must be positive");
  std::vector<std::string> warnings;
  const double horizon = scheme.horizon();
  std::ostringstream msg;

  if (scheme.delta > tol) {
    msg << "step size delta = " << scheme.delta << " exceeds tol = " << tol
        << "; the high-frequency approximation may be poor";
    warnings.push_back(msg.str());
    msg.str({});
  }
  if (horizon < 1.0 / tol) {
    msg << "horizon n*delta = " << horizon << " is below 1/tol = " << 1.0 / tol
        << "; the infinite-horizon approximation may be poor";
    warnings.push_back(msg.str());
    msg.str({});
  }

  switch (classify_regime(params0)) {
    case Regime::Subcritical:
      // No extra decreasing-rate condition in the ergodic case.
      break;
    case Regime::Critical:
      if (horizon > 1.0) {
        const double ratio =
            static_cast<double>(scheme.n) * std::pow(scheme.delta, 1.5) / std::log(horizon);
        if (ratio > tol) {
          msg << "critical rate proxy n*delta^(3/2)/log(n*delta) = " << ratio
              << " exceeds tol = " << tol;
          warnings.push_back(msg.str());
          msg.str({});
        }
      }
      break;
    case Regime::Supercritical: {
      const double ratio = static_cast<double>(scheme.n) * scheme.delta * scheme.delta;
      if (ratio > tol) {
        msg << "supercritical rate proxy n*delta^2 = " << ratio << " exceeds tol = " << tol;
        warnings.push_back(msg.str());
        msg.str({});
      }
      break;
    }
  }
  return warnings;
}

}  // namespace cirlan
