#include "cirlan/specfun.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace cirlan {

namespace {

constexpr long double kPiL = 3.14159265358979323846264338327950288L;

// Branch switchover points. The power series is used whenever it is cheap
// and cancellation-free (all terms positive); the Hankel expansion needs
// x >> nu^2; everything in between goes through the uniform large-order
// expansion, shifted up in order where necessary.
constexpr double kSeriesMaxX = 30.0;
constexpr double kHankelMinX = 100.0;
constexpr double kUniformMinOrder = 40.0;
constexpr int kUniformTerms = 12;

void check_bessel_args(double nu, double x) {
  if (!(nu >= 0.0)) throw DomainError("bessel order must be nonnegative");
  if (!(x >= 0.0)) throw DomainError("bessel argument must be nonnegative");
}

// Ascending series I_nu(x) = sum_n (x/2)^{2n+nu} / (n! Gamma(nu+n+1)),
// summed relative to the leading term. Terms are positive, so the sum is
// cancellation-free; extended precision absorbs the accumulation error.
long double series_log(double nu, double x) {
  const long double q = static_cast<long double>(x) * x / 4.0L;
  long double term = 1.0L;
  long double sum = 1.0L;
  long double offset = 0.0L;
  for (long n = 1; n < 4000000L; ++n) {
    term *= q / (static_cast<long double>(n) * (static_cast<long double>(nu) + n));
    sum += term;
    if (term < sum * 1e-19L) break;
    if (sum > 1e4500L) {
      sum *= 1e-4500L;
      term *= 1e-4500L;
      offset += logl(1e4500L);
    }
  }
  const long double lead = static_cast<long double>(nu) * logl(static_cast<long double>(x) / 2.0L) -
                           lgammal(static_cast<long double>(nu) + 1.0L);
  return lead + logl(sum) + offset;
}

// Hankel expansion I_nu(x) ~ e^x / sqrt(2 pi x) * sum_k (-1)^k a_k(nu) / x^k
// with a_k(nu) = prod_{j<=k} (4nu^2 - (2j-1)^2) / (8^k k!). Used only where
// the terms reach 1e-19 relative, i.e. x >= max(100, nu^2). Returns the
// scaled value log(e^{-x} I_nu(x)).
long double hankel_log_scaled(double nu, double x) {
  const long double four_nu2 = 4.0L * static_cast<long double>(nu) * nu;
  long double term = 1.0L;
  long double sum = 1.0L;
  for (int k = 1; k <= 80; ++k) {
    const long double odd = 2.0L * k - 1.0L;
    term *= (odd * odd - four_nu2) / (8.0L * k * static_cast<long double>(x));
    sum += term;
    if (fabsl(term) < 1e-19L * fabsl(sum)) break;
  }
  return -0.5L * logl(2.0L * kPiL * static_cast<long double>(x)) + logl(sum);
}

// Polynomials u_k(t) of the uniform large-order expansion, built once from
// the recurrence u_{k+1} = t^2(1-t^2) u_k'/2 + (1/8) int_0^t (1-5 s^2) u_k ds
// (Olver 1974; DLMF 10.41.9). u_k has degree 3k.
const std::vector<std::vector<long double>>& olver_u_polynomials() {
  static const std::vector<std::vector<long double>> polys = [] {
    std::vector<std::vector<long double>> u(kUniformTerms + 1);
    u[0] = {1.0L};
    for (int k = 0; k < kUniformTerms; ++k) {
      const auto& c = u[k];
      const int d = static_cast<int>(c.size()) - 1;
      std::vector<long double> next(d + 4, 0.0L);
      for (int i = 1; i <= d; ++i) {
        const long double dc = c[i] * i;  // t^{i-1} coefficient of u_k'
        next[i + 1] += 0.5L * dc;
        next[i + 3] -= 0.5L * dc;
      }
      for (int i = 0; i <= d; ++i) {
        next[i + 1] += 0.125L * c[i] / (i + 1);
        next[i + 3] -= 0.625L * c[i] / (i + 3);
      }
      u[k + 1] = std::move(next);
    }
    return u;
  }();
  return polys;
}

// Uniform large-order expansion of I_mu(mu z) in scaled form
// log(e^{-x} I_mu(x)); accurate for mu >= kUniformMinOrder.
long double olver_log_scaled(double mu, double x) {
  const long double mul = mu;
  const long double z = static_cast<long double>(x) / mul;
  const long double root = sqrtl(1.0L + z * z);
  const long double t = 1.0L / root;
  const long double eta = root + logl(z / (1.0L + root));

  const auto& u = olver_u_polynomials();
  long double sum = 0.0L;
  long double mu_pow = 1.0L;
  for (int k = 0; k <= kUniformTerms; ++k) {
    const auto& c = u[k];
    long double poly = 0.0L;
    for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) {
      poly = poly * t + c[i];
    }
    sum += poly / mu_pow;
    mu_pow *= mul;
  }
  return mul * eta - static_cast<long double>(x) - 0.5L * logl(2.0L * kPiL * mul) -
         0.5L * logl(root) + logl(sum);
}

// Shift the order up to where the uniform expansion is accurate, then walk
// back down with I_{m-1} = I_{m+1} + (2m/x) I_m on e^{-x}-scaled values.
// The scaled values grow monotonically downward, so the recurrence is stable
// and stays within long double range for x > max(30, nu).
long double uniform_log_scaled(double nu, double x) {
  if (nu >= kUniformMinOrder) return olver_log_scaled(nu, x);
  const int shift = static_cast<int>(std::ceil(kUniformMinOrder - nu));
  const double mu_hi = nu + shift;
  long double above = expl(olver_log_scaled(mu_hi + 1.0, x));
  long double here = expl(olver_log_scaled(mu_hi, x));
  for (double m = mu_hi; m > nu + 0.5; m -= 1.0) {
    const long double below = above + (2.0L * static_cast<long double>(m) / x) * here;
    above = here;
    here = below;
  }
  return logl(here);
}

long double log_bessel_i_scaled_impl(double nu, double x) {
  switch (bessel_regime(nu, x)) {
    case BesselRegime::SeriesSmallArg:
      return series_log(nu, x) - static_cast<long double>(x);
    case BesselRegime::AsymptoticLargeArg:
      return hankel_log_scaled(nu, x);
    case BesselRegime::UniformLargeOrder:
      return uniform_log_scaled(nu, x);
  }
  throw Error("unreachable");
}

}  // namespace

BesselRegime bessel_regime(double nu, double x) {
  check_bessel_args(nu, x);
  if (x <= std::max(kSeriesMaxX, nu)) return BesselRegime::SeriesSmallArg;
  if (x >= std::max(kHankelMinX, nu * nu)) return BesselRegime::AsymptoticLargeArg;
  return BesselRegime::UniformLargeOrder;
}

double log_bessel_i(double nu, double x) {
  check_bessel_args(nu, x);
  if (x == 0.0) {
    return nu == 0.0 ? 0.0 : -std::numeric_limits<double>::infinity();
  }
  return static_cast<double>(log_bessel_i_scaled_impl(nu, x) + static_cast<long double>(x));
}

double log_bessel_i_scaled(double nu, double x) {
  check_bessel_args(nu, x);
  if (x == 0.0) {
    return nu == 0.0 ? 0.0 : -std::numeric_limits<double>::infinity();
  }
  return static_cast<double>(log_bessel_i_scaled_impl(nu, x));
}

double log_gamma(double z) {
  if (!(z > 0.0)) throw DomainError("log_gamma needs z > 0");
  return static_cast<double>(lgammal(static_cast<long double>(z)));
}

namespace {

// Series and continued-fraction halves of the regularized incomplete gamma
// function, standard split at x = s + 1.
double gamma_p_series(double s, double x) {
  double term = 1.0 / s;
  double sum = term;
  for (int n = 1; n < 10000; ++n) {
    term *= x / (s + n);
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * 1e-17) break;
  }
  return sum * std::exp(s * std::log(x) - x - log_gamma(s));
}

double gamma_q_cf(double s, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - s;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -static_cast<double>(i) * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return h * std::exp(s * std::log(x) - x - log_gamma(s));
}

}  // namespace

double regularized_gamma_p(double s, double x) {
  if (!(s > 0.0)) throw DomainError("regularized_gamma_p needs s > 0");
  if (!(x >= 0.0)) throw DomainError("regularized_gamma_p needs x >= 0");
  if (x == 0.0) return 0.0;
  double p = (x < s + 1.0) ? gamma_p_series(s, x) : 1.0 - gamma_q_cf(s, x);
  if (p < 0.0) p = 0.0;
  if (p > 1.0) p = 1.0;
  return p;
}

double regularized_gamma_q(double s, double x) {
  if (!(s > 0.0)) throw DomainError("regularized_gamma_q needs s > 0");
  if (!(x >= 0.0)) throw DomainError("regularized_gamma_q needs x >= 0");
  if (x == 0.0) return 1.0;
  double q = (x < s + 1.0) ? 1.0 - gamma_p_series(s, x) : gamma_q_cf(s, x);
  if (q < 0.0) q = 0.0;
  if (q > 1.0) q = 1.0;
  return q;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / 1.4142135623730951); }

}  // namespace cirlan
