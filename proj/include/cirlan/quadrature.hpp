#pragma once

#include <cmath>
#include <utility>

#include "cirlan/errors.hpp"

namespace cirlan {

namespace detail {

// Gauss-Kronrod 7/15 nodes and weights (QUADPACK dqk15).
inline constexpr double kGK15Nodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
inline constexpr double kGK15Weights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double kG7Weights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

template <class F>
std::pair<double, double> gk15(const F& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(center);
  double kronrod = kGK15Weights[7] * fc;
  double gauss = kG7Weights[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double offset = half * kGK15Nodes[i];
    const double fsum = f(center + offset) + f(center - offset);
    kronrod += kGK15Weights[i] * fsum;
    if (i % 2 == 1) gauss += kG7Weights[i / 2] * fsum;
  }
  return {kronrod * half, std::fabs(kronrod - gauss) * half};
}

}  // namespace detail

// Adaptive Gauss-Kronrod integration by interval bisection. Splits until the
// local 7/15 discrepancy is below the local tolerance budget; the first
// min_depth levels always split so that narrow features cannot slip between
// the nodes of a single coarse panel.
template <class F>
double integrate_adaptive(const F& f, double lo, double hi, double abs_tol,
                          int max_depth = 48, int min_depth = 5) {
  if (!(abs_tol > 0.0)) throw DomainError("integrate_adaptive needs abs_tol > 0");
  struct Rec {
    const F& f;
    int forced;
    double operator()(double a, double b, double tol, int depth) const {
      if (depth <= forced) {
        const auto [value, err] = detail::gk15(f, a, b);
        if (err <= tol || depth <= 0) return value;
      }
      const double mid = 0.5 * (a + b);
      return (*this)(a, mid, 0.5 * tol, depth - 1) + (*this)(mid, b, 0.5 * tol, depth - 1);
    }
  } rec{f, max_depth - min_depth};
  return rec(lo, hi, abs_tol, max_depth);
}

}  // namespace cirlan
