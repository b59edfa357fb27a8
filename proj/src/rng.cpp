#include "cirlan/rng.hpp"

#include <cmath>

namespace cirlan {

namespace {

constexpr std::uint64_t kPhiloxM = 0xD2B74407B1CE6E93ull;
constexpr std::uint64_t kPhiloxW = 0x9E3779B97F4A7C15ull;
constexpr double kTwoPi = 6.283185307179586476925287;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
  const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  hi = static_cast<std::uint64_t>(p >> 64);
  lo = static_cast<std::uint64_t>(p);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_(stream_id) {}

std::uint64_t RngStream::next_u64() {
  if (has_buffered_) {
    has_buffered_ = false;
    return buffered_;
  }
  std::uint64_t x0 = counter_++;
  std::uint64_t x1 = stream_;
  std::uint64_t key = seed_;
  for (int round = 0; round < 10; ++round) {
    std::uint64_t hi, lo;
    mulhilo(kPhiloxM, x0, hi, lo);
    x0 = hi ^ key ^ x1;
    x1 = lo;
    key += kPhiloxW;
  }
  buffered_ = x1;
  has_buffered_ = true;
  return x0;
}

double RngStream::uniform() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform()));
  const double theta = kTwoPi * uniform();
  cached_normal_ = r * std::sin(theta);
  has_cached_normal_ = true;
  return r * std::cos(theta);
}

double RngStream::gamma(double shape, double scale) {
  if (!(shape > 0.0) || !(scale > 0.0)) {
    throw DomainError("gamma needs positive shape and scale");
  }
  if (shape < 1.0) {
    const double boosted = gamma(shape + 1.0, scale);
    return boosted * std::pow(uniform(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    if (u < 1.0 - 0.0331 * (x * x) * (x * x)) return d * v * scale;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v * scale;
  }
}

double RngStream::poisson(double mean) {
  if (!(mean >= 0.0)) throw DomainError("poisson needs a nonnegative mean");
  if (mean == 0.0) return 0.0;
  if (mean < 10.0) {
    // Product of uniforms against exp(-mean).
    const double limit = std::exp(-mean);
    double k = 0.0;
    double p = uniform();
    while (p > limit) {
      k += 1.0;
      p *= uniform();
    }
    return k;
  }
  // PTRD: transformed rejection with squeeze (Hormann 1993).
  const double smu = std::sqrt(mean);
  const double b = 0.931 + 2.53 * smu;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  const double log_mu = std::log(mean);
  for (;;) {
    double u = uniform() - 0.5;
    double v = uniform();
    const double us = 0.5 - std::fabs(u);
    const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= v_r) return k;
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    const double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
    const double rhs = k * log_mu - mean - std::lgamma(k + 1.0);
    if (lhs <= rhs) return k;
  }
}

}  // namespace cirlan
