#pragma once

#include <cstdint>

#include "cirlan/errors.hpp"

namespace cirlan {

// Counter-based random stream (Philox 2x64-10, Salmon et al. 2011). The pair
// (seed, stream_id) fully determines the sequence, so per-path streams keyed
// by (seed, path_index) reproduce bit-for-bit regardless of how work is
// scheduled across threads. Value semantics: copying a stream copies its
// position.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_; }

  std::uint64_t next_u64();

  // Uniform on the open interval (0, 1).
  double uniform();

  // Standard normal via Box-Muller (pairs are cached).
  double normal();

  // Gamma(shape, scale) by Marsaglia-Tsang squeeze (TOMS, 2000),
  // with the usual power boost for shape < 1.
  double gamma(double shape, double scale);

  // Poisson(mean), exact for all means: product method below 10,
  // transformed rejection (Hormann's PTRD, 1993) above.
  double poisson(double mean);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::uint64_t buffered_ = 0;
  bool has_buffered_ = false;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace cirlan
