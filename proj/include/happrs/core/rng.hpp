#pragma once

#include <cstdint>
#include <random>

#include "happrs/core/dense.hpp"

namespace happrs {

/// Seedable generator: std::mt19937_64 underneath, with the uniform and
/// normal transforms written out here so the stream does not depend on the
/// standard library's distribution implementations.
///
/// Normal variates use the Box-Muller transform on two open-interval
/// uniforms; the second variate of each pair is cached.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on the open interval (0, 1), 53 bits of resolution.
  double uniform();

  // Uniform integer in [0, n). n must be positive.
  std::uint64_t uniform_index(std::uint64_t n);

  double normal();

  // +1 or -1 with equal probability.
  double sign();

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

/// n i.i.d. standard normal variates. n = 0 is rejected.
Vec normal_sample(Rng& rng, std::size_t n);

/// round(density * n) standard normal entries at uniformly chosen positions,
/// zeros elsewhere. density must lie in (0, 1].
Vec sparse_normal_sample(Rng& rng, std::size_t n, double density);

}  // namespace happrs
