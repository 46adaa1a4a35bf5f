#include "happrs/core/rng.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <vector>

#include "happrs/core/error.hpp"

namespace happrs {

double Rng::uniform() {
  // (k + 0.5) / 2^53 for k in [0, 2^53) never hits 0 or 1.
  const std::uint64_t k = engine_() >> 11;
  return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
}

std::uint64_t Rng::uniform_index(std::uint64_t n) {
  require(n > 0, ErrorKind::InvalidArgument, "uniform_index needs n > 0");
  // Rejection sampling keeps the result unbiased.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t v;
  do {
    v = engine_();
  } while (v >= limit);
  return v % n;
}

double Rng::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_normal_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_normal_ = radius * std::sin(angle);
  has_cached_ = true;
  return radius * std::cos(angle);
}

double Rng::sign() { return (engine_() >> 63) ? 1.0 : -1.0; }

Vec normal_sample(Rng& rng, std::size_t n) {
  require(n >= 1, ErrorKind::InvalidArgument, "normal_sample needs n >= 1");
  Vec out(n);
  for (auto& v : out) v = rng.normal();
  return out;
}

Vec sparse_normal_sample(Rng& rng, std::size_t n, double density) {
  require(density > 0.0 && density <= 1.0, ErrorKind::InvalidArgument,
          "density must lie in (0, 1]");
  require(n >= 1, ErrorKind::InvalidArgument, "sparse_normal_sample needs n >= 1");
  const auto k = static_cast<std::size_t>(std::llround(density * static_cast<double>(n)));

  // Partial Fisher-Yates: the first k slots of `order` are a uniform k-subset.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + rng.uniform_index(n - i);
    std::swap(order[i], order[j]);
  }
  Vec out(n);
  for (std::size_t i = 0; i < k; ++i) out[order[i]] = rng.normal();
  return out;
}

}  // namespace happrs
