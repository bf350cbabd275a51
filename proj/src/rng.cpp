#include "chartkit/rng.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace chartkit {

std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// The raw seed goes through mix_seed so that nearby seeds (base ^ ue for
// consecutive UEs) start from unrelated engine states.
Rng::Rng(std::uint64_t seed) : engine_(mix_seed(seed)) {}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) {
    throw DomainError("Rng::below: empty range");
  }
  // Rejection sampling keeps the result unbiased.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t v = engine_();
  while (v >= limit) {
    v = engine_();
  }
  return v % n;
}

double Rng::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_normal_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) {
    u1 = uniform();
  }
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_normal_ = radius * std::sin(angle);
  has_cached_ = true;
  return radius * std::cos(angle);
}

Complex Rng::complex_normal(double power) {
  const double sigma = std::sqrt(power / 2.0);
  const double re = normal();
  const double im = normal();
  return {sigma * re, sigma * im};
}

}  // namespace chartkit
