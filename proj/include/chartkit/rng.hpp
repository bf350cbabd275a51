#pragma once

#include <cstdint>
#include <random>

#include "chartkit/common.hpp"

namespace chartkit {

/// Seedable generator with portable output.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The standard distributions are implementation-defined, so the
/// uniform and Gaussian transforms are done here to keep draws bit-identical
/// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Per-UE substream: seeded with base_seed XOR ue_index.
  static Rng for_ue(std::uint64_t base_seed, std::uint64_t ue_index) {
    return Rng(base_seed ^ ue_index);
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  /// Standard normal via Box-Muller; the second value of each pair is cached.
  double normal();

  /// Circular complex Gaussian with E|z|^2 = power.
  Complex complex_normal(double power = 1.0);

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

/// SplitMix64 finalizer, used to derive independent seeds from one master seed.
std::uint64_t mix_seed(std::uint64_t x);

}  // namespace chartkit
