#pragma once

#include <cstdint>
#include <random>

namespace betadelta {

/// Deterministic random stream. Raw bits come from std::mt19937_64 (fully
/// specified by the standard), uniforms from the top 53 bits, normals from
/// Marsaglia's polar transform. The same seed therefore reproduces the same
/// values bit-for-bit on any conforming platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Standard normal via the polar method; second value of each pair cached.
  double normal();

  double normal(double stddev) { return stddev * normal(); }

  /// Uniform integer in [0, bound); rejection sampled, no modulo bias.
  std::size_t uniform_index(std::size_t bound);

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// splitmix64 mix of (master, stream). Sub-generators (signal, matrix,
/// noise) and per-trial runs each get their own derived seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

}  // namespace betadelta
