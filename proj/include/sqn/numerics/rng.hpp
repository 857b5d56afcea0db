#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>

namespace sqn {

/// Seedable 64-bit generator: splitmix64 expands the seed into the state of
/// a xoshiro256** stream. Equal seeds give equal sequences; one instance per
/// trial, never shared between threads.
///
/// Satisfies UniformRandomBitGenerator so it can drive <random> distributions.
class Rng64 {
public:
  using result_type = std::uint64_t;

  explicit Rng64(std::uint64_t seed = 0) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept { return next(); }
  std::uint64_t next() noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) noexcept;
  /// Uniform integer on [0, n); n must be positive.
  std::size_t uniform_index(std::size_t n) noexcept;
  double normal() noexcept;

private:
  std::uint64_t s_[4];
};

/// splitmix64 finalizer; used to derive independent seeds from (seed, stream).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

}  // namespace sqn
