#pragma once

#include <cstdint>

#include "rieszcert/common.hpp"

namespace rieszcert {

/// Counter-based generator: the k-th draw is splitmix64(seed + k * 0x9E3779B97F4A7C15).
/// Draws depend only on (seed, counter), so streams are reproducible and can be split.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t counter = 0) noexcept
      : seed_(seed), counter_(counter) {}

  std::uint64_t next_u64() noexcept;
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  /// Standard normal by Box-Muller (two uniforms per call, no caching).
  double normal() noexcept;
  /// Real and imaginary parts independent N(0, 1/2).
  Complex complex_normal() noexcept;

  /// Independent stream keyed by (seed, stream).
  CounterRng split(std::uint64_t stream) const noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

CMatrix random_complex_matrix(CounterRng& rng, Eigen::Index rows, Eigen::Index cols);
CVector random_unit_vector(CounterRng& rng, Eigen::Index n);
/// Haar-distributed unitary from QR of a complex Gaussian matrix with phase correction.
CMatrix random_unitary(CounterRng& rng, Eigen::Index n);

}  // namespace rieszcert
