#pragma once

#include <doctest.h>

#include "rieszcert/instance.hpp"

namespace testing {

// Two to four segments with unit gaps and a seed-dependent layout.
inline rieszcert::InstanceSpec random_spec(std::uint64_t seed, double b_ratio = 0.8, int n = 12) {
  rieszcert::InstanceSpec spec;
  const int m = 2 + static_cast<int>(seed % 3);
  spec.segments.clear();
  spec.cluster_sizes.assign(static_cast<std::size_t>(m), n / m);
  spec.cluster_sizes.back() += n - m * (n / m);
  double left = -1.0;
  for (int j = 0; j < m; ++j) {
    const double len = 0.2 + 0.15 * static_cast<double>((seed + 3 * j) % 4);
    spec.segments.push_back({left, left + len});
    left += len + 1.0 + 0.25 * static_cast<double>((seed + j) % 2);
  }
  spec.n = n;
  spec.b_ratio = b_ratio;
  spec.seed = seed;
  return spec;
}

}  // namespace testing
