#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rieszcert/common.hpp"
#include "rieszcert/spectral_model.hpp"

namespace rieszcert {

enum class PerturbationStyle {
  dense_random,      // complex Gaussian R
  cluster_coupling,  // R only couples spectral subspaces of adjacent segments
  hermitian,         // (R + R^*) / 2
  gap_merging,       // eigenvalues at facing endpoints, antisymmetric coupling across each gap
};

std::string_view to_string(PerturbationStyle style);
/// Throws InvalidSpec on an unknown name.
PerturbationStyle parse_perturbation_style(std::string_view name);

struct InstanceSpec {
  int n = 16;
  std::vector<Segment> segments{{-1.0, -0.5}, {0.5, 1.0}};
  std::vector<int> cluster_sizes{8, 8};
  double b_ratio = 0.8;  // b = b_ratio * d / 2
  std::uint64_t seed = 1;
  PerturbationStyle perturbation_style = PerturbationStyle::dense_random;

  friend bool operator==(const InstanceSpec&, const InstanceSpec&) = default;
};

/// Throws InvalidSpec unless sizes add up to n, every segment is valid and b_ratio >= 0.
void validate(const InstanceSpec& spec);

struct Instance {
  PerturbedPair pair;
  SegmentFamily family;
  double b = 0.0;  // target ||B||_2
};

/// T = U diag(t) U^* with t uniform in each segment and U Haar; B = b R / ||R||_2.
/// Bit-identical for equal specs.
Instance generate_instance(const InstanceSpec& spec);

}  // namespace rieszcert
