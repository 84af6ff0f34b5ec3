#include "rieszcert/instance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rieszcert/random.hpp"

namespace rieszcert {

namespace {

// Streams of the instance generator; fixed so that changing one draw leaves the others alone.
constexpr std::uint64_t kEigenStream = 1;
constexpr std::uint64_t kUnitaryStream = 2;
constexpr std::uint64_t kPerturbationStream = 3;

struct Placement {
  RVector eigenvalues;
  std::vector<int> cluster;               // segment offset per eigenvalue
  std::vector<std::pair<int, int>> pairs;  // (right end of j, left end of j+1) index pairs
};

Placement place_eigenvalues(const InstanceSpec& spec, const SegmentFamily& family, CounterRng rng) {
  Placement p;
  p.eigenvalues.resize(spec.n);
  const auto segs = family.segments();
  std::vector<int> start(segs.size());
  int at = 0;
  for (std::size_t j = 0; j < segs.size(); ++j) {
    start[j] = at;
    for (int k = 0; k < spec.cluster_sizes[j]; ++k, ++at) {
      p.eigenvalues(at) = segs[j].length() > 0.0 ? rng.uniform(segs[j].alpha, segs[j].beta)
                                                  : segs[j].alpha;
      p.cluster.push_back(static_cast<int>(j));
    }
    std::sort(p.eigenvalues.data() + start[j], p.eigenvalues.data() + at);
  }
  if (spec.perturbation_style != PerturbationStyle::gap_merging) return p;

  // Move the outermost eigenvalues onto the facing endpoints of each gap. A cluster of size
  // one takes part in at most one pair.
  std::vector<bool> used(static_cast<std::size_t>(spec.n), false);
  for (std::size_t j = 0; j + 1 < segs.size(); ++j) {
    const int left = start[j] + spec.cluster_sizes[j] - 1;
    const int right = start[j + 1];
    if (used[static_cast<std::size_t>(left)] || used[static_cast<std::size_t>(right)]) continue;
    used[static_cast<std::size_t>(left)] = used[static_cast<std::size_t>(right)] = true;
    p.eigenvalues(left) = segs[j].beta;
    p.eigenvalues(right) = segs[j + 1].alpha;
    p.pairs.emplace_back(left, right);
  }
  return p;
}

CMatrix raw_perturbation(const InstanceSpec& spec, const Placement& p, const CMatrix& u,
                         CounterRng rng) {
  const Eigen::Index n = spec.n;
  switch (spec.perturbation_style) {
    case PerturbationStyle::dense_random:
      return random_complex_matrix(rng, n, n);
    case PerturbationStyle::hermitian: {
      const CMatrix r = random_complex_matrix(rng, n, n);
      return 0.5 * (r + r.adjoint());
    }
    case PerturbationStyle::cluster_coupling: {
      CMatrix c = random_complex_matrix(rng, n, n);
      for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index k = 0; k < n; ++k) {
          if (std::abs(p.cluster[static_cast<std::size_t>(i)] - p.cluster[static_cast<std::size_t>(k)]) != 1) {
            c(i, k) = 0.0;
          }
        }
      }
      if (c.norm() == 0.0) c = random_complex_matrix(rng, n, n);
      return u * c * u.adjoint();
    }
    case PerturbationStyle::gap_merging: {
      CMatrix c = CMatrix::Zero(n, n);
      for (const auto& [l, r] : p.pairs) {
        c(l, r) = 1.0;
        c(r, l) = -1.0;
      }
      if (p.pairs.empty()) c = random_complex_matrix(rng, n, n);
      return u * c * u.adjoint();
    }
  }
  throw Error(ErrorCode::InvalidSpec, "unknown perturbation style");
}

}  // namespace

std::string_view to_string(PerturbationStyle style) {
  switch (style) {
    case PerturbationStyle::dense_random: return "dense_random";
    case PerturbationStyle::cluster_coupling: return "cluster_coupling";
    case PerturbationStyle::hermitian: return "hermitian";
    case PerturbationStyle::gap_merging: return "gap_merging";
  }
  return "unknown";
}

PerturbationStyle parse_perturbation_style(std::string_view name) {
  for (auto s : {PerturbationStyle::dense_random, PerturbationStyle::cluster_coupling,
                 PerturbationStyle::hermitian, PerturbationStyle::gap_merging}) {
    if (to_string(s) == name) return s;
  }
  throw Error(ErrorCode::InvalidSpec, "unknown perturbation style '" + std::string(name) + "'");
}

void validate(const InstanceSpec& spec) {
  if (spec.n < 1) throw Error(ErrorCode::InvalidSpec, "n must be positive");
  if (spec.segments.empty()) throw Error(ErrorCode::InvalidSpec, "no segments");
  if (spec.cluster_sizes.size() != spec.segments.size()) {
    throw Error(ErrorCode::InvalidSpec, "cluster_sizes and segments differ in length");
  }
  if (std::any_of(spec.cluster_sizes.begin(), spec.cluster_sizes.end(), [](int c) { return c < 0; })) {
    throw Error(ErrorCode::InvalidSpec, "negative cluster size");
  }
  if (std::accumulate(spec.cluster_sizes.begin(), spec.cluster_sizes.end(), 0) != spec.n) {
    throw Error(ErrorCode::InvalidSpec, "cluster sizes do not add up to n");
  }
  if (!(spec.b_ratio >= 0.0) || !std::isfinite(spec.b_ratio)) {
    throw Error(ErrorCode::InvalidSpec, "b_ratio must be finite and non-negative");
  }
  for (const auto& s : spec.segments) {
    if (!std::isfinite(s.alpha) || !std::isfinite(s.beta) || s.alpha > s.beta) {
      throw Error(ErrorCode::InvalidSpec, "segment endpoints must satisfy alpha <= beta");
    }
  }
  auto sorted = spec.segments;
  std::sort(sorted.begin(), sorted.end(), [](const Segment& a, const Segment& b) { return a.alpha < b.alpha; });
  if (sorted != spec.segments) throw Error(ErrorCode::InvalidSpec, "segments must be listed left to right");
  try {
    (void)build_segment_family(spec.segments);
  } catch (const Error& e) {
    throw Error(ErrorCode::InvalidSpec, e.what());
  }
}

Instance generate_instance(const InstanceSpec& spec) {
  validate(spec);
  SegmentFamily family = build_segment_family(spec.segments);
  const CounterRng root(spec.seed);
  const Placement placement = place_eigenvalues(spec, family, root.split(kEigenStream));
  CounterRng urng = root.split(kUnitaryStream);
  const CMatrix u = random_unitary(urng, spec.n);

  CMatrix t = u * placement.eigenvalues.cast<Complex>().asDiagonal() * u.adjoint();
  t = 0.5 * (t + t.adjoint());

  const double b = spec.b_ratio * 0.5 * family.gap();
  CMatrix bm = CMatrix::Zero(spec.n, spec.n);
  if (b > 0.0) {
    const CMatrix r = raw_perturbation(spec, placement, u, root.split(kPerturbationStream));
    bm = (b / spectral_norm(r)) * r;
  }
  return Instance{PerturbedPair(HermitianOperator(std::move(t)), std::move(bm)), std::move(family), b};
}

}  // namespace rieszcert
