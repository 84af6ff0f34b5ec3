#pragma once

#include <optional>
#include <span>
#include <vector>

#include "rieszcert/common.hpp"
#include "rieszcert/projection_set.hpp"

namespace rieszcert {

/// Closed real interval [alpha, beta].
struct Segment {
  double alpha = 0.0;
  double beta = 0.0;

  double length() const noexcept { return beta - alpha; }
  double center() const noexcept { return 0.5 * (alpha + beta); }
  /// Euclidean distance from a point of the complex plane to the interval.
  double distance(Complex z) const noexcept;
  bool contains(double t, double slack = 0.0) const noexcept {
    return t >= alpha - slack && t <= beta + slack;
  }

  friend bool operator==(const Segment&, const Segment&) = default;
};

/// Ordered, strictly separated segments with their minimal gap d.
class SegmentFamily {
 public:
  int first_index() const noexcept { return first_index_; }
  int last_index() const noexcept { return first_index_ + static_cast<int>(segments_.size()) - 1; }
  std::size_t size() const noexcept { return segments_.size(); }
  bool contains_index(int j) const noexcept { return j >= first_index_ && j <= last_index(); }

  const Segment& at(int j) const;
  std::span<const Segment> segments() const noexcept { return segments_; }
  double gap() const noexcept { return gap_; }

  /// dist(z, union of segments).
  double distance(Complex z) const noexcept;
  /// Index of the segment containing t (with slack), if any.
  std::optional<int> locate(double t, double slack = 0.0) const noexcept;
  /// Magnitude scale of the family, used for relative slacks.
  double scale() const noexcept;

 private:
  friend SegmentFamily build_segment_family(std::vector<Segment>, int);
  int first_index_ = 0;
  std::vector<Segment> segments_;
  double gap_ = 0.0;
};

/// Sorts by left endpoint and relabels to first_index, first_index + 1, ...
/// A single segment has no interior gap; its d is taken as max(length, 1).
SegmentFamily build_segment_family(std::vector<Segment> segments, int first_index = 0);

/// Self-adjoint matrix with its eigendecomposition cached at construction.
class HermitianOperator {
 public:
  explicit HermitianOperator(CMatrix matrix);

  const CMatrix& matrix() const noexcept { return matrix_; }
  const RVector& eigenvalues() const noexcept { return eigenvalues_; }
  const CMatrix& eigenvectors() const noexcept { return eigenvectors_; }
  Eigen::Index dimension() const noexcept { return matrix_.rows(); }
  double spectral_radius() const noexcept;

  /// min_i |t_i - lambda|
  double spectrum_distance(Complex lambda) const noexcept;
  /// (T - lambda)^{-1} assembled from the eigendecomposition.
  CMatrix resolvent(Complex lambda) const;
  CVector apply_resolvent(Complex lambda, const CVector& x) const;

 private:
  CMatrix matrix_;
  RVector eigenvalues_;
  CMatrix eigenvectors_;
};

/// T, the perturbation B with its spectral norm b, and A = T + B.
class PerturbedPair {
 public:
  PerturbedPair(HermitianOperator t, CMatrix b_matrix);

  const HermitianOperator& t() const noexcept { return t_; }
  const CMatrix& b_matrix() const noexcept { return b_matrix_; }
  double b_norm() const noexcept { return b_norm_; }
  const CMatrix& a_matrix() const noexcept { return a_matrix_; }
  Eigen::Index dimension() const noexcept { return a_matrix_.rows(); }

 private:
  HermitianOperator t_;
  CMatrix b_matrix_;
  double b_norm_ = 0.0;
  CMatrix a_matrix_;
};

struct HypothesisReport {
  bool holds = false;
  double b = 0.0;
  double d = 0.0;
  double margin = 0.0;  // d/2 - b

  friend bool operator==(const HypothesisReport&, const HypothesisReport&) = default;
};

/// Checks b < d/2. Throws SpectrumOutsideSegments when T does not fit the family.
HypothesisReport check_hypothesis(const PerturbedPair& pair, const SegmentFamily& family);

/// Slack used when testing whether an eigenvalue of T lies in a closed segment.
double eigenvalue_slack(const HermitianOperator& t, const SegmentFamily& family);

/// P_j = sum of v_i v_i^* over eigenpairs with t_i in segment j.
ProjectionSet unperturbed_projections(const HermitianOperator& t, const SegmentFamily& family);

/// ||(T - lambda)^{-1}||_2 = 1 / min_i |t_i - lambda|.
double resolvent_norm_t(const HermitianOperator& t, Complex lambda);

}  // namespace rieszcert
