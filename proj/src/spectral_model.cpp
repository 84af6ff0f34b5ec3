#include "rieszcert/spectral_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace rieszcert {

double Segment::distance(Complex z) const noexcept {
  const double x = z.real();
  const double y = z.imag();
  if (x < alpha) return std::hypot(alpha - x, y);
  if (x > beta) return std::hypot(x - beta, y);
  return std::abs(y);
}

const Segment& SegmentFamily::at(int j) const {
  if (!contains_index(j)) throw std::out_of_range("segment index " + std::to_string(j));
  return segments_[static_cast<std::size_t>(j - first_index_)];
}

double SegmentFamily::distance(Complex z) const noexcept {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : segments_) best = std::min(best, s.distance(z));
  return best;
}

std::optional<int> SegmentFamily::locate(double t, double slack) const noexcept {
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    if (segments_[i].contains(t, slack)) return first_index_ + static_cast<int>(i);
  }
  return std::nullopt;
}

double SegmentFamily::scale() const noexcept {
  double s = gap_;
  for (const auto& seg : segments_) s = std::max({s, std::abs(seg.alpha), std::abs(seg.beta)});
  return std::max(s, 1.0);
}

SegmentFamily build_segment_family(std::vector<Segment> segments, int first_index) {
  if (segments.empty()) throw Error(ErrorCode::EmptyFamily, "segment list is empty");
  for (const auto& s : segments) {
    if (!(s.alpha <= s.beta) || !std::isfinite(s.alpha) || !std::isfinite(s.beta)) {
      throw Error(ErrorCode::InvalidSpec, "segment endpoints must be finite with alpha <= beta");
    }
  }
  std::sort(segments.begin(), segments.end(),
            [](const Segment& l, const Segment& r) { return l.alpha < r.alpha; });

  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < segments.size(); ++i) {
    const double g = segments[i + 1].alpha - segments[i].beta;
    if (!(g > 0.0)) {
      throw Error(ErrorCode::OverlappingSegments,
                  "segments " + std::to_string(i) + " and " + std::to_string(i + 1) +
                      " are not strictly separated");
    }
    gap = std::min(gap, g);
  }
  if (segments.size() == 1) gap = std::max(segments.front().length(), 1.0);

  SegmentFamily family;
  family.first_index_ = first_index;
  family.segments_ = std::move(segments);
  family.gap_ = gap;
  return family;
}

HermitianOperator::HermitianOperator(CMatrix matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "Hermitian operator must be a non-empty square matrix");
  }
  const double scale = std::max(matrix_.norm(), std::numeric_limits<double>::min());
  if ((matrix_ - matrix_.adjoint()).norm() / scale > 1e-13) {
    throw Error(ErrorCode::NotHermitian, "matrix differs from its adjoint");
  }
  // Average with the adjoint so the solver sees an exactly Hermitian input.
  const CMatrix symmetric = 0.5 * (matrix_ + matrix_.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(symmetric);
  eigenvalues_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();
}

double HermitianOperator::spectral_radius() const noexcept {
  return std::max(std::abs(eigenvalues_(0)), std::abs(eigenvalues_(eigenvalues_.size() - 1)));
}

double HermitianOperator::spectrum_distance(Complex lambda) const noexcept {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < eigenvalues_.size(); ++i) {
    best = std::min(best, std::abs(eigenvalues_(i) - lambda));
  }
  return best;
}

CMatrix HermitianOperator::resolvent(Complex lambda) const {
  CVector inv(eigenvalues_.size());
  for (Eigen::Index i = 0; i < inv.size(); ++i) inv(i) = 1.0 / (eigenvalues_(i) - lambda);
  return eigenvectors_ * inv.asDiagonal() * eigenvectors_.adjoint();
}

CVector HermitianOperator::apply_resolvent(Complex lambda, const CVector& x) const {
  CVector coeff = eigenvectors_.adjoint() * x;
  for (Eigen::Index i = 0; i < coeff.size(); ++i) coeff(i) /= (eigenvalues_(i) - lambda);
  return eigenvectors_ * coeff;
}

PerturbedPair::PerturbedPair(HermitianOperator t, CMatrix b_matrix)
    : t_(std::move(t)), b_matrix_(std::move(b_matrix)) {
  if (b_matrix_.rows() != t_.dimension() || b_matrix_.cols() != t_.dimension()) {
    throw Error(ErrorCode::DimensionMismatch, "perturbation shape differs from T");
  }
  b_norm_ = spectral_norm(b_matrix_);
  a_matrix_ = t_.matrix() + b_matrix_;
}

double eigenvalue_slack(const HermitianOperator& t, const SegmentFamily& family) {
  return 64.0 * std::numeric_limits<double>::epsilon() *
         std::max(family.scale(), t.spectral_radius());
}

HypothesisReport check_hypothesis(const PerturbedPair& pair, const SegmentFamily& family) {
  const double slack = eigenvalue_slack(pair.t(), family);
  const auto& eigs = pair.t().eigenvalues();
  for (Eigen::Index i = 0; i < eigs.size(); ++i) {
    if (!family.locate(eigs(i), slack)) {
      throw Error(ErrorCode::SpectrumOutsideSegments,
                  "eigenvalue " + std::to_string(eigs(i)) + " of T lies in no segment");
    }
  }
  HypothesisReport report;
  report.b = pair.b_norm();
  report.d = family.gap();
  report.margin = 0.5 * report.d - report.b;
  report.holds = report.b < 0.5 * report.d;
  return report;
}

ProjectionSet unperturbed_projections(const HermitianOperator& t, const SegmentFamily& family) {
  const auto n = t.dimension();
  const double slack = eigenvalue_slack(t, family);
  std::vector<CMatrix> projections(family.size(), CMatrix::Zero(n, n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto j = family.locate(t.eigenvalues()(i), slack);
    if (!j) {
      throw Error(ErrorCode::SpectrumOutsideSegments,
                  "eigenvalue " + std::to_string(t.eigenvalues()(i)) + " of T lies in no segment");
    }
    const auto v = t.eigenvectors().col(i);
    projections[static_cast<std::size_t>(*j - family.first_index())] += v * v.adjoint();
  }
  return ProjectionSet(family.first_index(), std::move(projections),
                       ProjectionMethod::spectral_of_T, 1e-12);
}

double resolvent_norm_t(const HermitianOperator& t, Complex lambda) {
  const double dist = t.spectrum_distance(lambda);
  if (dist < 1e-14 * std::max(1.0, t.spectral_radius())) {
    throw Error(ErrorCode::LambdaOnSpectrum, "shift coincides with an eigenvalue of T");
  }
  return 1.0 / dist;
}

}  // namespace rieszcert
