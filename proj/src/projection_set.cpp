#include "rieszcert/projection_set.hpp"

#include <algorithm>

#include <Eigen/SVD>

namespace rieszcert {

std::string_view to_string(ProjectionMethod method) {
  switch (method) {
    case ProjectionMethod::contour_quadrature: return "contour_quadrature";
    case ProjectionMethod::eigen_oracle: return "eigen_oracle";
    case ProjectionMethod::spectral_of_T: return "spectral_of_T";
  }
  return "unknown";
}

ProjectionSet::ProjectionSet(int first_index, std::vector<CMatrix> matrices,
                             ProjectionMethod method, double tolerance)
    : first_index_(first_index),
      matrices_(std::move(matrices)),
      method_(method),
      tolerance_(tolerance) {
  residuals_.reserve(matrices_.size());
  for (const auto& q : matrices_) {
    if (q.rows() != q.cols() || q.rows() != matrices_.front().rows()) {
      throw Error(ErrorCode::DimensionMismatch, "projection matrices must share one square shape");
    }
    residuals_.push_back((q * q - q).norm());
  }
}

const CMatrix& ProjectionSet::at(int j) const {
  if (!contains(j)) throw std::out_of_range("projection index " + std::to_string(j));
  return matrices_[static_cast<std::size_t>(j - first_index_)];
}

double ProjectionSet::idempotency_residual(int j) const {
  if (!contains(j)) throw std::out_of_range("projection index " + std::to_string(j));
  return residuals_[static_cast<std::size_t>(j - first_index_)];
}

double ProjectionSet::minimality_residual() const {
  double worst = 0.0;
  for (std::size_t j = 0; j < matrices_.size(); ++j) {
    for (std::size_t k = 0; k < matrices_.size(); ++k) {
      if (j == k) continue;
      worst = std::max(worst, (matrices_[j] * matrices_[k]).norm());
    }
  }
  return worst;
}

CMatrix ProjectionSet::sum() const {
  const auto n = dimension();
  CMatrix total = CMatrix::Zero(n, n);
  for (const auto& q : matrices_) total += q;
  return total;
}

double ProjectionSet::completeness_residual() const {
  const auto n = dimension();
  return (sum() - CMatrix::Identity(n, n)).norm();
}

Eigen::Index numerical_rank(const CMatrix& m, double threshold) {
  if (m.size() == 0) return 0;
  Eigen::BDCSVD<CMatrix> svd(m);
  const auto& s = svd.singularValues();
  // Projections have unit-scale nonzero singular values; use max(1, s_max) as scale.
  const double cut = threshold * std::max(1.0, s(0));
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cut) ++rank;
  }
  return rank;
}

}  // namespace rieszcert
