#pragma once

#include <string_view>
#include <vector>

#include "rieszcert/common.hpp"

namespace rieszcert {

enum class ProjectionMethod { contour_quadrature, eigen_oracle, spectral_of_T };

std::string_view to_string(ProjectionMethod method);

/// Family of projections indexed by a contiguous range of segment indices.
class ProjectionSet {
 public:
  ProjectionSet() = default;
  ProjectionSet(int first_index, std::vector<CMatrix> matrices, ProjectionMethod method,
                double tolerance);

  int first_index() const noexcept { return first_index_; }
  int last_index() const noexcept { return first_index_ + static_cast<int>(matrices_.size()) - 1; }
  std::size_t size() const noexcept { return matrices_.size(); }
  Eigen::Index dimension() const noexcept {
    return matrices_.empty() ? 0 : matrices_.front().rows();
  }
  bool contains(int j) const noexcept { return j >= first_index_ && j <= last_index(); }

  const CMatrix& at(int j) const;
  const std::vector<CMatrix>& matrices() const noexcept { return matrices_; }
  double idempotency_residual(int j) const;
  const std::vector<double>& idempotency_residuals() const noexcept { return residuals_; }
  ProjectionMethod method() const noexcept { return method_; }
  double tolerance() const noexcept { return tolerance_; }

  /// max_{j != k} ||Q_j Q_k||_F
  double minimality_residual() const;
  /// ||sum_j Q_j - I||_F
  double completeness_residual() const;
  CMatrix sum() const;

 private:
  int first_index_ = 0;
  std::vector<CMatrix> matrices_;
  std::vector<double> residuals_;
  ProjectionMethod method_ = ProjectionMethod::contour_quadrature;
  double tolerance_ = 0.0;
};

/// Numerical rank at a relative singular-value threshold.
Eigen::Index numerical_rank(const CMatrix& m, double threshold = 1e-6);

}  // namespace rieszcert
