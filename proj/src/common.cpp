#include "rieszcert/common.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace rieszcert {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyFamily: return "EmptyFamily";
    case ErrorCode::OverlappingSegments: return "OverlappingSegments";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::SpectrumOutsideSegments: return "SpectrumOutsideSegments";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::LambdaOnSpectrum: return "LambdaOnSpectrum";
    case ErrorCode::SingularShift: return "SingularShift";
    case ErrorCode::InsideNeighborhood: return "InsideNeighborhood";
    case ErrorCode::ContourTouchesSpectrumNeighborhood: return "ContourTouchesSpectrumNeighborhood";
    case ErrorCode::QuadratureStalled: return "QuadratureStalled";
    case ErrorCode::UnassignedEigenvalue: return "UnassignedEigenvalue";
    case ErrorCode::IncompleteSystem: return "IncompleteSystem";
    case ErrorCode::IndefiniteGram: return "IndefiniteGram";
    case ErrorCode::RankDeficientBlock: return "RankDeficientBlock";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "UnknownError";
}

double spectral_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  // sigma_max^2 is the top eigenvalue of the smaller Gram matrix; relative accuracy is eps.
  const CMatrix g = m.rows() < m.cols() ? CMatrix(m * m.adjoint()) : CMatrix(m.adjoint() * m);
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(g, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, solver.eigenvalues()(solver.eigenvalues().size() - 1)));
}

double smallest_singular_value(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<CMatrix> svd(m);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

double relative_frobenius(const CMatrix& a, const CMatrix& b) {
  const double denom = std::max(b.norm(), std::numeric_limits<double>::min());
  return (a - b).norm() / denom;
}

}  // namespace rieszcert
