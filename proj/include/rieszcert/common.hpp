#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace rieszcert {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

enum class ErrorCode {
  EmptyFamily,
  OverlappingSegments,
  NotHermitian,
  SpectrumOutsideSegments,
  DimensionMismatch,
  LambdaOnSpectrum,
  SingularShift,
  InsideNeighborhood,
  ContourTouchesSpectrumNeighborhood,
  QuadratureStalled,
  UnassignedEigenvalue,
  IncompleteSystem,
  IndefiniteGram,
  RankDeficientBlock,
  InvalidSpec,
  ParseError,
  ConfigError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// Parse/usage problems map to exit status 2, everything else is numerical.
  bool is_input_error() const noexcept {
    return code_ == ErrorCode::ParseError || code_ == ErrorCode::ConfigError ||
           code_ == ErrorCode::InvalidSpec || code_ == ErrorCode::DimensionMismatch;
  }

 private:
  ErrorCode code_;
};

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Complex kTwoPiI{0.0, 2.0 * kPi};

/// Largest singular value.
double spectral_norm(const CMatrix& m);

/// Smallest singular value.
double smallest_singular_value(const CMatrix& m);

/// ||a - b||_F / max(||b||_F, tiny).
double relative_frobenius(const CMatrix& a, const CMatrix& b);

}  // namespace rieszcert
