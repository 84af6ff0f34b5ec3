#pragma once

#include <vector>

#include <Eigen/LU>

#include "rieszcert/common.hpp"
#include "rieszcert/random.hpp"
#include "rieszcert/spectral_model.hpp"

namespace rieszcert {

/// LU factorization of A - lambda I with partial pivoting, reusable across right-hand sides.
class ShiftedFactorization {
 public:
  /// Throws SingularShift on a zero pivot or a reciprocal condition estimate below eps.
  ShiftedFactorization(const CMatrix& a, Complex lambda);

  CMatrix solve(const CMatrix& rhs) const;
  CMatrix inverse() const;
  Complex shift() const noexcept { return lambda_; }
  /// Reciprocal 1-norm condition estimate.
  double rcond() const noexcept { return rcond_; }
  bool ill_conditioned() const noexcept { return rcond_ < 1e-12; }

 private:
  Complex lambda_;
  Eigen::PartialPivLU<CMatrix> lu_;
  double rcond_ = 0.0;
};

struct ShiftSolve {
  CMatrix x;
  double rcond = 0.0;
  bool ill_conditioned = false;
};

/// X with (A - lambda I) X = rhs.
ShiftSolve solve_resolvent(const CMatrix& a, Complex lambda, const CMatrix& rhs);

/// Every operator appearing in the splitting at one shift.
struct ResolventPieces {
  Complex lambda;
  CMatrix a_resolvent;  // (A - lambda)^{-1}
  CMatrix t_resolvent;  // (T - lambda)^{-1}
  CMatrix neumann;      // M(lambda) = (I + B (T - lambda)^{-1})^{-1}
  CMatrix g;            // G(lambda) = (A - lambda)^{-1} B (T - lambda)^{-1}
  bool ill_conditioned = false;
};

ResolventPieces resolvent_pieces(const PerturbedPair& pair, Complex lambda);

/// G(lambda) = (A - lambda)^{-1} B (T - lambda)^{-1}.
CMatrix splitting_term(const PerturbedPair& pair, Complex lambda);

/// Residuals of (A-l)^{-1} = (T-l)^{-1} - G and of G = (T-l)^{-1} M B (T-l)^{-1},
/// both relative to ||(T-l)^{-1}||_F.
struct SplittingResiduals {
  double difference_form = 0.0;
  double neumann_form = 0.0;
};

SplittingResiduals splitting_residuals(const PerturbedPair& pair, const ResolventPieces& pieces);

struct ResolventSample {
  Complex lambda;
  double delta = 0.0;  // dist(lambda, union of segments)
  double a_resolvent_norm = 0.0;
  double t_resolvent_norm = 0.0;
  double bound = 0.0;  // 1 / (delta - b)
  double neumann_norm = 0.0;
  double neumann_bound = 0.0;  // 1 / (1 - b / delta)
  double g_norm = 0.0;
  double g_bound = 0.0;  // b / (delta (delta - b))
  double splitting_residual = 0.0;
  bool resolvent_pass = false;
  bool neumann_pass = false;
  bool g_pass = false;
  bool ill_conditioned = false;
};

/// Exact spectral norms at one shift against the closed-form bounds.
/// Throws InsideNeighborhood when delta <= b.
ResolventSample neumann_bound_check(const PerturbedPair& pair, Complex lambda,
                                    const SegmentFamily& family, double slack = 1e-8);

/// Points with b < dist(lambda, segments): half near the neighborhoods, half farther out.
std::vector<Complex> sample_outside_neighborhood(const SegmentFamily& family, double b,
                                                 std::size_t count, CounterRng& rng);

}  // namespace rieszcert
