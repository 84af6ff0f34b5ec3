#pragma once

#include <optional>
#include <vector>

#include "rieszcert/common.hpp"
#include "rieszcert/contour.hpp"
#include "rieszcert/projection_set.hpp"
#include "rieszcert/spectral_model.hpp"

namespace rieszcert {

struct QuadratureOptions {
  int initial_order = 32;  // Gauss-Legendre points per panel
  int max_order = 512;     // doubling cap
  PanelRule panels{};
  int parallel = 1;
  bool throw_on_stall = true;
};

struct RieszProjection {
  CMatrix matrix;
  double idempotency_residual = 0.0;
  int order = 0;
  std::size_t node_count = 0;
  bool converged = false;
  bool ill_conditioned = false;
};

/// -(1/2 pi i) sum_m w_m (A - lambda_m)^{-1} for the contour's current nodes.
CMatrix contour_resolvent_integral(const CMatrix& a, const Contour& contour, int parallel,
                                   bool* ill_conditioned = nullptr);

/// Q = -(1/2 pi i) oint (A - lambda)^{-1} d lambda with order doubling until
/// ||Q^2 - Q||_F < tol. Throws QuadratureStalled at the cap unless throw_on_stall is false.
RieszProjection riesz_projection(const PerturbedPair& pair, const Contour& contour, double tol,
                                 const QuadratureOptions& options = {});

struct ContourProjections {
  ProjectionSet set;
  std::vector<RieszProjection> details;
  double b_prime = 0.0;
};

/// Q_j for every segment from contours around U_{b'}(Delta_j); b' defaults to (b + d/2)/2.
ContourProjections contour_projections(const PerturbedPair& pair, const SegmentFamily& family,
                                       double b, double tol, const QuadratureOptions& options = {},
                                       ContourStyle style = ContourStyle::rectangle,
                                       std::optional<double> b_prime = {});

struct EigenOracle {
  CVector eigenvalues;
  std::vector<int> assignment;       // segment index per eigenvalue
  std::vector<double> distance;      // distance to the assigned segment
  std::size_t ambiguous = 0;         // eigenvalues within b of more than one segment
  double eigenvector_condition = 0.0;
  bool near_defective = false;       // condition > 1e10
  ProjectionSet set;
};

/// Dense eigendecomposition A = V diag V^{-1}; Q_j = V diag(group j) V^{-1}; grouping
/// by dist(lambda, Delta_j) <= b, nearest segment on ties. Throws UnassignedEigenvalue.
EigenOracle eigen_oracle_projections(const PerturbedPair& pair, const SegmentFamily& family,
                                     double b);

struct CorrectionIntegral {
  int n = 0;
  int lo = 0;
  int hi = 0;
  CMatrix matrix;                // I_n
  double norm = 0.0;             // ||I_n||_2
  double horizontal_norm = 0.0;  // ||I_n^1||_2
  double vertical_norm = 0.0;    // ||I_n^2||_2
  double big_vs_sum = 0.0;       // ||-(1/2 pi i) oint_{R_n} (A-l)^{-1} - sum Q_j||_F
  double three_term = 0.0;       // ||sum Q_j - sum P_j - I_n||_F
  double idempotency = 0.0;      // of the big-contour integral
  std::size_t node_count = 0;
  int order = 0;
};

/// Partial-sum identity over R_n for the set's Q_j (j in -n..n).
CorrectionIntegral partial_sum_check(const PerturbedPair& pair, const SegmentFamily& family,
                                     double b, int n, const ProjectionSet& set, double tol,
                                     const QuadratureOptions& options = {});

/// n values whose index window -n..n meets the family, smallest first, up to exhaustion.
std::vector<int> admissible_partial_sum_orders(const SegmentFamily& family);

struct VerificationReport {
  double minimality = 0.0;
  double completeness = 0.0;
  double commutation = 0.0;
  double max_idempotency = 0.0;
  bool enclosure = false;
  std::size_t outside = 0;    // eigenvalues of A in no U_b(Delta_j)
  std::size_t ambiguous = 0;  // eigenvalues in more than one U_b(Delta_j)
};

/// Reports the set's residuals and whether the spectrum of A sits in disjoint U_b(Delta_j).
VerificationReport verify_projection_set(const ProjectionSet& set, const PerturbedPair& pair,
                                         const SegmentFamily& family, double b);

/// x_k = Q_k x. Throws IncompleteSystem when ||sum Q_k - I||_F >= 1e-6.
std::vector<CVector> expand_vector(const ProjectionSet& set, const CVector& x);

/// Enclosure slack 1e-10 * max(1, scale) used for dist(lambda, Delta_j) <= b tests.
double enclosure_slack(const SegmentFamily& family, const PerturbedPair& pair);

}  // namespace rieszcert
