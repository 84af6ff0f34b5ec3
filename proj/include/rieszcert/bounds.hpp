#pragma once

#include <string>
#include <vector>

#include "rieszcert/basis.hpp"
#include "rieszcert/common.hpp"
#include "rieszcert/contour.hpp"
#include "rieszcert/projections.hpp"
#include "rieszcert/resolvent.hpp"
#include "rieszcert/spectral_model.hpp"

namespace rieszcert {

/// One inequality lhs <= rhs evaluated on an instance.
struct BoundReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
  double slack = 0.0;  // rhs - lhs
  std::string context;
  bool applicable = true;  // false when the inequality's hypothesis fails (pass is then false)

  friend bool operator==(const BoundReport&, const BoundReport&) = default;
};

inline constexpr double kBoundTolerance = 1e-8;

/// pass = lhs <= rhs + tolerance * max(1, |rhs|). Identities use tolerance 0.
BoundReport make_bound(std::string name, double lhs, double rhs, std::string context = {},
                       double tolerance = kBoundTolerance);
BoundReport inapplicable_bound(std::string name, std::string reason);
/// Collapses samples of one inequality into the report closest to failing; pass = all pass.
BoundReport worst_of(const std::string& name, const std::vector<BoundReport>& samples);

/// C2 = 4 + pi^2/6.
double gap_sum_constant() noexcept;

/// ||G(lambda)||_2 <= b / ((gamma_n - b) gamma_n) on the horizontal sides of R_n.
BoundReport check_horizontal_bound(const PerturbedPair& pair, const SegmentFamily& family, int n,
                                   int samples = 64);

struct VerticalBounds {
  BoundReport central;  // ||int_{omega_n} G|| <= 2bd / ((d/2 - b)(d/2))
  BoundReport outer;    // ||int_{omega_n^+-} G|| <= b / (d - b)
};

/// Both vertical sides of R_n are checked; the reports carry the worst side.
VerticalBounds check_vertical_bounds(const PerturbedPair& pair, const SegmentFamily& family, int n,
                                     int order = 32, int parallel = 1, const PanelRule& rule = {});

/// C(b, d) = (1/2 pi)(2 * 2bd/((d/2-b)(d/2)) + 4 * b/(d-b) + 4b/(d-b)).
double correction_constant(double b, double d);

/// ||I_n||_2 <= C(b, d), one report per n.
std::vector<BoundReport> correction_reports(const std::vector<CorrectionIntegral>& corrections,
                                            double b, double d);

/// Computes I_n for every admissible n and bounds them with the same C(b, d).
std::vector<BoundReport> check_In_uniform_bound(const PerturbedPair& pair,
                                                const SegmentFamily& family,
                                                const ProjectionSet& set, double tol,
                                                const QuadratureOptions& options = {});

struct SpectralFunctionValue {
  double spectral_sum = 0.0;  // sum_i |(v_i, x)|^2 / ((t_i - xi)^2 + tau^2)
  double direct = 0.0;        // ||(T - lambda)^{-1} x||^2 from an LU solve
  double relative_error = 0.0;
  bool pass = false;  // relative_error < 1e-10
};

/// Throws LambdaOnSpectrum.
SpectralFunctionValue spectral_function_integral(const HermitianOperator& t, const CVector& x,
                                                 Complex lambda);

/// ||(T - lambda)^{-1} x|| |lambda| / ||x|| along a ray at the given radii.
std::vector<double> resolvent_decay_ratios(const HermitianOperator& t, const CVector& x,
                                           const std::vector<double>& radii, double angle);

/// |ratio - 1| at the largest radius 1e6 * scale must be below 1%.
BoundReport check_resolvent_decay(const HermitianOperator& t, const SegmentFamily& family,
                                  const CVector& x);

struct LineIntegral {
  double analytic = 0.0;    // (pi/d) ||x||^2
  double quadrature = 0.0;  // over |xi| <= R
  double tail = 0.0;        // 2||x||^2 / (R - max|t_i|)
  double truncation = 0.0;  // R
  bool bracketed = false;   // quadrature <= analytic <= quadrature + tail
};

LineIntegral line_integral(const HermitianOperator& t, double d, const CVector& x);

/// int_{Im lambda = +-d} ||(T - lambda)^{-1} x||^2 |d lambda| = (pi/d) ||x||^2 to 1e-6 relative.
BoundReport check_line_integral_identity(const HermitianOperator& t, const SegmentFamily& family,
                                         const CVector& x);

/// sum_j int_{omega_j} ||(T - lambda)^{-1} x||^2 |d lambda| from exact per-eigenvalue integrals.
double gap_sum(const HermitianOperator& t, const SegmentFamily& family, const CVector& x);

/// gap_sum <= 2d (2 C2 / d^2) ||x||^2 = (4 C2 / d) ||x||^2.
BoundReport check_gap_sum_bound(const HermitianOperator& t, const SegmentFamily& family,
                                const CVector& x);

/// (2 C2 / d^2) ||x||^2, the bound without the 2d length factor; fails for large d.
double gap_sum_literal_rhs(double d, double x_norm_squared);

/// min_{j < k} dist(U_b(Delta_j), U_b(Delta_k)) >= d - 2b.
BoundReport check_neighborhood_separation(const SegmentFamily& family, double b);

struct Step2Analysis {
  Step2Constants constants;
  std::vector<double> aggregate;        // sum_j |oint_{Gamma~_j} (G x, x) d lambda| per x
  std::vector<double> aggregate_bound;  // C1 (2 pi/d + 8 C2/d) ||x||^2 per x
  std::size_t node_count = 0;
};

/// Integrates (G x, x) over every step-2 rectangle and measures C1 on the same nodes.
Step2Analysis step2_analysis(const PerturbedPair& pair, const SegmentFamily& family,
                             const std::vector<CVector>& xs, int order = 32, int parallel = 1,
                             const PanelRule& rule = {});

BoundReport step2_constant_report(const Step2Analysis& analysis);
BoundReport step2_aggregate_report(const Step2Analysis& analysis);

/// Every resolvent inequality at the given shifts, collapsed to one report each:
/// resolvent_perturbed, neumann_factor, splitting_g_norm, splitting_identity.
std::vector<BoundReport> resolvent_reports(const PerturbedPair& pair, const SegmentFamily& family,
                                           const std::vector<Complex>& shifts, int parallel = 1);

}  // namespace rieszcert
