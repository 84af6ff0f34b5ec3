#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rieszcert/bounds.hpp"
#include "rieszcert/config.hpp"

namespace rieszcert {

struct InstanceEcho {
  std::string source = "generated";  // "generated" or "files"
  int n = 0;
  std::vector<Segment> segments;
  std::vector<int> cluster_sizes;
  double b_ratio = 0.0;
  std::uint64_t seed = 0;
  std::string perturbation_style;
  double b = 0.0;  // measured ||B||_2
  double d = 0.0;

  friend bool operator==(const InstanceEcho&, const InstanceEcho&) = default;
};

struct StageRecord {
  std::string name;
  std::string status;  // ok, error, skipped
  std::string error_code;
  std::string message;
  double seconds = 0.0;

  friend bool operator==(const StageRecord&, const StageRecord&) = default;
};

struct EigenRecord {
  double re = 0.0;
  double im = 0.0;
  int assigned_cluster = 0;
  double dist_to_segment = 0.0;
  int neighborhoods = 0;  // how many U_b(Delta_j) contain it

  friend bool operator==(const EigenRecord&, const EigenRecord&) = default;
};

struct EnclosureSummary {
  bool enclosure = false;
  int outside = 0;
  int ambiguous = 0;
  double max_excess = 0.0;  // max over eigenvalues of dist - b

  friend bool operator==(const EnclosureSummary&, const EnclosureSummary&) = default;
};

struct ProjectionSummary {
  int index = 0;
  int rank = 0;
  double idempotency = 0.0;
  int order = 0;
  int node_count = 0;
  bool converged = false;
  double oracle_difference = -1.0;   // negative when the oracle stage did not run
  double spectral_difference = 0.0;  // ||Q_j - P_j||_F

  friend bool operator==(const ProjectionSummary&, const ProjectionSummary&) = default;
};

struct VerificationSummary {
  double minimality = 0.0;
  double completeness = 0.0;
  double commutation = 0.0;
  double max_idempotency = 0.0;
  double oracle_max_difference = -1.0;
  double eigenvector_condition = 0.0;
  bool near_defective = false;
  bool ill_conditioned = false;

  friend bool operator==(const VerificationSummary&, const VerificationSummary&) = default;
};

struct PartialSumSummary {
  int n = 0;
  int lo = 0;
  int hi = 0;
  double norm = 0.0;
  double horizontal_norm = 0.0;
  double vertical_norm = 0.0;
  double big_vs_sum = 0.0;
  double three_term = 0.0;
  double idempotency = 0.0;
  int order = 0;

  friend bool operator==(const PartialSumSummary&, const PartialSumSummary&) = default;
};

struct BasisSummary {
  double m = 0.0;
  double M = 0.0;
  double condition = 0.0;
  double gram_hermitian = 0.0;       // ||G - G^*||_F / ||G||_F before symmetrization
  double gram_identity = 0.0;        // ||G - I||_F
  double k_root_residual = 0.0;      // ||K^2 - G||_F / ||G||_F
  double cross_orthogonality = 0.0;  // max |(G Q_j x, Q_k y)| / (||Q_j x|| ||Q_k y|| ||G||)
  double projection_hermitian = 0.0; // max ||P_j - P_j^*||_F
  double projection_idempotency = 0.0;
  double reconstruction = 0.0;       // max ||K^{-1} P_j K - Q_j||_F
  double unconditional_constant = 0.0;
  bool unconditional_exhaustive = true;
  int sign_vectors = 0;
  double c1 = 0.0;
  double c1_ceiling = 0.0;
  double c2 = 0.0;
  double sum_bound_factor = 0.0;
  double sum_bound_worst_ratio = 0.0;
  bool sum_bound_pass = false;
  std::vector<double> sum_bound_samples;

  friend bool operator==(const BasisSummary&, const BasisSummary&) = default;
};

struct BlockSummary {
  double off_block_residual = 0.0;
  double basis_off_block = 0.0;
  double basis_orthonormality = 0.0;
  double spectrum_distance = 0.0;
  std::vector<int> ranks;

  friend bool operator==(const BlockSummary&, const BlockSummary&) = default;
};

/// A residual compared with a tolerance (pass = value < threshold unless noted in the name).
struct CheckRecord {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;

  friend bool operator==(const CheckRecord&, const CheckRecord&) = default;
};

struct CertificationReport {
  InstanceEcho instance;
  RunConfig config;
  HypothesisReport hypothesis;
  std::vector<StageRecord> stages;
  EnclosureSummary enclosure;
  std::vector<EigenRecord> eigenvalues;
  double b_prime = 0.0;
  std::vector<ProjectionSummary> projections;
  VerificationSummary verification;
  std::vector<PartialSumSummary> partial_sums;
  BasisSummary basis;
  BlockSummary blocks;
  std::vector<BoundReport> bounds;
  std::vector<CheckRecord> checks;
  bool pass = false;
  int exit_code = 0;
  double total_seconds = 0.0;

  friend bool operator==(const CertificationReport&, const CertificationReport&) = default;
};

/// Zeroes every timing field so two reports of the same run compare equal.
CertificationReport without_timing(CertificationReport report);

/// Non-finite numbers are written as the strings "inf", "-inf" and "nan".
std::string to_json_text(const CertificationReport& report, int indent = 2);
CertificationReport report_from_json_text(const std::string& text);

CertificationReport load_report(const std::string& path);
void save_report(const CertificationReport& report, const std::string& path);

/// Columns re, im, assigned_cluster, dist_to_segment.
std::string eigenvalue_csv(const CertificationReport& report);
/// Segments, U_b stadiums, contours and eigenvalues of A in the complex plane.
std::string render_svg(const CertificationReport& report);

}  // namespace rieszcert
