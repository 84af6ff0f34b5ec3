#include "rieszcert/projections.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "rieszcert/parallel.hpp"
#include "rieszcert/resolvent.hpp"

namespace rieszcert {

namespace {

constexpr std::size_t kChunk = 16;

// Sums per-node contributions into `slots` accumulators. Nodes are grouped into fixed
// chunks, and chunk partials are reduced in chunk order, so the result is independent of
// the thread count.
template <typename Body>
std::vector<CMatrix> accumulate_nodes(const std::vector<QuadratureNode>& nodes, std::size_t slots,
                                      Eigen::Index n, int parallel, Body body) {
  const std::size_t chunks = (nodes.size() + kChunk - 1) / kChunk;
  std::vector<std::vector<CMatrix>> partial(chunks,
                                            std::vector<CMatrix>(slots, CMatrix::Zero(n, n)));
  parallel_for(chunks, parallel, [&](std::size_t c) {
    const std::size_t end = std::min(nodes.size(), (c + 1) * kChunk);
    for (std::size_t m = c * kChunk; m < end; ++m) body(nodes[m], partial[c]);
  });
  std::vector<CMatrix> total(slots, CMatrix::Zero(n, n));
  for (const auto& p : partial) {
    for (std::size_t s = 0; s < slots; ++s) total[s] += p[s];
  }
  return total;
}

Exclusion family_exclusion(const SegmentFamily& family, double b) {
  return Exclusion{std::vector<Segment>(family.segments().begin(), family.segments().end()), b};
}

}  // namespace

double enclosure_slack(const SegmentFamily& family, const PerturbedPair& pair) {
  return 1e-10 * std::max({1.0, family.scale(), pair.t().spectral_radius()});
}

CMatrix contour_resolvent_integral(const CMatrix& a, const Contour& contour, int parallel,
                                   bool* ill_conditioned) {
  std::atomic<bool> ill{false};
  auto sums = accumulate_nodes(contour.nodes(), 1, a.rows(), parallel,
                               [&](const QuadratureNode& node, std::vector<CMatrix>& acc) {
                                 ShiftedFactorization lu(a, node.point);
                                 if (lu.ill_conditioned()) ill = true;
                                 acc[0] += node.weight * lu.inverse();
                               });
  if (ill_conditioned != nullptr) *ill_conditioned = ill;
  return -sums[0] / kTwoPiI;
}

RieszProjection riesz_projection(const PerturbedPair& pair, const Contour& contour, double tol,
                                 const QuadratureOptions& options) {
  RieszProjection result;
  for (int order = options.initial_order;; order *= 2) {
    const Contour discretized = attach_quadrature(contour, order, options.panels);
    bool ill = false;
    result.matrix = contour_resolvent_integral(pair.a_matrix(), discretized, options.parallel, &ill);
    result.ill_conditioned = result.ill_conditioned || ill;
    result.idempotency_residual = (result.matrix * result.matrix - result.matrix).norm();
    result.order = order;
    result.node_count = discretized.nodes().size();
    if (result.idempotency_residual < tol) {
      result.converged = true;
      return result;
    }
    if (order * 2 > options.max_order) break;
  }
  if (options.throw_on_stall) {
    throw Error(ErrorCode::QuadratureStalled,
                "idempotency residual " + std::to_string(result.idempotency_residual) +
                    " >= tol at order " + std::to_string(result.order));
  }
  return result;
}

ContourProjections contour_projections(const PerturbedPair& pair, const SegmentFamily& family,
                                       double b, double tol, const QuadratureOptions& options,
                                       ContourStyle style, std::optional<double> b_prime) {
  ContourProjections out;
  out.b_prime = b_prime.value_or(default_b_prime(b, family.gap()));
  const Exclusion excl = family_exclusion(family, b);
  std::vector<CMatrix> matrices;
  for (int j = family.first_index(); j <= family.last_index(); ++j) {
    const Contour c = segment_contour(family.at(j), out.b_prime, style).with_exclusion(excl);
    auto q = riesz_projection(pair, c, tol, options);
    matrices.push_back(q.matrix);
    out.details.push_back(std::move(q));
  }
  out.set = ProjectionSet(family.first_index(), std::move(matrices),
                          ProjectionMethod::contour_quadrature, tol);
  return out;
}

EigenOracle eigen_oracle_projections(const PerturbedPair& pair, const SegmentFamily& family,
                                     double b) {
  const auto n = pair.dimension();
  Eigen::ComplexEigenSolver<CMatrix> solver(pair.a_matrix(), true);
  EigenOracle oracle;
  oracle.eigenvalues = solver.eigenvalues();
  const CMatrix& v = solver.eigenvectors();
  Eigen::BDCSVD<CMatrix> svd(v);
  const auto& s = svd.singularValues();
  oracle.eigenvector_condition =
      s(s.size() - 1) > 0.0 ? s(0) / s(s.size() - 1) : std::numeric_limits<double>::infinity();
  oracle.near_defective = !(oracle.eigenvector_condition <= 1e10);
  const CMatrix v_inv = v.partialPivLu().inverse();

  const double slack = enclosure_slack(family, pair);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Complex lambda = oracle.eigenvalues(i);
    int best = family.first_index();
    double best_dist = std::numeric_limits<double>::infinity();
    std::size_t inside = 0;
    for (int j = family.first_index(); j <= family.last_index(); ++j) {
      const double dist = family.at(j).distance(lambda);
      if (dist <= b + slack) ++inside;
      if (dist < best_dist) {
        best_dist = dist;
        best = j;
      }
    }
    if (inside == 0) {
      throw Error(ErrorCode::UnassignedEigenvalue,
                  "eigenvalue (" + std::to_string(lambda.real()) + ", " +
                      std::to_string(lambda.imag()) + ") lies in no b-neighborhood");
    }
    if (inside > 1) ++oracle.ambiguous;
    oracle.assignment.push_back(best);
    oracle.distance.push_back(best_dist);
  }

  std::vector<CMatrix> matrices(family.size(), CMatrix::Zero(n, n));
  for (Eigen::Index i = 0; i < n; ++i) {
    auto& q = matrices[static_cast<std::size_t>(oracle.assignment[static_cast<std::size_t>(i)] -
                                                family.first_index())];
    q += v.col(i) * v_inv.row(i);
  }
  oracle.set = ProjectionSet(family.first_index(), std::move(matrices),
                             ProjectionMethod::eigen_oracle, 1e-10);
  return oracle;
}

std::vector<int> admissible_partial_sum_orders(const SegmentFamily& family) {
  const int reach = std::max(std::abs(family.first_index()), std::abs(family.last_index()));
  std::vector<int> orders;
  for (int n = 0; n <= reach; ++n) {
    if (std::max(-n, family.first_index()) <= std::min(n, family.last_index())) orders.push_back(n);
  }
  return orders;
}

CorrectionIntegral partial_sum_check(const PerturbedPair& pair, const SegmentFamily& family,
                                     double b, int n, const ProjectionSet& set, double tol,
                                     const QuadratureOptions& options) {
  const Contour rect = partial_sum_rectangle(family, n, b);
  const auto dim = pair.dimension();
  CorrectionIntegral result;
  result.n = n;
  result.lo = std::max(-n, family.first_index());
  result.hi = std::min(n, family.last_index());

  std::vector<bool> horizontal(rect.edge_count());
  for (std::size_t e = 0; e < rect.edge_count(); ++e) horizontal[e] = rect.edge_is_horizontal(e);

  CMatrix big;
  CMatrix i_horizontal;
  CMatrix i_vertical;
  for (int order = options.initial_order;; order *= 2) {
    const Contour disc = attach_quadrature(rect, order, options.panels);
    const auto sums = accumulate_nodes(
        disc.nodes(), 3, dim, options.parallel,
        [&](const QuadratureNode& node, std::vector<CMatrix>& acc) {
          ShiftedFactorization lu(pair.a_matrix(), node.point);
          const CMatrix x = lu.inverse();
          const CMatrix g = x * pair.b_matrix() * pair.t().resolvent(node.point);
          acc[0] += node.weight * x;
          acc[horizontal[static_cast<std::size_t>(node.edge)] ? 1 : 2] += node.weight * g;
        });
    big = -sums[0] / kTwoPiI;
    i_horizontal = sums[1] / kTwoPiI;
    i_vertical = sums[2] / kTwoPiI;
    result.idempotency = (big * big - big).norm();
    result.order = order;
    result.node_count = disc.nodes().size();
    if (result.idempotency < tol || order * 2 > options.max_order) break;
  }

  result.matrix = i_horizontal + i_vertical;
  result.norm = spectral_norm(result.matrix);
  result.horizontal_norm = spectral_norm(i_horizontal);
  result.vertical_norm = spectral_norm(i_vertical);

  const ProjectionSet p = unperturbed_projections(pair.t(), family);
  CMatrix sum_q = CMatrix::Zero(dim, dim);
  CMatrix sum_p = CMatrix::Zero(dim, dim);
  for (int j = result.lo; j <= result.hi; ++j) {
    sum_q += set.at(j);
    sum_p += p.at(j);
  }
  result.big_vs_sum = (big - sum_q).norm();
  result.three_term = (sum_q - sum_p - result.matrix).norm();
  return result;
}

VerificationReport verify_projection_set(const ProjectionSet& set, const PerturbedPair& pair,
                                         const SegmentFamily& family, double b) {
  VerificationReport r;
  r.minimality = set.minimality_residual();
  r.completeness = set.completeness_residual();
  for (const auto& q : set.matrices()) {
    r.commutation = std::max(r.commutation, (pair.a_matrix() * q - q * pair.a_matrix()).norm());
  }
  for (double res : set.idempotency_residuals()) r.max_idempotency = std::max(r.max_idempotency, res);

  Eigen::ComplexEigenSolver<CMatrix> solver(pair.a_matrix(), false);
  const double slack = enclosure_slack(family, pair);
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    std::size_t hits = 0;
    for (const auto& s : family.segments()) {
      if (s.distance(solver.eigenvalues()(i)) <= b + slack) ++hits;
    }
    if (hits == 0) ++r.outside;
    if (hits > 1) ++r.ambiguous;
  }
  r.enclosure = r.outside == 0 && r.ambiguous == 0;
  return r;
}

std::vector<CVector> expand_vector(const ProjectionSet& set, const CVector& x) {
  const double residual = set.completeness_residual();
  if (!(residual < 1e-6)) {
    throw Error(ErrorCode::IncompleteSystem,
                "completeness residual " + std::to_string(residual) + " >= 1e-6");
  }
  if (x.size() != set.dimension()) throw Error(ErrorCode::DimensionMismatch, "vector length");
  std::vector<CVector> parts;
  parts.reserve(set.size());
  for (const auto& q : set.matrices()) parts.emplace_back(q * x);
  return parts;
}

}  // namespace rieszcert
