#include "rieszcert/basis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "rieszcert/parallel.hpp"
#include "rieszcert/random.hpp"

namespace rieszcert {

CMatrix gram_operator(const ProjectionSet& set) {
  const auto n = set.dimension();
  CMatrix g = CMatrix::Zero(n, n);
  for (const auto& q : set.matrices()) g += q.adjoint() * q;
  g = 0.5 * (g + g.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(g, Eigen::EigenvaluesOnly);
  const double smallest = solver.eigenvalues()(0);
  if (!(smallest > 0.0)) {
    throw Error(ErrorCode::IndefiniteGram,
                "smallest Gram eigenvalue " + std::to_string(smallest) + " is not positive");
  }
  return g;
}

Similarity similarity_transform(const ProjectionSet& set, const CMatrix& gram) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(gram);
  const RVector& w = solver.eigenvalues();
  if (!(w(0) > 0.0)) {
    throw Error(ErrorCode::IndefiniteGram, "Gram operator is not positive definite");
  }
  const CMatrix& u = solver.eigenvectors();
  Similarity s;
  s.m = w(0);
  s.M = w(w.size() - 1);
  s.condition = std::sqrt(s.M / s.m);
  const RVector root = w.array().sqrt();
  const RVector inv_root = root.array().inverse();
  s.k = u * root.cast<Complex>().asDiagonal() * u.adjoint();
  s.k_inverse = u * inv_root.cast<Complex>().asDiagonal() * u.adjoint();
  s.orthogonal_projections.reserve(set.size());
  for (const auto& q : set.matrices()) s.orthogonal_projections.push_back(s.k * q * s.k_inverse);
  return s;
}

UnconditionalConstant unconditional_constant(const ProjectionSet& set, std::uint64_t seed,
                                             std::size_t samples, int parallel) {
  const std::size_t m = set.size();
  const auto& qs = set.matrices();
  UnconditionalConstant result;
  if (m == 0) return result;
  auto norm_for = [&](auto sign_of) {
    CMatrix s = CMatrix::Zero(set.dimension(), set.dimension());
    for (std::size_t j = 0; j < m; ++j) {
      if (sign_of(j)) s += qs[j];
      else s -= qs[j];
    }
    return spectral_norm(s);
  };

  std::vector<double> values;
  if (m <= 20) {
    // Fix the last sign to +1; the opposite vector has the same norm.
    const std::size_t count = std::size_t{1} << (m - 1);
    values.assign(count, 0.0);
    parallel_for(count, parallel, [&](std::size_t mask) {
      values[mask] = norm_for([&](std::size_t j) { return j + 1 == m || ((mask >> j) & 1U) == 0; });
    });
    result.exhaustive = true;
  } else {
    values.assign(samples, 0.0);
    const CounterRng base(seed);
    parallel_for(samples, parallel, [&](std::size_t k) {
      CounterRng rng = base.split(k);
      std::vector<bool> signs(m);
      for (std::size_t j = 0; j < m; ++j) signs[j] = (rng.next_u64() & 1U) == 0;
      values[k] = norm_for([&](std::size_t j) { return static_cast<bool>(signs[j]); });
    });
    result.exhaustive = false;
  }
  result.evaluated = values.size();
  result.value = *std::max_element(values.begin(), values.end());
  return result;
}

double Step2Constants::sum_bound_factor() const noexcept {
  return 1.0 + c1 * (2.0 * kPi / d + 8.0 * c2 / d) / (2.0 * kPi);
}

SumBoundResult sum_bound_check(const ProjectionSet& set, const std::vector<CVector>& xs,
                               const Step2Constants& constants, double slack) {
  SumBoundResult r;
  const double factor = constants.sum_bound_factor();
  for (const auto& x : xs) {
    double total = 0.0;
    for (const auto& q : set.matrices()) total += std::abs(x.dot(q * x));
    const double bound = factor * x.squaredNorm();
    r.values.push_back(total);
    r.bounds.push_back(bound);
    if (!(total <= bound + slack * std::max(1.0, bound))) r.pass = false;
    if (bound > 0.0) r.worst_ratio = std::max(r.worst_ratio, total / bound);
  }
  return r;
}

BlockDiagonalization block_diagonalize(const PerturbedPair& pair, const ProjectionSet& set,
                                       const CMatrix& k_matrix) {
  const auto n = pair.dimension();
  const CMatrix& a = pair.a_matrix();
  const CMatrix gram = k_matrix * k_matrix;
  BlockDiagonalization out;

  for (std::size_t j = 0; j < set.size(); ++j) {
    for (std::size_t k = 0; k < set.size(); ++k) {
      if (j == k) continue;
      out.off_block_residual = std::max(
          out.off_block_residual, (set.matrices()[k] * a * set.matrices()[j]).norm());
    }
  }

  out.basis = CMatrix::Zero(n, n);
  Eigen::Index col = 0;
  for (const auto& q : set.matrices()) {
    const Eigen::Index r = numerical_rank(q);
    out.ranks.push_back(r);
    if (r == 0) continue;
    if (col + r > n) throw Error(ErrorCode::RankDeficientBlock, "ranks of Q_j exceed dimension");
    Eigen::ColPivHouseholderQR<CMatrix> qr(q);
    const CMatrix w = (qr.householderQ() * CMatrix::Identity(n, n)).leftCols(r);
    const CMatrix inner = w.adjoint() * gram * w;
    Eigen::LLT<CMatrix> llt(0.5 * (inner + inner.adjoint()));
    if (llt.info() != Eigen::Success) {
      throw Error(ErrorCode::RankDeficientBlock, "G-orthonormalization failed");
    }
    // w L^{-*} has identity G-Gram matrix.
    out.basis.middleCols(col, r) = llt.matrixU().solve<Eigen::OnTheRight>(w);
    col += r;
  }
  if (col != n) {
    throw Error(ErrorCode::RankDeficientBlock,
                "ranks of Q_j sum to " + std::to_string(col) + " instead of " + std::to_string(n));
  }

  const CMatrix& s = out.basis;
  out.basis_orthonormality = (s.adjoint() * gram * s - CMatrix::Identity(n, n)).norm();
  const CMatrix reduced = s.partialPivLu().solve(a * s);
  Eigen::Index start = 0;
  for (Eigen::Index r : out.ranks) {
    out.blocks.push_back(reduced.block(start, start, r, r));
    start += r;
  }
  double off = 0.0;
  Eigen::Index rs = 0;
  for (Eigen::Index r : out.ranks) {
    const double row_total = reduced.middleRows(rs, r).norm();
    const double diag = reduced.block(rs, rs, r, r).norm();
    off = std::max(off, std::sqrt(std::max(0.0, row_total * row_total - diag * diag)));
    rs += r;
  }
  out.basis_off_block = off;
  return out;
}

double multiset_distance(const CVector& lhs, const CVector& rhs) {
  if (lhs.size() != rhs.size()) return std::numeric_limits<double>::infinity();
  std::vector<bool> used(static_cast<std::size_t>(rhs.size()), false);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < lhs.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    Eigen::Index pick = -1;
    for (Eigen::Index k = 0; k < rhs.size(); ++k) {
      if (used[static_cast<std::size_t>(k)]) continue;
      const double dist = std::abs(lhs(i) - rhs(k));
      if (dist < best) {
        best = dist;
        pick = k;
      }
    }
    used[static_cast<std::size_t>(pick)] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace rieszcert
