#pragma once

#include <cstdint>
#include <vector>

#include "rieszcert/common.hpp"
#include "rieszcert/projection_set.hpp"
#include "rieszcert/spectral_model.hpp"

namespace rieszcert {

/// G = sum_j Q_j^* Q_j. The ranges of Q_j are mutually orthogonal in <x, y> = (G x, y).
/// Throws IndefiniteGram when the smallest eigenvalue is not positive.
CMatrix gram_operator(const ProjectionSet& set);

struct Similarity {
  CMatrix k;          // G^{1/2}
  CMatrix k_inverse;  // G^{-1/2}
  std::vector<CMatrix> orthogonal_projections;  // K Q_j K^{-1}
  double m = 0.0;     // smallest eigenvalue of G
  double M = 0.0;     // largest eigenvalue of G
  double condition = 0.0;  // cond(K) = sqrt(M / m)
};

/// K = G^{1/2} by Hermitian eigendecomposition and the orthogonal projections K Q_j K^{-1}.
Similarity similarity_transform(const ProjectionSet& set, const CMatrix& gram);

struct UnconditionalConstant {
  double value = 0.0;
  bool exhaustive = true;
  std::size_t evaluated = 0;  // sign vectors evaluated
};

/// sup over signs of ||sum_j e_j Q_j||_2; exhaustive up to 20 indices (e and -e give the same
/// norm, so 2^(|J|-1) vectors), otherwise `samples` seeded random sign vectors.
UnconditionalConstant unconditional_constant(const ProjectionSet& set, std::uint64_t seed = 0,
                                             std::size_t samples = 10000, int parallel = 1);

/// Constants of the Step-2 estimate for one instance.
struct Step2Constants {
  double d = 0.0;
  double b = 0.0;
  double c1 = 0.0;          // measured max ||M(lambda) B||_2 over the rectangle nodes
  double c1_ceiling = 0.0;  // b / (1 - 2b/d)
  double c2 = 0.0;          // 4 + pi^2 / 6
  /// ||x||^2 multiplier: 1 + C1 (2 pi/d + 8 C2/d) / (2 pi)
  double sum_bound_factor() const noexcept;
};

struct SumBoundResult {
  std::vector<double> values;  // sum_j |(Q_j x, x)|
  std::vector<double> bounds;  // sum_bound_factor * ||x||^2
  bool pass = true;
  double worst_ratio = 0.0;
};

/// sum_j |(Q_j x, x)| for every x, against the assembled Step-2 bound.
SumBoundResult sum_bound_check(const ProjectionSet& set, const std::vector<CVector>& xs,
                               const Step2Constants& constants, double slack = 1e-8);

struct BlockDiagonalization {
  std::vector<CMatrix> blocks;         // A restricted to range(Q_j) in a G-orthonormal basis
  CMatrix basis;                       // columns: G-orthonormal bases of the ranges, in order
  double off_block_residual = 0.0;     // max_{j != k} ||Q_k A Q_j||_F
  double basis_off_block = 0.0;        // largest off-block entry block of S^{-1} A S (Frobenius)
  double basis_orthonormality = 0.0;   // ||S^* G S - I||_F
  std::vector<Eigen::Index> ranks;
};

/// Block-diagonal form of A in a basis adapted to the decomposition into ranges of Q_j.
/// Throws RankDeficientBlock when the ranks do not add up to n.
BlockDiagonalization block_diagonalize(const PerturbedPair& pair, const ProjectionSet& set,
                                       const CMatrix& k_matrix);

/// Largest distance in a greedy nearest matching of two eigenvalue multisets.
double multiset_distance(const CVector& lhs, const CVector& rhs);

}  // namespace rieszcert
