#include "rieszcert/resolvent.hpp"

#include <cmath>
#include <limits>

namespace rieszcert {

ShiftedFactorization::ShiftedFactorization(const CMatrix& a, Complex lambda) : lambda_(lambda) {
  const auto n = a.rows();
  CMatrix shifted = a;
  shifted.diagonal().array() -= lambda;
  lu_.compute(shifted);
  const auto diag = lu_.matrixLU().diagonal();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (diag(i) == Complex(0.0) || !std::isfinite(std::abs(diag(i)))) {
      throw Error(ErrorCode::SingularShift, "zero pivot at shift (" + std::to_string(lambda.real()) +
                                                ", " + std::to_string(lambda.imag()) + ")");
    }
  }
  rcond_ = lu_.rcond();
  if (!(rcond_ >= std::numeric_limits<double>::epsilon())) {
    throw Error(ErrorCode::SingularShift, "numerically singular shift (" +
                                              std::to_string(lambda.real()) + ", " +
                                              std::to_string(lambda.imag()) + ")");
  }
}

CMatrix ShiftedFactorization::solve(const CMatrix& rhs) const { return lu_.solve(rhs); }

CMatrix ShiftedFactorization::inverse() const { return lu_.inverse(); }

ShiftSolve solve_resolvent(const CMatrix& a, Complex lambda, const CMatrix& rhs) {
  if (rhs.rows() != a.rows()) throw Error(ErrorCode::DimensionMismatch, "rhs rows differ from A");
  ShiftedFactorization lu(a, lambda);
  return {lu.solve(rhs), lu.rcond(), lu.ill_conditioned()};
}

ResolventPieces resolvent_pieces(const PerturbedPair& pair, Complex lambda) {
  const auto n = pair.dimension();
  ResolventPieces pieces;
  pieces.lambda = lambda;
  ShiftedFactorization lu(pair.a_matrix(), lambda);
  pieces.ill_conditioned = lu.ill_conditioned();
  pieces.a_resolvent = lu.inverse();
  if (pair.t().spectrum_distance(lambda) == 0.0) {
    throw Error(ErrorCode::LambdaOnSpectrum, "shift coincides with an eigenvalue of T");
  }
  pieces.t_resolvent = pair.t().resolvent(lambda);
  const CMatrix inner = CMatrix::Identity(n, n) + pair.b_matrix() * pieces.t_resolvent;
  pieces.neumann = inner.partialPivLu().inverse();
  pieces.g = pieces.a_resolvent * pair.b_matrix() * pieces.t_resolvent;
  return pieces;
}

CMatrix splitting_term(const PerturbedPair& pair, Complex lambda) {
  ShiftedFactorization lu(pair.a_matrix(), lambda);
  if (pair.t().spectrum_distance(lambda) == 0.0) {
    throw Error(ErrorCode::LambdaOnSpectrum, "shift coincides with an eigenvalue of T");
  }
  return lu.solve(pair.b_matrix() * pair.t().resolvent(lambda));
}

SplittingResiduals splitting_residuals(const PerturbedPair& pair, const ResolventPieces& p) {
  const double scale = std::max(p.t_resolvent.norm(), std::numeric_limits<double>::min());
  SplittingResiduals r;
  r.difference_form = (p.a_resolvent - p.t_resolvent + p.g).norm() / scale;
  const CMatrix second = p.t_resolvent * p.neumann * pair.b_matrix() * p.t_resolvent;
  r.neumann_form = (p.g - second).norm() / scale;
  return r;
}

ResolventSample neumann_bound_check(const PerturbedPair& pair, Complex lambda,
                                    const SegmentFamily& family, double slack) {
  ResolventSample s;
  s.lambda = lambda;
  s.delta = family.distance(lambda);
  const double b = pair.b_norm();
  if (!(s.delta > b)) {
    throw Error(ErrorCode::InsideNeighborhood,
                "dist(lambda, segments) = " + std::to_string(s.delta) + " <= b");
  }
  const auto pieces = resolvent_pieces(pair, lambda);
  s.ill_conditioned = pieces.ill_conditioned;
  s.a_resolvent_norm = spectral_norm(pieces.a_resolvent);
  s.t_resolvent_norm = 1.0 / pair.t().spectrum_distance(lambda);
  s.neumann_norm = spectral_norm(pieces.neumann);
  s.g_norm = spectral_norm(pieces.g);
  s.bound = 1.0 / (s.delta - b);
  s.neumann_bound = 1.0 / (1.0 - b / s.delta);
  s.g_bound = b / (s.delta * (s.delta - b));
  s.splitting_residual = splitting_residuals(pair, pieces).difference_form;
  s.resolvent_pass = s.a_resolvent_norm <= s.bound + slack;
  s.neumann_pass = s.neumann_norm <= s.neumann_bound + slack;
  s.g_pass = s.g_norm <= s.g_bound + slack;
  return s;
}

std::vector<Complex> sample_outside_neighborhood(const SegmentFamily& family, double b,
                                                 std::size_t count, CounterRng& rng) {
  std::vector<Complex> out;
  out.reserve(count);
  const double d = family.gap();
  const auto segs = family.segments();
  const double lo = segs.front().alpha - 2.0 * d - b;
  const double hi = segs.back().beta + 2.0 * d + b;
  const double height = 2.0 * d + b;
  const double shell = std::max(0.5 * d, b);
  while (out.size() < count) {
    Complex z;
    if (out.size() % 2 == 0) {
      // Near shell: distance b(1 + small) .. b + d/2 from a random segment.
      const auto& s = segs[static_cast<std::size_t>(rng.uniform() * segs.size()) % segs.size()];
      const double r = b + (1e-3 + 0.999 * rng.uniform()) * shell;
      const double straight = s.length();
      const double pick = rng.uniform() * (straight + kPi * r);
      const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
      if (pick < straight) {
        z = Complex(s.alpha + pick, sign * r);
      } else {
        const double theta = (rng.uniform() - 0.5) * kPi;
        const Complex dir = std::polar(r, theta);
        z = sign > 0 ? Complex(s.beta, 0.0) + dir : Complex(s.alpha, 0.0) - dir;
      }
    } else {
      z = Complex(rng.uniform(lo, hi), rng.uniform(-height, height));
    }
    if (family.distance(z) > b * (1.0 + 1e-9) + 1e-12) out.push_back(z);
  }
  return out;
}

}  // namespace rieszcert
