#include <doctest.h>

#include "helpers.hpp"
#include "rieszcert/basis.hpp"
#include "rieszcert/bounds.hpp"
#include "rieszcert/projections.hpp"
#include "rieszcert/random.hpp"

using namespace rieszcert;

namespace {

ProjectionSet triangular_set(double c) {
  CMatrix q0(2, 2);
  q0 << 1.0, -c, 0.0, 0.0;
  return ProjectionSet(0, {q0, CMatrix::Identity(2, 2) - q0}, ProjectionMethod::eigen_oracle, 0.0);
}

}  // namespace

TEST_CASE("gram operator and equivalence constants of a 2x2 system") {
  // Reference values from an independent numpy evaluation.
  const auto set = triangular_set(0.3);
  const CMatrix g = gram_operator(set);
  CHECK(std::abs(g(0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(g(0, 1) + 0.3) < 1e-15);
  CHECK(std::abs(g(1, 1) - 1.18) < 1e-15);
  const auto s = similarity_transform(set, g);
  CHECK(s.m == doctest::Approx(0.7767908047326837).epsilon(1e-14));
  CHECK(s.M == doctest::Approx(1.4032091952673165).epsilon(1e-14));
  CHECK(s.condition == doctest::Approx(1.344030650891055).epsilon(1e-14));
  CHECK(std::abs(s.k(0, 0) - 0.989400395497483) < 1e-14);
  CHECK(std::abs(s.k(0, 1) + 0.14521314468540472) < 1e-14);
  CHECK(std::abs(s.k(1, 1) - 1.0765282823087259) < 1e-14);
  const auto uc = unconditional_constant(set);
  CHECK(uc.value == doctest::Approx(1.3440306508910551).epsilon(1e-13));
  CHECK(uc.exhaustive);
  CHECK(uc.evaluated == 2);
}

TEST_CASE("orthogonal system gives identity gram and constant one") {
  const auto inst = generate_instance(testing::random_spec(6, 0.0));
  const auto p = unperturbed_projections(inst.pair.t(), inst.family);
  const CMatrix g = gram_operator(p);
  const auto n = g.rows();
  CHECK((g - CMatrix::Identity(n, n)).norm() < 1e-10);
  CHECK(unconditional_constant(p).value == doctest::Approx(1.0).epsilon(1e-10));
  const auto s = similarity_transform(p, g);
  CHECK((s.k - CMatrix::Identity(n, n)).norm() < 1e-10);
}

TEST_CASE("single projection equal to the identity") {
  const ProjectionSet set(0, {CMatrix::Identity(3, 3)}, ProjectionMethod::eigen_oracle, 0.0);
  CHECK((gram_operator(set) - CMatrix::Identity(3, 3)).norm() == 0.0);
  CHECK(unconditional_constant(set).value == doctest::Approx(1.0));
}

TEST_CASE("indefinite gram is rejected") {
  const ProjectionSet set(0, {CMatrix::Zero(2, 2)}, ProjectionMethod::eigen_oracle, 0.0);
  try {
    gram_operator(set);
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IndefiniteGram);
  }
}

TEST_CASE("similarity certificate on random instances") {
  for (std::uint64_t seed = 20; seed < 24; ++seed) {
    const auto inst = generate_instance(testing::random_spec(seed));
    const auto cp = contour_projections(inst.pair, inst.family, inst.b, 1e-9);
    const CMatrix g = gram_operator(cp.set);
    const auto s = similarity_transform(cp.set, g);
    CHECK(s.m > 0.0);
    CHECK((s.k * s.k - g).norm() / g.norm() < 1e-10);
    for (std::size_t j = 0; j < cp.set.size(); ++j) {
      const CMatrix& ph = s.orthogonal_projections[j];
      CHECK((ph - ph.adjoint()).norm() < 1e-8);
      CHECK((ph * ph - ph).norm() < 1e-8);
      CHECK((s.k_inverse * ph * s.k - cp.set.matrices()[j]).norm() < 1e-8);
    }
    // Norm equivalence m ||x||^2 <= (Gx, x) <= M ||x||^2.
    CounterRng rng(seed);
    for (int k = 0; k < 20; ++k) {
      const CVector x = random_unit_vector(rng, g.rows());
      const double q = x.dot(g * x).real();
      CHECK(q >= s.m - 1e-12);
      CHECK(q <= s.M + 1e-12);
    }
    // Ranges are orthogonal in the G-product.
    for (int k = 0; k < 20; ++k) {
      const CVector x = random_unit_vector(rng, g.rows());
      const CVector y = random_unit_vector(rng, g.rows());
      const CVector qx = cp.set.matrices()[0] * x;
      const CVector qy = cp.set.matrices()[1] * y;
      CHECK(std::abs(qy.dot(g * qx)) <= 1e-8 * qx.norm() * qy.norm() * spectral_norm(g) + 1e-15);
    }
    CHECK(unconditional_constant(cp.set).value <= s.condition + 1e-6);
  }
}

TEST_CASE("sampled sign vectors beyond twenty indices") {
  std::vector<CMatrix> qs;
  for (int j = 0; j < 22; ++j) {
    CMatrix q = CMatrix::Zero(22, 22);
    q(j, j) = 1.0;
    qs.push_back(q);
  }
  const ProjectionSet set(0, qs, ProjectionMethod::eigen_oracle, 0.0);
  const auto uc = unconditional_constant(set, 5, 64);
  CHECK_FALSE(uc.exhaustive);
  CHECK(uc.evaluated == 64);
  CHECK(uc.value == doctest::Approx(1.0));
}

TEST_CASE("sum bound with zero perturbation is the squared norm") {
  const auto inst = generate_instance(testing::random_spec(8, 0.0));
  const auto p = unperturbed_projections(inst.pair.t(), inst.family);
  CounterRng rng(1);
  std::vector<CVector> xs;
  for (int k = 0; k < 10; ++k) xs.push_back(random_unit_vector(rng, inst.pair.dimension()));
  Step2Constants c;
  c.d = inst.family.gap();
  c.c2 = gap_sum_constant();
  const auto r = sum_bound_check(p, xs, c);
  CHECK(r.pass);
  for (double v : r.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("block diagonalization") {
  const auto inst = generate_instance(testing::random_spec(9));
  const auto cp = contour_projections(inst.pair, inst.family, inst.b, 1e-9);
  const auto s = similarity_transform(cp.set, gram_operator(cp.set));
  const auto bd = block_diagonalize(inst.pair, cp.set, s.k);
  CHECK(bd.off_block_residual < 1e-8);
  CHECK(bd.basis_orthonormality < 1e-8);
  CHECK(bd.basis_off_block < 1e-8);
  Eigen::Index total = 0;
  for (const auto& blk : bd.blocks) total += blk.rows();
  CHECK(total == inst.pair.dimension());
}

TEST_CASE("multiset distance") {
  CVector a(3), b(3);
  a << Complex(0, 0), Complex(1, 1), Complex(2, 0);
  b << Complex(2, 0), Complex(0, 0), Complex(1, 1.5);
  CHECK(multiset_distance(a, b) == doctest::Approx(0.5));
}
