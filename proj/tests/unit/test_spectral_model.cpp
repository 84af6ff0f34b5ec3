#include <doctest.h>

#include "helpers.hpp"
#include "rieszcert/spectral_model.hpp"

using namespace rieszcert;

TEST_CASE("segment distance") {
  const Segment s{-1.0, 2.0};
  CHECK(s.distance({0.5, 0.0}) == 0.0);
  CHECK(s.distance({0.5, -3.0}) == doctest::Approx(3.0));
  CHECK(s.distance({5.0, 4.0}) == doctest::Approx(5.0));
  CHECK(s.distance({-4.0, 0.0}) == doctest::Approx(3.0));
}

TEST_CASE("family sorting, gap and relabelling") {
  const auto f = build_segment_family({{3.0, 4.0}, {-1.0, 0.5}, {1.0, 2.0}}, -1);
  CHECK(f.first_index() == -1);
  CHECK(f.last_index() == 1);
  CHECK(f.at(-1).alpha == -1.0);
  CHECK(f.at(1).beta == 4.0);
  CHECK(f.gap() == doctest::Approx(0.5));
  CHECK(f.locate(1.5).value() == 0);
  CHECK_FALSE(f.locate(2.5).has_value());
  CHECK(f.distance({2.5, 0.0}) == doctest::Approx(0.5));
}

TEST_CASE("family errors") {
  CHECK_THROWS_AS(build_segment_family({}), Error);
  try {
    build_segment_family({{0.0, 1.0}, {1.0, 2.0}});
    FAIL("touching segments accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OverlappingSegments);
  }
  try {
    build_segment_family({{0.0, 1.5}, {1.0, 2.0}});
    FAIL("overlap accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OverlappingSegments);
  }
}

TEST_CASE("single segment gap") {
  CHECK(build_segment_family({{0.0, 3.0}}).gap() == 3.0);
  CHECK(build_segment_family({{0.0, 0.25}}).gap() == 1.0);
}

TEST_CASE("hermitian operator rejects non-Hermitian input") {
  CMatrix m(2, 2);
  m << 1.0, 2.0, 0.0, 1.0;
  try {
    HermitianOperator t(m);
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotHermitian);
  }
}

TEST_CASE("resolvent of a diagonal operator") {
  CMatrix m = CMatrix::Zero(3, 3);
  m.diagonal() << -1.0, 0.0, 2.0;
  const HermitianOperator t(m);
  const Complex l(0.5, 1.0);
  const CMatrix r = t.resolvent(l);
  CHECK(std::abs(r(0, 0) - 1.0 / (Complex(-1.0) - l)) < 1e-15);
  CHECK(std::abs(r(2, 2) - 1.0 / (Complex(2.0) - l)) < 1e-15);
  CHECK(resolvent_norm_t(t, l) == doctest::Approx(1.0 / std::abs(l)));
  try {
    resolvent_norm_t(t, {2.0, 0.0});
    FAIL("on spectrum");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::LambdaOnSpectrum);
  }
}

TEST_CASE("hypothesis b < d/2") {
  for (double ratio : {0.0, 0.5, 0.99, 1.0, 1.5}) {
    const auto inst = generate_instance(testing::random_spec(3, ratio));
    const auto h = check_hypothesis(inst.pair, inst.family);
    CHECK(h.holds == (ratio < 1.0));
    CHECK(h.margin == doctest::Approx(0.5 * h.d - h.b));
  }
}

TEST_CASE("spectrum outside the segments") {
  CMatrix m = CMatrix::Zero(2, 2);
  m.diagonal() << 0.0, 5.0;
  const PerturbedPair pair(HermitianOperator(m), CMatrix::Zero(2, 2));
  const auto f = build_segment_family({{-0.5, 0.5}, {2.0, 3.0}});
  try {
    check_hypothesis(pair, f);
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SpectrumOutsideSegments);
  }
}

TEST_CASE("dimension mismatch") {
  CMatrix t = CMatrix::Identity(3, 3);
  CHECK_THROWS_AS(PerturbedPair(HermitianOperator(t), CMatrix::Zero(2, 2)), Error);
}

TEST_CASE("unperturbed projections are a complete orthogonal system") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto inst = generate_instance(testing::random_spec(seed));
    const auto p = unperturbed_projections(inst.pair.t(), inst.family);
    CHECK(p.completeness_residual() < 1e-12);
    CHECK(p.minimality_residual() < 1e-12);
    for (const auto& q : p.matrices()) {
      CHECK((q - q.adjoint()).norm() < 1e-12);
      CHECK((q * q - q).norm() < 1e-12);
    }
  }
}
