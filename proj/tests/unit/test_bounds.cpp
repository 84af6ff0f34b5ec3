#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "rieszcert/bounds.hpp"
#include "rieszcert/random.hpp"

using namespace rieszcert;

namespace {

HermitianOperator diagonal(std::initializer_list<double> values) {
  CMatrix t = CMatrix::Zero(static_cast<Eigen::Index>(values.size()),
                            static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double v : values) t(i, i) = v, ++i;
  return HermitianOperator(t);
}

PerturbedPair two_level_pair(double b) {
  CMatrix pert = CMatrix::Zero(2, 2);
  pert(0, 1) = b;
  return PerturbedPair(diagonal({0.0, 1.0}), pert);
}

}  // namespace

TEST_CASE("closed-form constants") {
  // mpmath references.
  CHECK(gap_sum_constant() == doctest::Approx(5.64493406684822643647).epsilon(1e-15));
  CHECK(correction_constant(0.4, 1.0) == doctest::Approx(5.94178454209742586870).epsilon(1e-14));
  CHECK(correction_constant(0.0, 1.0) == 0.0);
}

TEST_CASE("make_bound tolerance and worst_of") {
  CHECK(make_bound("x", 1.0, 1.0).pass);
  CHECK(make_bound("x", 1.0 + 5e-9, 1.0).pass);
  CHECK_FALSE(make_bound("x", 1.0 + 5e-9, 1.0, {}, 0.0).pass);
  CHECK(make_bound("x", 10.0 + 5e-8, 10.0).pass);
  CHECK_FALSE(make_bound("x", 10.0 + 2e-7, 10.0).pass);
  const auto w = worst_of("y", {make_bound("a", 1.0, 3.0, "p"), make_bound("a", 2.0, 2.5, "q")});
  CHECK(w.name == "y");
  CHECK(w.pass);
  CHECK(w.lhs == 2.0);
  CHECK(w.context == "worst of 2: q");
  const auto nested = worst_of("z", {w});
  CHECK(nested.context == "worst of 1: q");
  const auto bad = worst_of("y", {make_bound("a", 1.0, 3.0), inapplicable_bound("a", "no")});
  CHECK_FALSE(bad.pass);
  CHECK_FALSE(bad.applicable);
  CHECK_FALSE(worst_of("e", {}).applicable);
}

TEST_CASE("vertical bounds for the two-level system") {
  const auto family = build_segment_family({{0.0, 0.0}, {1.0, 1.0}});
  const auto pair = two_level_pair(0.4);
  const auto v = check_vertical_bounds(pair, family, 0);
  // 2bd / ((d/2 - b) d/2) and b / (d - b) at b = 0.4, d = 1
  CHECK(v.central.rhs == doctest::Approx(16.0).epsilon(1e-14));
  CHECK(v.outer.rhs == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(v.central.pass);
  CHECK(v.outer.pass);
}

TEST_CASE("horizontal bound") {
  const auto family = build_segment_family({{0.0, 0.0}, {1.0, 1.0}});
  const auto pair = two_level_pair(0.4);
  for (int n : {0, 1}) {
    const auto r = check_horizontal_bound(pair, family, n);
    const double gamma = partial_sum_geometry(family, n).half_height;
    CHECK(r.rhs == doctest::Approx(0.4 / ((gamma - 0.4) * gamma)).epsilon(1e-14));
    CHECK(r.pass);
  }
  const auto zero = check_horizontal_bound(two_level_pair(0.0), family, 0);
  CHECK(zero.lhs == 0.0);
}

TEST_CASE("uniform correction bound on random instances") {
  for (std::uint64_t seed : {3u, 4u}) {
    const auto inst = generate_instance(testing::random_spec(seed));
    const auto cp = contour_projections(inst.pair, inst.family, inst.b, 1e-9);
    for (const auto& r : check_In_uniform_bound(inst.pair, inst.family, cp.set, 1e-9)) {
      CHECK(r.pass);
      CHECK(r.rhs == doctest::Approx(correction_constant(inst.b, inst.family.gap())));
    }
  }
  const auto inst = generate_instance(testing::random_spec(5, 0.0));
  const auto p = unperturbed_projections(inst.pair.t(), inst.family);
  for (const auto& r : check_In_uniform_bound(inst.pair, inst.family, p, 1e-9)) {
    CHECK(r.lhs == 0.0);
  }
}

TEST_CASE("spectral function of a one-dimensional operator") {
  const auto t = diagonal({0.0});
  CVector x(1);
  x << 1.0;
  const auto v = spectral_function_integral(t, x, {0.0, 1.0});
  CHECK(v.spectral_sum == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(v.direct == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(v.pass);
  CHECK_THROWS_AS(spectral_function_integral(t, x, {0.0, 0.0}), Error);
}

TEST_CASE("spectral function agrees with direct solves") {
  const auto inst = generate_instance(testing::random_spec(7));
  CounterRng rng(2);
  for (int k = 0; k < 25; ++k) {
    const CVector x = random_unit_vector(rng, inst.pair.dimension());
    const Complex l(rng.uniform(-3.0, 5.0), rng.uniform(0.05, 2.0));
    CHECK(spectral_function_integral(inst.pair.t(), x, l).relative_error < 1e-10);
  }
}

TEST_CASE("resolvent decays like 1/|lambda|") {
  const auto inst = generate_instance(testing::random_spec(8));
  CounterRng rng(3);
  const CVector x = random_unit_vector(rng, inst.pair.dimension());
  const auto r = check_resolvent_decay(inst.pair.t(), inst.family, x);
  CHECK(r.pass);
  CHECK(r.lhs < 1e-5);
}

TEST_CASE("line integral identity") {
  const auto t = diagonal({0.0, 1.0, 3.5});
  const auto family = build_segment_family({{0.0, 1.0}, {3.5, 3.5}});
  CVector x(3);
  x << Complex(1.0, 0.5), 2.0, Complex(0.0, -1.0);
  const LineIntegral li = line_integral(t, family.gap(), x);
  CHECK(li.analytic == doctest::Approx(kPi / 2.5 * x.squaredNorm()).epsilon(1e-15));
  CHECK(li.bracketed);
  CHECK(std::abs(li.quadrature - li.analytic) / li.analytic < 1e-6);
  CHECK(check_line_integral_identity(t, family, x).pass);
  const auto zero = check_line_integral_identity(t, family, CVector::Zero(3));
  CHECK(zero.lhs == 0.0);
  CHECK(zero.pass);
}

TEST_CASE("gap sum against the exact two-point value") {
  // Segments {0}, {10}; x on the eigenvector of 0. Reference from mpmath.
  const auto t = diagonal({0.0, 10.0});
  const auto family = build_segment_family({{0.0, 0.0}, {10.0, 10.0}});
  CVector x = CVector::Zero(2);
  x(0) = 1.0;
  CHECK(gap_sum(t, family, x) == doctest::Approx(0.964119321374948076).epsilon(1e-14));
  const auto r = check_gap_sum_bound(t, family, x);
  CHECK(r.rhs == doctest::Approx(2.25797362673929057).epsilon(1e-14));
  CHECK(r.pass);
  // The (2 C2 / d^2) form is violated here.
  const double literal = gap_sum_literal_rhs(10.0, 1.0);
  CHECK(literal == doctest::Approx(0.11289868133696453).epsilon(1e-14));
  CHECK(gap_sum(t, family, x) > literal);
}

TEST_CASE("gap sum bound on random instances") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto inst = generate_instance(testing::random_spec(seed));
    CounterRng rng(seed);
    CHECK(check_gap_sum_bound(inst.pair.t(), inst.family,
                              random_unit_vector(rng, inst.pair.dimension()))
              .pass);
  }
}

TEST_CASE("neighborhood separation") {
  const auto family = build_segment_family({{0.0, 0.5}, {1.5, 2.0}, {3.25, 3.5}});
  const auto r = check_neighborhood_separation(family, 0.3);
  CHECK(r.lhs == doctest::Approx(0.4));
  CHECK(r.rhs == doctest::Approx(0.4));
  CHECK(r.pass);
  CHECK_FALSE(check_neighborhood_separation(family, 0.6).applicable);
}

TEST_CASE("resolvent reports") {
  const auto inst = generate_instance(testing::random_spec(10));
  CounterRng rng(4);
  const auto shifts = sample_outside_neighborhood(inst.family, inst.b, 200, rng);
  const auto reports = resolvent_reports(inst.pair, inst.family, shifts);
  REQUIRE(reports.size() == 4);
  CHECK(reports[0].name == "resolvent_perturbed");
  CHECK(reports[1].name == "neumann_factor");
  CHECK(reports[2].name == "splitting_g_norm");
  CHECK(reports[3].name == "splitting_identity");
  for (const auto& r : reports) CHECK(r.pass);
}

TEST_CASE("step-2 constants and aggregate") {
  const auto inst = generate_instance(testing::random_spec(11));
  CounterRng rng(5);
  std::vector<CVector> xs;
  for (int k = 0; k < 5; ++k) xs.push_back(random_unit_vector(rng, inst.pair.dimension()));
  const auto a = step2_analysis(inst.pair, inst.family, xs);
  CHECK(a.constants.c1 > 0.0);
  CHECK(a.constants.c1 <= a.constants.c1_ceiling);
  CHECK(a.constants.c2 == gap_sum_constant());
  CHECK(a.aggregate.size() == xs.size());
  CHECK(step2_constant_report(a).pass);
  CHECK(step2_aggregate_report(a).pass);

  const auto flat = generate_instance(testing::random_spec(11, 0.0));
  const auto z = step2_analysis(flat.pair, flat.family, xs);
  CHECK(z.constants.c1 == 0.0);
  for (double v : z.aggregate) CHECK(v == 0.0);
}
