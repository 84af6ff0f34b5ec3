#include <doctest.h>

#include <cmath>

#include "rieszcert/contour.hpp"

using namespace rieszcert;

TEST_CASE("gauss-legendre nodes and weights") {
  // Closed forms of the 5-point rule.
  const auto& r = gauss_legendre(5);
  REQUIRE(r.nodes.size() == 5);
  const double x1 = std::sqrt(5.0 - 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
  const double x2 = std::sqrt(5.0 + 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
  const double w1 = (322.0 + 13.0 * std::sqrt(70.0)) / 900.0;
  const double w2 = (322.0 - 13.0 * std::sqrt(70.0)) / 900.0;
  CHECK(r.nodes[0] == doctest::Approx(-x2).epsilon(1e-15));
  CHECK(r.nodes[1] == doctest::Approx(-x1).epsilon(1e-15));
  CHECK(std::abs(r.nodes[2]) < 1e-15);
  CHECK(r.weights[0] == doctest::Approx(w2).epsilon(1e-14));
  CHECK(r.weights[1] == doctest::Approx(w1).epsilon(1e-14));
  CHECK(r.weights[2] == doctest::Approx(128.0 / 225.0).epsilon(1e-14));
}

TEST_CASE("gauss-legendre integrates polynomials of degree 2n-1 exactly") {
  for (int order : {2, 7, 32, 128, 512}) {
    const auto& r = gauss_legendre(order);
    double wsum = 0.0;
    double x2 = 0.0;
    double xhigh = 0.0;
    const int p = 2 * std::min(order, 20) - 2;  // even power, exact for the rule
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
      wsum += r.weights[i];
      x2 += r.weights[i] * r.nodes[i] * r.nodes[i];
      xhigh += r.weights[i] * std::pow(r.nodes[i], p);
    }
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(x2 == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
    CHECK(xhigh == doctest::Approx(2.0 / (p + 1)).epsilon(1e-12));
  }
}

TEST_CASE("segment contours enclose the b'-neighborhood counterclockwise") {
  const Segment s{0.0, 2.0};
  for (auto style : {ContourStyle::rectangle, ContourStyle::stadium}) {
    const Contour c = segment_contour(s, 0.3, style);
    CHECK(c.signed_area() > 0.0);
    CHECK(c.winding_number({1.0, 0.0}) == 1);
    CHECK(c.winding_number({-0.299, 0.0}) == 1);
    CHECK(c.winding_number({2.299, 0.0}) == 1);
    CHECK(c.winding_number({1.0, 0.31}) == 0);
    CHECK(c.winding_number({-0.5, 0.0}) == 0);
    // Every vertex is at distance >= b' from the segment.
    for (auto v : c.vertices()) CHECK(s.distance(v) >= 0.3 - 1e-12);
  }
  // The area of the rectangle is exact.
  CHECK(segment_contour(s, 0.3, ContourStyle::rectangle).signed_area() == doctest::Approx(2.6 * 0.6));
}

TEST_CASE("degenerate segment gives a circle-like stadium") {
  const Contour c = segment_contour({1.0, 1.0}, 0.5, ContourStyle::stadium, 16);
  CHECK(c.winding_number({1.0, 0.0}) == 1);
  CHECK(c.signed_area() > kPi * 0.25);
}

TEST_CASE("cauchy integral of 1/(z - a) is 2 pi i inside and 0 outside") {
  const Contour c = attach_quadrature(segment_contour({0.0, 1.0}, 0.4, ContourStyle::stadium), 32);
  const Complex inside = c.integrate([](Complex z) { return 1.0 / (z - Complex(0.5, 0.1)); });
  const Complex outside = c.integrate([](Complex z) { return 1.0 / (z - Complex(3.0, 0.0)); });
  CHECK(std::abs(inside - kTwoPiI) < 1e-12);
  CHECK(std::abs(outside) < 1e-12);
  const Complex length = c.integrate([](Complex) { return Complex(1.0); });
  CHECK(std::abs(length) < 1e-12);  // closed curve
}

TEST_CASE("exclusion panels refine near the neighborhood") {
  const Exclusion excl{{{0.0, 1.0}}, 0.3};
  const auto far = line_quadrature({-2.0, 2.0}, {3.0, 2.0}, 8, &excl);
  const auto near = line_quadrature({-2.0, 0.35}, {3.0, 0.35}, 8, &excl);
  CHECK(near.size() > far.size());
  Complex sum_far = 0.0;
  for (const auto& q : far) sum_far += q.weight;
  CHECK(std::abs(sum_far - Complex(5.0, 0.0)) < 1e-13);
  CHECK(excl.clearance({-2.0, 0.35}, {3.0, 0.35}) == doctest::Approx(0.05));
}

TEST_CASE("gap midpoints and the partial-sum geometry") {
  const auto f = build_segment_family({{-3.0, -2.0}, {-0.5, 0.5}, {2.0, 3.0}}, -1);
  const auto mids = gap_midpoints(f);
  REQUIRE(mids.size() == 4);
  CHECK(mids[0] == doctest::Approx(-3.75));
  CHECK(mids[1] == doctest::Approx(-1.25));
  CHECK(mids[2] == doctest::Approx(1.25));
  CHECK(mids[3] == doctest::Approx(3.75));
  const auto g0 = partial_sum_geometry(f, 0);
  CHECK(g0.lo == 0);
  CHECK(g0.hi == 0);
  CHECK(g0.left == doctest::Approx(-1.25));
  CHECK(g0.half_height == doctest::Approx(1.5));  // max(|c|, d)
  const auto g1 = partial_sum_geometry(f, 1);
  CHECK(g1.half_height == doctest::Approx(3.75));
  CHECK_THROWS_AS(partial_sum_geometry(f, -1), Error);
}

TEST_CASE("partial-sum rectangle refuses to cut a neighborhood") {
  const auto f = build_segment_family({{0.0, 1.0}, {2.0, 3.0}});
  CHECK_NOTHROW(partial_sum_rectangle(f, 0, 0.4));
  try {
    partial_sum_rectangle(f, 0, 0.6);
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ContourTouchesSpectrumNeighborhood);
  }
}

TEST_CASE("step-2 rectangle spans adjacent gap midpoints") {
  const auto f = build_segment_family({{0.0, 1.0}, {2.0, 3.0}});
  const Contour r = step2_rectangle(f, 1);
  CHECK(r.winding_number({2.5, 0.0}) == 1);
  CHECK(r.winding_number({0.5, 0.0}) == 0);
  CHECK(r.signed_area() == doctest::Approx(2.0 * 2.0));  // [1.5, 3.5] x [-1, 1]
}
