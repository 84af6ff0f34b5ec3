#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "rieszcert/common.hpp"
#include "rieszcert/spectral_model.hpp"

namespace rieszcert {

enum class ContourKind { segment_rectangle, stadium, partial_sum_rectangle, step2_rectangle };
enum class ContourStyle { stadium, rectangle };

std::string_view to_string(ContourKind kind);

struct QuadratureNode {
  Complex point;
  Complex weight;  // includes the d(lambda) direction factor
  int edge = 0;    // index of the polyline edge the node sits on
};

/// Region the contour must avoid, the closed radius-neighborhood of the segments.
/// Panel sizes shrink where an edge approaches it.
struct Exclusion {
  std::vector<Segment> segments;
  double radius = 0.0;

  /// Distance from the straight piece [z0, z1] to the union of neighborhoods (may be < 0).
  double clearance(Complex z0, Complex z1) const noexcept;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached n-point rule, n >= 1.
const GaussLegendreRule& gauss_legendre(int order);

struct PanelRule {
  // An edge piece is bisected while its length exceeds factor * clearance.
  double factor = 4.0;
  int max_depth = 12;
};

/// Closed counterclockwise polyline with optional quadrature nodes.
class Contour {
 public:
  Contour(std::vector<Complex> vertices, ContourKind kind, std::optional<Exclusion> exclusion = {});

  const std::vector<Complex>& vertices() const noexcept { return vertices_; }
  ContourKind kind() const noexcept { return kind_; }
  const std::vector<QuadratureNode>& nodes() const noexcept { return nodes_; }
  const std::optional<Exclusion>& exclusion() const noexcept { return exclusion_; }
  int order() const noexcept { return order_; }
  /// Copy carrying a new exclusion region; quadrature nodes are dropped.
  Contour with_exclusion(Exclusion exclusion) const;

  std::size_t edge_count() const noexcept { return vertices_.size(); }
  std::pair<Complex, Complex> edge(std::size_t i) const;
  bool edge_is_horizontal(std::size_t i) const;
  double signed_area() const noexcept;
  double length() const noexcept;
  /// Winding number of the polygon around z (exact angle sum).
  int winding_number(Complex z) const noexcept;
  Complex centroid() const noexcept;

  /// sum_m w_m f(lambda_m)
  Complex integrate(const std::function<Complex(Complex)>& f) const;

 private:
  friend Contour attach_quadrature(Contour contour, int order_per_edge, const PanelRule& rule);
  std::vector<Complex> vertices_;
  ContourKind kind_;
  std::optional<Exclusion> exclusion_;
  std::vector<QuadratureNode> nodes_;
  int order_ = 0;
};

/// c_{first-1} (left sentinel), c_first, ..., c_last (right sentinel).
/// c_j = (beta_j + alpha_{j+1}) / 2 for interior gaps; sentinels sit d/2 outside.
std::vector<double> gap_midpoints(const SegmentFamily& family);

/// Midpoint to the right of segment j; j = first - 1 gives the left sentinel.
double gap_midpoint(const SegmentFamily& family, int j);

/// (b + d/2) / 2, the middle of the admissible interval (b, d/2).
double default_b_prime(double b, double d) noexcept;

/// Boundary of the closed b'-neighborhood of one segment.
/// The stadium is a circumscribed polygon, so it contains the exact neighborhood.
Contour segment_contour(const Segment& segment, double b_prime, ContourStyle style,
                        int points_per_cap = 16);

/// Axis-aligned rectangle [left, right] x [-half_height, half_height].
struct RectangleSpec {
  double left = 0.0;
  double right = 0.0;
  double half_height = 0.0;
  int lo = 0;  // segment indices enclosed
  int hi = 0;
};

/// Geometry of R_n: window -n..n clipped to the family, sides at c_{lo-1} and c_{hi},
/// half-height max(|c_{lo-1}|, |c_{hi}|, d). Throws InvalidSpec when the window is empty.
RectangleSpec partial_sum_geometry(const SegmentFamily& family, int n);

/// Rectangle with vertical sides through c_{-n}, c_n and half-height max(gamma_n, d).
/// Throws ContourTouchesSpectrumNeighborhood when a side comes within (d/2 - b)/4 of U_b.
Contour partial_sum_rectangle(const SegmentFamily& family, int n, double b);

/// [c_{j-1}, c_j] x [-d, d].
Contour step2_rectangle(const SegmentFamily& family, int j);

/// Composite Gauss-Legendre rule on every edge. With an exclusion region edges are split
/// into panels no longer than rule.factor times their clearance.
Contour attach_quadrature(Contour contour, int order_per_edge, const PanelRule& rule = {});

/// Composite rule on the straight path z0 -> z1.
std::vector<QuadratureNode> line_quadrature(Complex z0, Complex z1, int order,
                                            const Exclusion* exclusion = nullptr,
                                            const PanelRule& rule = {}, int edge = 0);

}  // namespace rieszcert
