#include "rieszcert/contour.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

namespace rieszcert {

namespace {

double point_segment_distance(Complex p, Complex a, Complex b) noexcept {
  const Complex ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  const double t = std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}

double cross(Complex u, Complex v) noexcept { return u.real() * v.imag() - u.imag() * v.real(); }

bool segments_intersect(Complex p0, Complex p1, Complex q0, Complex q1) noexcept {
  const double d1 = cross(p1 - p0, q0 - p0);
  const double d2 = cross(p1 - p0, q1 - p0);
  const double d3 = cross(q1 - q0, p0 - q0);
  const double d4 = cross(q1 - q0, p1 - q0);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 &&
         d4 != 0;
}

double segment_segment_distance(Complex p0, Complex p1, Complex q0, Complex q1) noexcept {
  if (segments_intersect(p0, p1, q0, q1)) return 0.0;
  return std::min({point_segment_distance(p0, q0, q1), point_segment_distance(p1, q0, q1),
                   point_segment_distance(q0, p0, p1), point_segment_distance(q1, p0, p1)});
}

// Returns (P_n(x), P_{n-1}(x)) by the three-term recurrence.
std::pair<double, double> legendre_pair(int n, double x) noexcept {
  double prev = 1.0;
  double cur = x;
  for (int k = 2; k <= n; ++k) {
    const double next = ((2.0 * k - 1.0) * x * cur - (k - 1.0) * prev) / k;
    prev = cur;
    cur = next;
  }
  return {cur, prev};
}

GaussLegendreRule compute_rule(int order) {
  GaussLegendreRule rule;
  rule.nodes.resize(static_cast<std::size_t>(order));
  rule.weights.resize(static_cast<std::size_t>(order));
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (order + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, q] = legendre_pair(order, x);
      const double dp = order * (x * p - q) / (x * x - 1.0);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const auto [p, q] = legendre_pair(order, x);
    const double dp = order * (x * p - q) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(order - 1 - i);
    rule.nodes[lo] = -x;
    rule.nodes[hi] = x;
    rule.weights[lo] = rule.weights[hi] = w;
  }
  if (order % 2 == 1) rule.nodes[static_cast<std::size_t>(order / 2)] = 0.0;
  return rule;
}

void append_panels(Complex z0, Complex z1, int order, const Exclusion* exclusion,
                   const PanelRule& rule, int edge, int depth, std::vector<QuadratureNode>& out) {
  const double len = std::abs(z1 - z0);
  if (exclusion != nullptr && depth < rule.max_depth && len > 0.0) {
    const double clearance = exclusion->clearance(z0, z1);
    // Inside the excluded region subdivision cannot help.
    if (clearance > 0.0 && len > rule.factor * clearance) {
      const Complex mid = 0.5 * (z0 + z1);
      append_panels(z0, mid, order, exclusion, rule, edge, depth + 1, out);
      append_panels(mid, z1, order, exclusion, rule, edge, depth + 1, out);
      return;
    }
  }
  const auto& gl = gauss_legendre(order);
  const Complex half = 0.5 * (z1 - z0);
  const Complex mid = 0.5 * (z0 + z1);
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
    out.push_back({mid + half * gl.nodes[i], half * gl.weights[i], edge});
  }
}

}  // namespace

std::string_view to_string(ContourKind kind) {
  switch (kind) {
    case ContourKind::segment_rectangle: return "segment_rectangle";
    case ContourKind::stadium: return "stadium";
    case ContourKind::partial_sum_rectangle: return "partial_sum_rectangle";
    case ContourKind::step2_rectangle: return "step2_rectangle";
  }
  return "unknown";
}

double Exclusion::clearance(Complex z0, Complex z1) const noexcept {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : segments) {
    best = std::min(best, segment_segment_distance(z0, z1, Complex(s.alpha, 0.0),
                                                   Complex(s.beta, 0.0)));
  }
  return best - radius;
}

const GaussLegendreRule& gauss_legendre(int order) {
  if (order < 1) throw std::invalid_argument("Gauss-Legendre order must be positive");
  static std::mutex mutex;
  static std::map<int, GaussLegendreRule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_rule(order)).first;
  return it->second;
}

Contour::Contour(std::vector<Complex> vertices, ContourKind kind, std::optional<Exclusion> exclusion)
    : vertices_(std::move(vertices)), kind_(kind), exclusion_(std::move(exclusion)) {
  if (vertices_.size() < 3) throw std::invalid_argument("contour needs at least three vertices");
  if (!(signed_area() > 0.0)) throw std::invalid_argument("contour must be counterclockwise");
}

Contour Contour::with_exclusion(Exclusion exclusion) const {
  return Contour(vertices_, kind_, std::move(exclusion));
}

std::pair<Complex, Complex> Contour::edge(std::size_t i) const {
  return {vertices_[i], vertices_[(i + 1) % vertices_.size()]};
}

bool Contour::edge_is_horizontal(std::size_t i) const {
  const auto [a, b] = edge(i);
  return std::abs((b - a).imag()) <= 1e-14 * std::abs(b - a);
}

double Contour::signed_area() const noexcept {
  double area = 0.0;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    area += cross(vertices_[i], vertices_[(i + 1) % vertices_.size()]);
  }
  return 0.5 * area;
}

double Contour::length() const noexcept {
  double total = 0.0;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    total += std::abs(vertices_[(i + 1) % vertices_.size()] - vertices_[i]);
  }
  return total;
}

int Contour::winding_number(Complex z) const noexcept {
  double angle = 0.0;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    angle += std::arg((vertices_[(i + 1) % vertices_.size()] - z) / (vertices_[i] - z));
  }
  return static_cast<int>(std::lround(angle / (2.0 * kPi)));
}

Complex Contour::centroid() const noexcept {
  Complex acc = 0.0;
  const double area = signed_area();
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    const Complex a = vertices_[i];
    const Complex b = vertices_[(i + 1) % vertices_.size()];
    acc += (a + b) * cross(a, b);
  }
  return acc / (6.0 * area);
}

Complex Contour::integrate(const std::function<Complex(Complex)>& f) const {
  Complex total = 0.0;
  for (const auto& node : nodes_) total += node.weight * f(node.point);
  return total;
}

std::vector<double> gap_midpoints(const SegmentFamily& family) {
  std::vector<double> mids;
  mids.reserve(family.size() + 1);
  for (int j = family.first_index() - 1; j <= family.last_index(); ++j) {
    mids.push_back(gap_midpoint(family, j));
  }
  return mids;
}

double gap_midpoint(const SegmentFamily& family, int j) {
  const double d = family.gap();
  if (j == family.first_index() - 1) return family.at(family.first_index()).alpha - 0.5 * d;
  if (j == family.last_index()) return family.at(j).beta + 0.5 * d;
  return 0.5 * (family.at(j).beta + family.at(j + 1).alpha);
}

double default_b_prime(double b, double d) noexcept { return 0.5 * (b + 0.5 * d); }

Contour segment_contour(const Segment& segment, double b_prime, ContourStyle style,
                        int points_per_cap) {
  if (!(b_prime > 0.0)) throw std::invalid_argument("b' must be positive");
  const double a = segment.alpha;
  const double b = segment.beta;
  if (style == ContourStyle::rectangle) {
    return Contour({{a - b_prime, -b_prime}, {b + b_prime, -b_prime}, {b + b_prime, b_prime},
                    {a - b_prime, b_prime}},
                   ContourKind::segment_rectangle);
  }
  // Tangent lines at k + 1 equally spaced directions per cap; vertices where they meet.
  const int k = std::max(points_per_cap, 2);
  const double step = kPi / k;
  const double radius = b_prime / std::cos(0.5 * step);
  std::vector<Complex> v;
  v.emplace_back(a, -b_prime);
  if (b > a) v.emplace_back(b, -b_prime);
  for (int i = 0; i < k; ++i) {
    const double phi = -0.5 * kPi + (i + 0.5) * step;
    v.emplace_back(b + radius * std::cos(phi), radius * std::sin(phi));
  }
  v.emplace_back(b, b_prime);
  if (b > a) v.emplace_back(a, b_prime);
  for (int i = 0; i < k; ++i) {
    const double phi = 0.5 * kPi + (i + 0.5) * step;
    v.emplace_back(a + radius * std::cos(phi), radius * std::sin(phi));
  }
  return Contour(std::move(v), ContourKind::stadium);
}

RectangleSpec partial_sum_geometry(const SegmentFamily& family, int n) {
  RectangleSpec spec;
  spec.lo = std::max(-n, family.first_index());
  spec.hi = std::min(n, family.last_index());
  if (n < 0 || spec.lo > spec.hi) {
    throw Error(ErrorCode::InvalidSpec, "no segment index in -n..n for n = " + std::to_string(n));
  }
  spec.left = gap_midpoint(family, spec.lo - 1);
  spec.right = gap_midpoint(family, spec.hi);
  spec.half_height = std::max({std::abs(spec.left), std::abs(spec.right), family.gap()});
  return spec;
}

Contour partial_sum_rectangle(const SegmentFamily& family, int n, double b) {
  const RectangleSpec g = partial_sum_geometry(family, n);
  const double d = family.gap();
  const double left = g.left;
  const double right = g.right;
  const double gamma = g.half_height;
  Exclusion excl{std::vector<Segment>(family.segments().begin(), family.segments().end()), b};
  const double threshold = 0.25 * (0.5 * d - b);
  Contour contour({{left, -gamma}, {right, -gamma}, {right, gamma}, {left, gamma}},
                  ContourKind::partial_sum_rectangle, excl);
  for (std::size_t i = 0; i < contour.edge_count(); ++i) {
    const auto [z0, z1] = contour.edge(i);
    const double clearance = excl.clearance(z0, z1);
    if (clearance <= 0.0 || clearance < threshold) {
      throw Error(ErrorCode::ContourTouchesSpectrumNeighborhood,
                  "side " + std::to_string(i) + " of R_" + std::to_string(n) +
                      " has clearance " + std::to_string(clearance));
    }
  }
  return contour;
}

Contour step2_rectangle(const SegmentFamily& family, int j) {
  if (!family.contains_index(j)) {
    throw Error(ErrorCode::InvalidSpec, "segment index " + std::to_string(j) + " not in family");
  }
  const double d = family.gap();
  const double left = gap_midpoint(family, j - 1);
  const double right = gap_midpoint(family, j);
  return Contour({{left, -d}, {right, -d}, {right, d}, {left, d}}, ContourKind::step2_rectangle);
}

std::vector<QuadratureNode> line_quadrature(Complex z0, Complex z1, int order,
                                            const Exclusion* exclusion, const PanelRule& rule,
                                            int edge) {
  std::vector<QuadratureNode> nodes;
  append_panels(z0, z1, order, exclusion, rule, edge, 0, nodes);
  return nodes;
}

Contour attach_quadrature(Contour contour, int order_per_edge, const PanelRule& rule) {
  if (order_per_edge < 2) throw std::invalid_argument("quadrature order must be at least 2");
  contour.nodes_.clear();
  const Exclusion* excl = contour.exclusion_ ? &*contour.exclusion_ : nullptr;
  for (std::size_t i = 0; i < contour.edge_count(); ++i) {
    const auto [z0, z1] = contour.edge(i);
    append_panels(z0, z1, order_per_edge, excl, rule, static_cast<int>(i), 0, contour.nodes_);
  }
  contour.order_ = order_per_edge;
  return contour;
}

}  // namespace rieszcert
