#include "rieszcert/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "rieszcert/parallel.hpp"

namespace rieszcert {

namespace {

std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double margin(const BoundReport& r) {
  return r.rhs + kBoundTolerance * std::max(1.0, std::abs(r.rhs)) - r.lhs;
}

// |(V^* x)_i|^2, the weights of the discrete spectral measure e(t) of x.
RVector spectral_weights(const HermitianOperator& t, const CVector& x) {
  return (t.eigenvectors().adjoint() * x).cwiseAbs2();
}

Exclusion family_exclusion(const SegmentFamily& family, double b) {
  return Exclusion{std::vector<Segment>(family.segments().begin(), family.segments().end()), b};
}

CMatrix integrate_g(const PerturbedPair& pair, const std::vector<QuadratureNode>& nodes,
                    int parallel) {
  const auto n = pair.dimension();
  std::vector<CMatrix> parts(nodes.size());
  parallel_for(nodes.size(), parallel, [&](std::size_t m) {
    parts[m] = nodes[m].weight * splitting_term(pair, nodes[m].point);
  });
  CMatrix total = CMatrix::Zero(n, n);
  for (const auto& p : parts) total += p;
  return total;
}

}  // namespace

BoundReport make_bound(std::string name, double lhs, double rhs, std::string context,
                       double tolerance) {
  BoundReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = rhs - lhs;
  r.pass = lhs <= rhs + tolerance * std::max(1.0, std::abs(rhs));
  r.context = std::move(context);
  return r;
}

BoundReport inapplicable_bound(std::string name, std::string reason) {
  BoundReport r;
  r.name = std::move(name);
  r.applicable = false;
  r.pass = false;
  r.context = std::move(reason);
  return r;
}

BoundReport worst_of(const std::string& name, const std::vector<BoundReport>& samples) {
  if (samples.empty()) return inapplicable_bound(name, "no samples");
  bool all_pass = true;
  const BoundReport* worst = &samples.front();
  for (const auto& s : samples) {
    all_pass = all_pass && s.pass;
    if (!s.applicable) {
      worst = &s;
      break;
    }
    if (margin(s) < margin(*worst)) worst = &s;
  }
  BoundReport out = *worst;
  out.name = name;
  out.pass = all_pass && worst->applicable;
  const std::string inner = worst->context.starts_with("worst of ")
                                ? worst->context.substr(worst->context.find(": ") + 2)
                                : worst->context;
  out.context = "worst of " + std::to_string(samples.size()) + ": " + inner;
  return out;
}

double gap_sum_constant() noexcept { return 4.0 + kPi * kPi / 6.0; }

BoundReport check_horizontal_bound(const PerturbedPair& pair, const SegmentFamily& family, int n,
                                   int samples) {
  const std::string name = "horizontal_correction";
  const RectangleSpec g = partial_sum_geometry(family, n);
  const double b = pair.b_norm();
  const double gamma = g.half_height;
  if (!(gamma > b)) return inapplicable_bound(name, "gamma_n <= b");
  const double rhs = b / ((gamma - b) * gamma);
  double lhs = 0.0;
  const int count = std::max(samples, 2);
  for (int k = 0; k < count; ++k) {
    const double xi = g.left + (g.right - g.left) * k / (count - 1);
    for (double sign : {-1.0, 1.0}) {
      lhs = std::max(lhs, spectral_norm(splitting_term(pair, Complex(xi, sign * gamma))));
    }
  }
  return make_bound(name, lhs, rhs,
                    "n=" + std::to_string(n) + " gamma=" + fmt_g(gamma) + " samples=" +
                        std::to_string(2 * count));
}

VerticalBounds check_vertical_bounds(const PerturbedPair& pair, const SegmentFamily& family, int n,
                                     int order, int parallel, const PanelRule& rule) {
  const double b = pair.b_norm();
  const double d = family.gap();
  VerticalBounds out;
  if (!(b < 0.5 * d)) {
    out.central = inapplicable_bound("vertical_central", "requires b < d/2");
    out.outer = inapplicable_bound("vertical_outer", "requires b < d/2");
    return out;
  }
  const RectangleSpec g = partial_sum_geometry(family, n);
  const Exclusion excl = family_exclusion(family, b);
  const double central_rhs = 2.0 * b * d / ((0.5 * d - b) * (0.5 * d));
  const double outer_rhs = b / (d - b);
  std::vector<BoundReport> central;
  std::vector<BoundReport> outer;
  for (double c : {g.left, g.right}) {
    const std::string where = "n=" + std::to_string(n) + " c=" + fmt_g(c);
    const auto mid = line_quadrature({c, -d}, {c, d}, order, &excl, rule);
    central.push_back(make_bound("vertical_central", spectral_norm(integrate_g(pair, mid, parallel)),
                                 central_rhs, where));
    if (g.half_height > d) {
      const auto up = line_quadrature({c, d}, {c, g.half_height}, order, &excl, rule);
      const auto down = line_quadrature({c, -g.half_height}, {c, -d}, order, &excl, rule);
      outer.push_back(make_bound("vertical_outer", spectral_norm(integrate_g(pair, up, parallel)),
                                 outer_rhs, where + " upper"));
      outer.push_back(make_bound("vertical_outer", spectral_norm(integrate_g(pair, down, parallel)),
                                 outer_rhs, where + " lower"));
    } else {
      outer.push_back(make_bound("vertical_outer", 0.0, outer_rhs, where + " gamma_n = d"));
    }
  }
  out.central = worst_of("vertical_central", central);
  out.outer = worst_of("vertical_outer", outer);
  return out;
}

double correction_constant(double b, double d) {
  const double central = 2.0 * b * d / ((0.5 * d - b) * (0.5 * d));
  const double outer = b / (d - b);
  const double horizontal = 4.0 * b / (d - b);
  return (2.0 * central + 4.0 * outer + horizontal) / (2.0 * kPi);
}

std::vector<BoundReport> correction_reports(const std::vector<CorrectionIntegral>& corrections,
                                            double b, double d) {
  std::vector<BoundReport> out;
  if (!(b < 0.5 * d)) {
    out.push_back(inapplicable_bound("correction_uniform", "requires b < d/2"));
    return out;
  }
  const double c = correction_constant(b, d);
  for (const auto& ci : corrections) {
    out.push_back(make_bound("correction_uniform", ci.norm, c, "n=" + std::to_string(ci.n)));
  }
  return out;
}

std::vector<BoundReport> check_In_uniform_bound(const PerturbedPair& pair,
                                                const SegmentFamily& family,
                                                const ProjectionSet& set, double tol,
                                                const QuadratureOptions& options) {
  const double b = pair.b_norm();
  std::vector<CorrectionIntegral> corrections;
  if (b < 0.5 * family.gap()) {
    for (int n : admissible_partial_sum_orders(family)) {
      corrections.push_back(partial_sum_check(pair, family, b, n, set, tol, options));
    }
  }
  return correction_reports(corrections, b, family.gap());
}

SpectralFunctionValue spectral_function_integral(const HermitianOperator& t, const CVector& x,
                                                 Complex lambda) {
  if (t.spectrum_distance(lambda) < 1e-14 * std::max(1.0, t.spectral_radius())) {
    throw Error(ErrorCode::LambdaOnSpectrum, "shift coincides with an eigenvalue of T");
  }
  const RVector w = spectral_weights(t, x);
  SpectralFunctionValue v;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    const double dx = t.eigenvalues()(i) - lambda.real();
    v.spectral_sum += w(i) / (dx * dx + lambda.imag() * lambda.imag());
  }
  ShiftedFactorization lu(t.matrix(), lambda);
  v.direct = lu.solve(x).squaredNorm();
  const double scale = std::max(v.direct, std::numeric_limits<double>::min());
  v.relative_error = x.squaredNorm() == 0.0 ? 0.0 : std::abs(v.spectral_sum - v.direct) / scale;
  v.pass = v.relative_error < 1e-10;
  return v;
}

std::vector<double> resolvent_decay_ratios(const HermitianOperator& t, const CVector& x,
                                           const std::vector<double>& radii, double angle) {
  std::vector<double> out;
  const double xn = x.norm();
  for (double r : radii) {
    const Complex lambda = std::polar(r, angle);
    out.push_back(t.apply_resolvent(lambda, x).norm() * r / xn);
  }
  return out;
}

BoundReport check_resolvent_decay(const HermitianOperator& t, const SegmentFamily& family,
                                  const CVector& x) {
  const double scale = std::max(family.scale(), t.spectral_radius());
  const std::vector<double> radii{1e2 * scale, 1e4 * scale, 1e6 * scale};
  const auto ratios = resolvent_decay_ratios(t, x, radii, kPi / 3.0);
  std::string ctx = "ratios";
  for (double r : ratios) ctx += " " + fmt_g(r);
  const bool decreasing = std::abs(ratios[2] - 1.0) <= std::abs(ratios[0] - 1.0);
  if (!decreasing) ctx += " (error not decreasing)";
  auto report = make_bound("resolvent_decay", std::abs(ratios.back() - 1.0), 0.01, ctx, 0.0);
  report.pass = report.pass && decreasing;
  return report;
}

LineIntegral line_integral(const HermitianOperator& t, double d, const CVector& x) {
  const RVector w = spectral_weights(t, x);
  const RVector& eigs = t.eigenvalues();
  LineIntegral li;
  const double mass = w.sum();
  li.analytic = kPi / d * mass;
  const double tmax = t.spectral_radius();
  // Tail bound 2 mass / (R - tmax) equals 1e-8 of the analytic value.
  li.truncation = tmax + 2.0 * d / (kPi * 1e-8);
  li.tail = mass == 0.0 ? 0.0 : 2.0 * mass / (li.truncation - tmax);

  auto f = [&](double xi) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      const double dx = eigs(i) - xi;
      acc += w(i) / (dx * dx + d * d);
    }
    return acc;
  };
  const auto& gl = gauss_legendre(32);
  auto panel = [&](double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double acc = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) acc += gl.weights[i] * f(mid + half * gl.nodes[i]);
    return acc * half;
  };

  const double core_lo = eigs(0) - d;
  const double core_hi = eigs(eigs.size() - 1) + d;
  const int core_panels = std::max(1, static_cast<int>(std::ceil((core_hi - core_lo) / (0.5 * d))));
  double total = 0.0;
  for (int k = 0; k < core_panels; ++k) {
    total += panel(core_lo + (core_hi - core_lo) * k / core_panels,
                   core_lo + (core_hi - core_lo) * (k + 1) / core_panels);
  }
  // Geometrically growing panels out to +-R; each panel is as wide as its distance to the core.
  for (int side : {-1, 1}) {
    double inner = side > 0 ? core_hi : core_lo;
    double width = d;
    const double limit = side * li.truncation;
    while ((side > 0 && inner < limit) || (side < 0 && inner > limit)) {
      double outer = inner + side * width;
      if ((side > 0 && outer > limit) || (side < 0 && outer < limit)) outer = limit;
      total += side > 0 ? panel(inner, outer) : panel(outer, inner);
      inner = outer;
      width *= 2.0;
    }
  }
  li.quadrature = total;
  const double rel = 1e-12 * std::max(li.analytic, std::numeric_limits<double>::min());
  li.bracketed = li.quadrature <= li.analytic + rel && li.analytic <= li.quadrature + li.tail + rel;
  return li;
}

BoundReport check_line_integral_identity(const HermitianOperator& t, const SegmentFamily& family,
                                         const CVector& x) {
  const LineIntegral li = line_integral(t, family.gap(), x);
  const double rel = li.analytic > 0.0 ? std::abs(li.quadrature - li.analytic) / li.analytic : 0.0;
  auto r = make_bound("line_integral_identity", rel, 1e-6,
                      "analytic=" + fmt_g(li.analytic) + " quadrature=" + fmt_g(li.quadrature) +
                          " tail=" + fmt_g(li.tail) + (li.bracketed ? " bracketed" : " NOT bracketed"),
                      0.0);
  r.pass = r.pass && li.bracketed;
  return r;
}

double gap_sum(const HermitianOperator& t, const SegmentFamily& family, const CVector& x) {
  const RVector w = spectral_weights(t, x);
  const double d = family.gap();
  double total = 0.0;
  for (double c : gap_midpoints(family)) {
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      const double a = std::abs(t.eigenvalues()(i) - c);
      total += w(i) * (2.0 / a) * std::atan(d / a);
    }
  }
  return total;
}

double gap_sum_literal_rhs(double d, double x_norm_squared) {
  return 2.0 * gap_sum_constant() / (d * d) * x_norm_squared;
}

BoundReport check_gap_sum_bound(const HermitianOperator& t, const SegmentFamily& family,
                                const CVector& x) {
  const double d = family.gap();
  const double rhs = 4.0 * gap_sum_constant() / d * x.squaredNorm();
  return make_bound("gap_sum", gap_sum(t, family, x), rhs, "C2=" + fmt_g(gap_sum_constant()));
}

BoundReport check_neighborhood_separation(const SegmentFamily& family, double b) {
  const std::string name = "neighborhood_separation";
  const double d = family.gap();
  if (!(b < 0.5 * d)) return inapplicable_bound(name, "requires b < d/2");
  const auto segs = family.segments();
  double closest = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < segs.size(); ++j) {
    for (std::size_t k = j + 1; k < segs.size(); ++k) {
      closest = std::min(closest, segs[k].alpha - segs[j].beta - 2.0 * b);
    }
  }
  if (segs.size() < 2) return make_bound(name, d - 2.0 * b, d - 2.0 * b, "single segment", 0.0);
  // lhs <= rhs reads: d - 2b <= min dist(U_b(Delta_j), U_b(Delta_k)).
  return make_bound(name, d - 2.0 * b, closest, "pairs=" + std::to_string(segs.size() * (segs.size() - 1) / 2), 0.0);
}

Step2Analysis step2_analysis(const PerturbedPair& pair, const SegmentFamily& family,
                             const std::vector<CVector>& xs, int order, int parallel,
                             const PanelRule& rule) {
  const double b = pair.b_norm();
  const double d = family.gap();
  const auto n = pair.dimension();
  const Exclusion excl = family_exclusion(family, b);
  Step2Analysis out;
  out.constants.b = b;
  out.constants.d = d;
  out.constants.c2 = gap_sum_constant();
  out.constants.c1_ceiling = b < 0.5 * d ? b / (1.0 - 2.0 * b / d)
                                         : std::numeric_limits<double>::infinity();

  CMatrix xmat(n, static_cast<Eigen::Index>(xs.size()));
  for (std::size_t k = 0; k < xs.size(); ++k) xmat.col(static_cast<Eigen::Index>(k)) = xs[k];

  std::vector<double> totals(xs.size(), 0.0);
  for (int j = family.first_index(); j <= family.last_index(); ++j) {
    const Contour rect = attach_quadrature(step2_rectangle(family, j).with_exclusion(excl), order, rule);
    const auto& nodes = rect.nodes();
    out.node_count += nodes.size();
    std::vector<CVector> contributions(nodes.size());
    std::vector<double> c1(nodes.size(), 0.0);
    parallel_for(nodes.size(), parallel, [&](std::size_t m) {
      const auto pieces = resolvent_pieces(pair, nodes[m].point);
      c1[m] = spectral_norm(pieces.neumann * pair.b_matrix());
      const CMatrix gx = pieces.g * xmat;
      contributions[m] = nodes[m].weight * (xmat.adjoint() * gx).diagonal();
    });
    CVector integral = CVector::Zero(static_cast<Eigen::Index>(xs.size()));
    for (std::size_t m = 0; m < nodes.size(); ++m) {
      integral += contributions[m];
      out.constants.c1 = std::max(out.constants.c1, c1[m]);
    }
    for (std::size_t k = 0; k < xs.size(); ++k) totals[k] += std::abs(integral(static_cast<Eigen::Index>(k)));
  }
  out.aggregate = totals;
  const double factor = out.constants.c1 * (2.0 * kPi / d + 8.0 * out.constants.c2 / d);
  for (const auto& x : xs) out.aggregate_bound.push_back(factor * x.squaredNorm());
  return out;
}

BoundReport step2_constant_report(const Step2Analysis& analysis) {
  const auto& c = analysis.constants;
  if (!(c.b < 0.5 * c.d)) return inapplicable_bound("step2_constant", "requires b < d/2");
  return make_bound("step2_constant", c.c1, c.c1_ceiling,
                    "measured C1 vs b/(1-2b/d), nodes=" + std::to_string(analysis.node_count));
}

BoundReport step2_aggregate_report(const Step2Analysis& analysis) {
  const auto& c = analysis.constants;
  if (!(c.b < 0.5 * c.d)) return inapplicable_bound("step2_aggregate", "requires b < d/2");
  std::vector<BoundReport> samples;
  for (std::size_t k = 0; k < analysis.aggregate.size(); ++k) {
    samples.push_back(make_bound("step2_aggregate", analysis.aggregate[k],
                                 analysis.aggregate_bound[k], "x#" + std::to_string(k)));
  }
  return worst_of("step2_aggregate", samples);
}

std::vector<BoundReport> resolvent_reports(const PerturbedPair& pair, const SegmentFamily& family,
                                           const std::vector<Complex>& shifts, int parallel) {
  std::vector<ResolventSample> samples(shifts.size());
  parallel_for(shifts.size(), parallel, [&](std::size_t k) {
    samples[k] = neumann_bound_check(pair, shifts[k], family, 0.0);
  });
  std::vector<BoundReport> res;
  std::vector<BoundReport> neu;
  std::vector<BoundReport> gnorm;
  std::vector<BoundReport> split;
  for (const auto& s : samples) {
    const std::string where =
        "lambda=(" + fmt_g(s.lambda.real()) + "," + fmt_g(s.lambda.imag()) + ") delta=" + fmt_g(s.delta);
    res.push_back(make_bound("resolvent_perturbed", s.a_resolvent_norm, s.bound, where));
    neu.push_back(make_bound("neumann_factor", s.neumann_norm, s.neumann_bound, where));
    gnorm.push_back(make_bound("splitting_g_norm", s.g_norm, s.g_bound, where));
    split.push_back(make_bound("splitting_identity", s.splitting_residual, 1e-9, where, 0.0));
  }
  return {worst_of("resolvent_perturbed", res), worst_of("neumann_factor", neu),
          worst_of("splitting_g_norm", gnorm), worst_of("splitting_identity", split)};
}

}  // namespace rieszcert
