#include "rieszcert/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>

#include <Eigen/Eigenvalues>

#include "rieszcert/basis.hpp"
#include "rieszcert/projections.hpp"
#include "rieszcert/random.hpp"
#include "rieszcert/resolvent.hpp"

namespace rieszcert {

namespace {

// Streams of the sampling generator derived from the instance seed.
constexpr std::uint64_t kVectorStream = 11;
constexpr std::uint64_t kPairStream = 12;
constexpr std::uint64_t kShiftStream = 13;
constexpr std::uint64_t kSignStream = 14;

constexpr int kDecayVectors = 8;
constexpr int kSpectralVectors = 4;

double finite_or(double v, double fallback = std::numeric_limits<double>::max()) {
  return std::isfinite(v) ? v : fallback;
}

CheckRecord below(std::string name, double value, double threshold) {
  return {std::move(name), finite_or(value), threshold, value < threshold};
}

CheckRecord at_most(std::string name, double value, double threshold) {
  return {std::move(name), finite_or(value), finite_or(threshold), value <= threshold};
}

std::vector<CVector> unit_vectors(std::uint64_t seed, std::uint64_t stream, int count, Eigen::Index n) {
  CounterRng rng = CounterRng(seed).split(stream);
  std::vector<CVector> xs;
  xs.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) xs.push_back(random_unit_vector(rng, n));
  return xs;
}

BoundReport sanitize(BoundReport r) {
  r.lhs = finite_or(r.lhs);
  r.rhs = finite_or(r.rhs);
  r.slack = finite_or(r.slack, r.rhs >= r.lhs ? std::numeric_limits<double>::max()
                                               : -std::numeric_limits<double>::max());
  return r;
}

class StageRunner {
 public:
  explicit StageRunner(CertificationReport& report) : report_(report) {}

  // Runs body unless skip is set; returns whether it completed.
  bool run(const std::string& name, bool skip, const std::function<void()>& body) {
    StageRecord rec;
    rec.name = name;
    if (skip) {
      rec.status = "skipped";
      report_.stages.push_back(std::move(rec));
      return false;
    }
    const auto start = std::chrono::steady_clock::now();
    try {
      body();
      rec.status = "ok";
    } catch (const Error& e) {
      rec.status = "error";
      rec.error_code = std::string(to_string(e.code()));
      rec.message = e.what();
    } catch (const std::exception& e) {
      rec.status = "error";
      rec.error_code = "internal";
      rec.message = e.what();
    }
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool ok = rec.status == "ok";
    report_.stages.push_back(std::move(rec));
    return ok;
  }

 private:
  CertificationReport& report_;
};

}  // namespace

const std::vector<std::string>& bound_names() {
  static const std::vector<std::string> names{
      "neighborhood_separation", "resolvent_perturbed",    "neumann_factor",
      "splitting_identity",      "splitting_g_norm",       "horizontal_correction",
      "vertical_central",        "vertical_outer",         "vertical_outer_below_one",
      "correction_uniform",      "spectral_function_identity", "resolvent_decay",
      "line_integral_identity",  "gap_sum",                "step2_constant",
      "step2_aggregate"};
  return names;
}

const std::vector<std::string>& stage_names() {
  static const std::vector<std::string> names{
      "hypothesis",   "enclosure", "contour_projections", "oracle_projections", "cross_validation",
      "partial_sums", "basis",     "block_diagonalization", "bounds"};
  return names;
}

InstanceEcho echo_instance(const InstanceSpec& spec, const Instance& instance) {
  InstanceEcho e;
  e.source = "generated";
  e.n = spec.n;
  e.segments = spec.segments;
  e.cluster_sizes = spec.cluster_sizes;
  e.b_ratio = spec.b_ratio;
  e.seed = spec.seed;
  e.perturbation_style = std::string(to_string(spec.perturbation_style));
  e.b = instance.pair.b_norm();
  e.d = instance.family.gap();
  return e;
}

CertificationReport run_certification(const PerturbedPair& pair, const SegmentFamily& family,
                                      const RunConfig& config, InstanceEcho echo,
                                      const PipelineOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  CertificationReport report;
  echo.b = pair.b_norm();
  echo.d = family.gap();
  report.instance = echo;
  report.config = config;
  StageRunner stages(report);

  const double b = pair.b_norm();
  const double d = family.gap();
  const Eigen::Index n = pair.dimension();
  const int width = config.mode.parallel;
  const std::uint64_t seed = echo.seed;
  const bool full = !options.bounds_only;

  QuadratureOptions qopt;
  qopt.initial_order = config.quadrature.order;
  qopt.max_order = config.quadrature.max_order;
  qopt.panels.factor = config.quadrature.panel_factor;
  qopt.parallel = width;
  qopt.throw_on_stall = !config.mode.force;

  // Stage 1: b < d/2.
  const bool hypothesis_ok = stages.run("hypothesis", false, [&] {
    report.hypothesis = check_hypothesis(pair, family);
  });
  report.checks.push_back(below("hypothesis_margin", -report.hypothesis.margin, 0.0));
  if (!hypothesis_ok || (!report.hypothesis.holds && !config.mode.force)) {
    for (std::size_t s = 1; s < stage_names().size(); ++s) stages.run(stage_names()[s], true, {});
    report.pass = false;
    report.exit_code = exit_code_for(report);
    report.total_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
  }

  // Stage 2: spectrum of A against the neighborhoods U_b(Delta_j).
  CVector spectrum;
  stages.run("enclosure", !full, [&] {
    Eigen::ComplexEigenSolver<CMatrix> solver(pair.a_matrix(), false);
    if (solver.info() != Eigen::Success) throw Error(ErrorCode::SingularShift, "eigenvalue iteration failed");
    spectrum = solver.eigenvalues();
    const double slack = enclosure_slack(family, pair);
    auto& enc = report.enclosure;
    enc.max_excess = -std::numeric_limits<double>::max();
    for (Eigen::Index i = 0; i < spectrum.size(); ++i) {
      EigenRecord rec;
      rec.re = spectrum(i).real();
      rec.im = spectrum(i).imag();
      rec.dist_to_segment = std::numeric_limits<double>::max();
      for (int j = family.first_index(); j <= family.last_index(); ++j) {
        const double dist = family.at(j).distance(spectrum(i));
        if (dist <= b + slack) ++rec.neighborhoods;
        if (dist < rec.dist_to_segment) {
          rec.dist_to_segment = dist;
          rec.assigned_cluster = j;
        }
      }
      if (rec.neighborhoods == 0) ++enc.outside;
      if (rec.neighborhoods > 1) ++enc.ambiguous;
      enc.max_excess = std::max(enc.max_excess, rec.dist_to_segment - b);
      report.eigenvalues.push_back(rec);
    }
    enc.enclosure = enc.outside == 0 && enc.ambiguous == 0;
    report.checks.push_back({"enclosure", static_cast<double>(enc.outside + enc.ambiguous), 0.0, enc.enclosure});
  });

  // Stage 3: Q_j by contour quadrature.
  std::optional<ContourProjections> contour;
  const bool have_q = stages.run("contour_projections", false, [&] {
    std::optional<double> bp;
    if (config.quadrature.b_prime > 0.0) bp = config.quadrature.b_prime;
    contour = contour_projections(pair, family, b, config.quadrature.tol, qopt, config.quadrature.style, bp);
    report.b_prime = contour->b_prime;
    const ProjectionSet p = unperturbed_projections(pair.t(), family);
    auto& ver = report.verification;
    for (std::size_t k = 0; k < contour->details.size(); ++k) {
      const auto& q = contour->details[k];
      const int j = family.first_index() + static_cast<int>(k);
      ProjectionSummary s;
      s.index = j;
      s.rank = static_cast<int>(numerical_rank(q.matrix));
      s.idempotency = finite_or(q.idempotency_residual);
      s.order = q.order;
      s.node_count = static_cast<int>(q.node_count);
      s.converged = q.converged;
      s.spectral_difference = finite_or((q.matrix - p.at(j)).norm());
      ver.ill_conditioned = ver.ill_conditioned || q.ill_conditioned;
      report.projections.push_back(s);
    }
    const VerificationReport v = verify_projection_set(contour->set, pair, family, b);
    ver.minimality = finite_or(v.minimality);
    ver.completeness = finite_or(v.completeness);
    ver.commutation = finite_or(v.commutation);
    ver.max_idempotency = finite_or(v.max_idempotency);
    const double tol = config.tolerances.residual;
    report.checks.push_back(below("contour_idempotency", v.max_idempotency, config.quadrature.tol));
    report.checks.push_back(below("minimality", v.minimality, tol));
    report.checks.push_back(below("completeness", v.completeness, tol));
    report.checks.push_back(below("commutation", v.commutation, tol));
  });

  // Stage 4-5: dense eigendecomposition oracle and agreement with the quadrature.
  std::optional<EigenOracle> oracle;
  const bool have_oracle = stages.run("oracle_projections", !full, [&] {
    oracle = eigen_oracle_projections(pair, family, b);
    report.verification.eigenvector_condition = finite_or(oracle->eigenvector_condition);
    report.verification.near_defective = oracle->near_defective;
  });
  stages.run("cross_validation", !full || !have_q || !have_oracle, [&] {
    double worst = 0.0;
    for (std::size_t k = 0; k < report.projections.size(); ++k) {
      const int j = report.projections[k].index;
      const double diff = (contour->set.at(j) - oracle->set.at(j)).norm();
      report.projections[k].oracle_difference = finite_or(diff);
      worst = std::max(worst, diff);
    }
    report.verification.oracle_max_difference = finite_or(worst);
    report.checks.push_back(below("oracle_agreement", worst, config.tolerances.oracle));
  });

  // Stage 6: partial sums over R_n and the correction integrals I_n.
  std::vector<CorrectionIntegral> corrections;
  const bool have_partial = stages.run("partial_sums", !have_q || !config.mode.partial_sums, [&] {
    double worst = 0.0;
    for (int order : admissible_partial_sum_orders(family)) {
      auto ci = partial_sum_check(pair, family, b, order, contour->set, config.quadrature.tol, qopt);
      PartialSumSummary s;
      s.n = ci.n;
      s.lo = ci.lo;
      s.hi = ci.hi;
      s.norm = finite_or(ci.norm);
      s.horizontal_norm = finite_or(ci.horizontal_norm);
      s.vertical_norm = finite_or(ci.vertical_norm);
      s.big_vs_sum = finite_or(ci.big_vs_sum);
      s.three_term = finite_or(ci.three_term);
      s.idempotency = finite_or(ci.idempotency);
      s.order = ci.order;
      worst = std::max({worst, ci.big_vs_sum, ci.three_term});
      report.partial_sums.push_back(s);
      corrections.push_back(std::move(ci));
    }
    report.checks.push_back(below("partial_sum_identity", worst, config.tolerances.residual));
  });

  // Stage 7: Gram operator, similarity, unconditional constant and the sum bound.
  const auto xs = unit_vectors(seed, kVectorStream, config.mode.vector_samples, n);
  std::optional<Step2Analysis> step2;
  std::optional<Similarity> similarity;
  stages.run("basis", !full || !have_q, [&] {
    const ProjectionSet& set = contour->set;
    auto& bs = report.basis;
    CMatrix raw = CMatrix::Zero(n, n);
    for (const auto& q : set.matrices()) raw += q.adjoint() * q;
    bs.gram_hermitian = finite_or((raw - raw.adjoint()).norm() / std::max(raw.norm(), 1e-300));
    const CMatrix g = gram_operator(set);
    bs.gram_identity = finite_or((g - CMatrix::Identity(n, n)).norm());
    similarity = similarity_transform(set, g);
    const Similarity& sim = *similarity;
    bs.m = sim.m;
    bs.M = sim.M;
    bs.condition = finite_or(sim.condition);
    bs.k_root_residual = finite_or((sim.k * sim.k - g).norm() / g.norm());

    const auto ys = unit_vectors(seed, kPairStream, config.mode.vector_samples, n);
    const double g_norm = spectral_norm(g);
    double cross = 0.0;
    for (std::size_t s = 0; s < xs.size(); ++s) {
      for (std::size_t j = 0; j < set.size(); ++j) {
        const CVector qx = set.matrices()[j] * xs[s];
        for (std::size_t k = 0; k < set.size(); ++k) {
          if (j == k) continue;
          const CVector qy = set.matrices()[k] * ys[s];
          const double scale = qx.norm() * qy.norm() * g_norm;
          if (scale > 0.0) cross = std::max(cross, std::abs(qy.dot(g * qx)) / scale);
        }
      }
    }
    bs.cross_orthogonality = finite_or(cross);
    for (std::size_t j = 0; j < set.size(); ++j) {
      const CMatrix& ph = sim.orthogonal_projections[j];
      bs.projection_hermitian = std::max(bs.projection_hermitian, (ph - ph.adjoint()).norm());
      bs.projection_idempotency = std::max(bs.projection_idempotency, (ph * ph - ph).norm());
      bs.reconstruction =
          std::max(bs.reconstruction, (sim.k_inverse * ph * sim.k - set.matrices()[j]).norm());
    }
    const auto uc = unconditional_constant(set, CounterRng(seed).split(kSignStream).next_u64(),
                                           static_cast<std::size_t>(config.mode.sign_samples), width);
    bs.unconditional_constant = finite_or(uc.value);
    bs.unconditional_exhaustive = uc.exhaustive;
    bs.sign_vectors = static_cast<int>(uc.evaluated);

    step2 = step2_analysis(pair, family, xs, config.quadrature.step2_order, width, qopt.panels);
    bs.c1 = finite_or(step2->constants.c1);
    bs.c1_ceiling = finite_or(step2->constants.c1_ceiling);
    bs.c2 = step2->constants.c2;
    bs.sum_bound_factor = finite_or(step2->constants.sum_bound_factor());
    const SumBoundResult sb = sum_bound_check(set, xs, step2->constants);
    bs.sum_bound_pass = sb.pass;
    bs.sum_bound_worst_ratio = finite_or(sb.worst_ratio);
    bs.sum_bound_samples.clear();
    for (double v : sb.values) bs.sum_bound_samples.push_back(finite_or(v));

    const double ot = config.tolerances.orthogonality;
    report.checks.push_back({"gram_positive_definite", bs.m, 0.0, bs.m > 0.0});
    report.checks.push_back(below("gram_root", bs.k_root_residual, config.tolerances.gram_root));
    report.checks.push_back(below("cross_orthogonality", bs.cross_orthogonality, ot));
    report.checks.push_back(below("projection_hermitian", bs.projection_hermitian, ot));
    report.checks.push_back(below("projection_idempotency", bs.projection_idempotency, ot));
    report.checks.push_back(below("similarity_reconstruction", bs.reconstruction, ot));
    report.checks.push_back(at_most("unconditional_vs_condition", uc.value,
                                    sim.condition + config.tolerances.unconditional));
    report.checks.push_back({"sum_bound", bs.sum_bound_worst_ratio, 1.0, sb.pass});
  });

  // Stage 8: block-diagonal form of A.
  stages.run("block_diagonalization", !full || !similarity.has_value(), [&] {
    const BlockDiagonalization bd = block_diagonalize(pair, contour->set, similarity->k);
    auto& bl = report.blocks;
    bl.off_block_residual = finite_or(bd.off_block_residual);
    bl.basis_off_block = finite_or(bd.basis_off_block);
    bl.basis_orthonormality = finite_or(bd.basis_orthonormality);
    bl.ranks.clear();
    for (auto r : bd.ranks) bl.ranks.push_back(static_cast<int>(r));
    CVector block_eigs(n);
    Eigen::Index at = 0;
    for (const auto& blk : bd.blocks) {
      if (blk.rows() == 0) continue;
      Eigen::ComplexEigenSolver<CMatrix> solver(blk, false);
      block_eigs.segment(at, blk.rows()) = solver.eigenvalues();
      at += blk.rows();
    }
    if (spectrum.size() != n) {
      Eigen::ComplexEigenSolver<CMatrix> solver(pair.a_matrix(), false);
      spectrum = solver.eigenvalues();
    }
    bl.spectrum_distance = finite_or(multiset_distance(block_eigs, spectrum));
    report.checks.push_back(below("off_block_residual", bl.off_block_residual, config.tolerances.residual));
    report.checks.push_back(below("block_spectrum", bl.spectrum_distance, config.tolerances.spectrum));
  });

  // Stage 9: every inequality of the estimate chain, one report per name.
  stages.run("bounds", false, [&] {
    std::vector<BoundReport> out;
    std::string first_error;
    auto add = [&](const std::string& name, const std::function<BoundReport()>& make) {
      try {
        BoundReport r = make();
        r.name = name;
        out.push_back(sanitize(std::move(r)));
      } catch (const std::exception& e) {
        if (first_error.empty()) first_error = name + ": " + e.what();
        out.push_back(inapplicable_bound(name, std::string("error: ") + e.what()));
      }
    };
    const auto orders = admissible_partial_sum_orders(family);

    add("neighborhood_separation", [&] { return check_neighborhood_separation(family, b); });

    CounterRng shift_rng = CounterRng(seed).split(kShiftStream);
    const auto shifts = sample_outside_neighborhood(
        family, b, static_cast<std::size_t>(config.mode.resolvent_samples), shift_rng);
    std::vector<BoundReport> res;
    try {
      res = resolvent_reports(pair, family, shifts, width);
    } catch (const std::exception& e) {
      if (first_error.empty()) first_error = std::string("resolvent: ") + e.what();
      for (const char* nm : {"resolvent_perturbed", "neumann_factor", "splitting_g_norm", "splitting_identity"}) {
        res.push_back(inapplicable_bound(nm, std::string("error: ") + e.what()));
      }
    }
    auto pick = [&](const std::string& nm) {
      return *std::find_if(res.begin(), res.end(), [&](const BoundReport& r) { return r.name == nm; });
    };
    add("resolvent_perturbed", [&] { return pick("resolvent_perturbed"); });
    add("neumann_factor", [&] { return pick("neumann_factor"); });
    add("splitting_identity", [&] { return pick("splitting_identity"); });
    add("splitting_g_norm", [&] { return pick("splitting_g_norm"); });

    add("horizontal_correction", [&] {
      std::vector<BoundReport> per_n;
      for (int k : orders) per_n.push_back(check_horizontal_bound(pair, family, k));
      return worst_of("horizontal_correction", per_n);
    });
    std::vector<BoundReport> central;
    std::vector<BoundReport> outer;
    std::string vertical_error;
    try {
      for (int k : orders) {
        const VerticalBounds vb = check_vertical_bounds(pair, family, k, config.quadrature.order, width, qopt.panels);
        central.push_back(vb.central);
        outer.push_back(vb.outer);
      }
    } catch (const std::exception& e) {
      vertical_error = e.what();
    }
    auto vertical = [&](const std::string& nm, const std::vector<BoundReport>& v) {
      if (!vertical_error.empty()) throw Error(ErrorCode::QuadratureStalled, vertical_error);
      return worst_of(nm, v);
    };
    add("vertical_central", [&] { return vertical("vertical_central", central); });
    add("vertical_outer", [&] { return vertical("vertical_outer", outer); });
    add("vertical_outer_below_one", [&] {
      if (!(b < 0.5 * d)) return inapplicable_bound("vertical_outer_below_one", "requires b < d/2");
      BoundReport r = make_bound("vertical_outer_below_one", b / (d - b), 1.0, "b/(d-b) < 1", 0.0);
      r.pass = r.lhs < 1.0;
      return r;
    });
    add("correction_uniform", [&] {
      if (!have_partial) return inapplicable_bound("correction_uniform", "partial sums unavailable");
      auto r = worst_of("correction_uniform", correction_reports(corrections, b, d));
      r.context += " C=" + std::to_string(correction_constant(b, d));
      return r;
    });

    const auto decay_xs = unit_vectors(seed, kVectorStream, std::min(kDecayVectors, config.mode.vector_samples), n);
    add("spectral_function_identity", [&] {
      std::vector<BoundReport> samples;
      const std::size_t count = std::min<std::size_t>(shifts.size(), static_cast<std::size_t>(config.mode.spectral_shifts));
      for (std::size_t s = 0; s < count; ++s) {
        for (int v = 0; v < std::min<int>(kSpectralVectors, static_cast<int>(decay_xs.size())); ++v) {
          const auto sf = spectral_function_integral(pair.t(), decay_xs[static_cast<std::size_t>(v)], shifts[s]);
          BoundReport r = make_bound("spectral_function_identity", sf.relative_error, 1e-10,
                                     "shift #" + std::to_string(s) + " x#" + std::to_string(v), 0.0);
          r.pass = sf.pass;
          samples.push_back(r);
        }
      }
      return worst_of("spectral_function_identity", samples);
    });
    add("resolvent_decay", [&] {
      std::vector<BoundReport> samples;
      for (const auto& x : decay_xs) samples.push_back(check_resolvent_decay(pair.t(), family, x));
      return worst_of("resolvent_decay", samples);
    });
    add("line_integral_identity", [&] {
      std::vector<BoundReport> samples;
      for (const auto& x : xs) samples.push_back(check_line_integral_identity(pair.t(), family, x));
      return worst_of("line_integral_identity", samples);
    });
    add("gap_sum", [&] {
      std::vector<BoundReport> samples;
      for (const auto& x : xs) samples.push_back(check_gap_sum_bound(pair.t(), family, x));
      return worst_of("gap_sum", samples);
    });
    std::string step2_error;
    if (!step2) {
      try {
        step2 = step2_analysis(pair, family, xs, config.quadrature.step2_order, width, qopt.panels);
      } catch (const std::exception& e) {
        step2_error = e.what();
      }
    }
    add("step2_constant", [&] {
      if (!step2) throw Error(ErrorCode::QuadratureStalled, step2_error);
      return step2_constant_report(*step2);
    });
    add("step2_aggregate", [&] {
      if (!step2) throw Error(ErrorCode::QuadratureStalled, step2_error);
      return step2_aggregate_report(*step2);
    });

    report.bounds = std::move(out);
    if (!first_error.empty()) throw Error(ErrorCode::QuadratureStalled, first_error);
  });

  bool pass = report.hypothesis.holds;
  // Stages left out on purpose by bounds_only do not count against the run.
  for (const auto& s : report.stages) {
    pass = pass && (s.status == "ok" || (options.bounds_only && s.status == "skipped"));
  }
  for (const auto& bnd : report.bounds) pass = pass && bnd.pass;
  for (const auto& c : report.checks) pass = pass && c.pass;
  report.pass = pass;
  report.exit_code = exit_code_for(report);
  report.total_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

CertificationReport certify(const RunConfig& config, const PipelineOptions& options) {
  validate(config);
  const Instance inst = generate_instance(config.instance);
  return run_certification(inst.pair, inst.family, config, echo_instance(config.instance, inst), options);
}

int exit_code_for(const CertificationReport& report) {
  const bool stage_error = std::any_of(report.stages.begin(), report.stages.end(),
                                       [](const StageRecord& s) { return s.status == "error"; });
  const bool hypothesis_error = !report.stages.empty() && report.stages.front().status == "error";
  if (stage_error && (report.hypothesis.holds || hypothesis_error)) return 3;
  return report.pass ? 0 : 1;
}

}  // namespace rieszcert
