// Command line front end: generate, project, verify, bounds, report.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rieszcert/config.hpp"
#include "rieszcert/instance.hpp"
#include "rieszcert/matrix_market.hpp"
#include "rieszcert/pipeline.hpp"
#include "rieszcert/projections.hpp"
#include "rieszcert/report.hpp"

namespace fs = std::filesystem;
using namespace rieszcert;

namespace {

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> b_ratio;
  bool force = false;
  std::optional<double> tol;
  std::optional<int> quad_order;
  std::string out = ".";
  std::optional<int> parallel;
  std::string input;
  std::map<std::string, std::string> overrides;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_input) {
  cmd->add_option("--config", f.config_path, "configuration file with [instance] [quadrature] [tolerances] [mode]");
  cmd->add_option("--seed", f.seed, "instance seed");
  cmd->add_option("--b-ratio", f.b_ratio, "b = ratio * d / 2");
  cmd->add_flag("--force", f.force, "keep going when b >= d/2");
  cmd->add_option("--tol", f.tol, "idempotency tolerance of the quadrature (default 1e-9)");
  cmd->add_option("--quad-order", f.quad_order, "initial Gauss-Legendre order per panel (default 32)");
  cmd->add_option("--out", f.out, "output directory")->capture_default_str();
  cmd->add_option("--parallel", f.parallel, "worker threads");
  if (with_input) cmd->add_option("--input", f.input, "directory written by `generate` (instead of generating)");
  for (const auto& key : config_keys()) {
    cmd->add_option("--" + key, f.overrides[key], "override " + key)->group("Config overrides");
  }
}

RunConfig resolve_config(const CommonFlags& f) {
  RunConfig c = f.config_path.empty() ? RunConfig{} : load_config(f.config_path);
  for (const auto& [key, value] : f.overrides) {
    if (!value.empty()) apply_override(c, key, value);
  }
  if (f.seed) c.instance.seed = *f.seed;
  if (f.b_ratio) c.instance.b_ratio = *f.b_ratio;
  if (f.force) c.mode.force = true;
  if (f.tol) c.quadrature.tol = *f.tol;
  if (f.quad_order) c.quadrature.order = *f.quad_order;
  if (f.parallel) c.mode.parallel = *f.parallel;
  validate(c);
  return c;
}

struct LoadedInstance {
  std::optional<Instance> instance;
  InstanceEcho echo;
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Files from `generate` (instance.json + T.mtx + B.mtx), or a fresh instance from the config.
LoadedInstance obtain_instance(RunConfig& config, const CommonFlags& f) {
  LoadedInstance li;
  if (f.input.empty()) {
    li.instance = generate_instance(config.instance);
    li.echo = echo_instance(config.instance, *li.instance);
    return li;
  }
  const fs::path dir(f.input);
  const RunConfig stored = config_from_json(read_file(dir / "instance.json"));
  config.instance = stored.instance;
  const CMatrix t = load_square_matrix((dir / "T.mtx").string());
  const CMatrix b = load_square_matrix((dir / "B.mtx").string(), t.rows());
  SegmentFamily family = build_segment_family(config.instance.segments);
  PerturbedPair pair(HermitianOperator(t), b);
  const double bn = pair.b_norm();
  li.instance = Instance{std::move(pair), std::move(family), bn};
  li.echo = echo_instance(config.instance, *li.instance);
  li.echo.source = "files";
  return li;
}

std::vector<std::string> header_comments(const RunConfig& config, const std::string& what) {
  return {what, "seed: " + std::to_string(config.instance.seed),
          "spec: " + nlohmann::json::parse(config_to_json(config))["instance"].dump()};
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + p.string());
  out << text;
}

void print_summary(const CertificationReport& r) {
  std::printf("instance n=%d segments=%zu b=%.6g d=%.6g hypothesis=%s\n", r.instance.n,
              r.instance.segments.size(), r.instance.b, r.instance.d, r.hypothesis.holds ? "holds" : "fails");
  for (const auto& s : r.stages) {
    std::printf("stage %-22s %-8s %8.3fs %s\n", s.name.c_str(), s.status.c_str(), s.seconds, s.message.c_str());
  }
  for (const auto& c : r.checks) {
    std::printf("[%s] check %-28s %.3e (threshold %.3e)\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.value,
                c.threshold);
  }
  for (const auto& b : r.bounds) {
    std::printf("[%s] bound %-28s lhs=%.6e rhs=%.6e %s\n", b.pass ? "PASS" : (b.applicable ? "FAIL" : "N/A "),
                b.name.c_str(), b.lhs, b.rhs, b.context.c_str());
  }
  std::printf("overall %s (exit %d)\n", r.pass ? "PASS" : "FAIL", r.exit_code);
}

void emit_report(const CertificationReport& r, const fs::path& out, const std::string& stem) {
  save_report(r, (out / (stem + ".json")).string());
  write_text(out / "eigenvalues.csv", eigenvalue_csv(r));
  write_text(out / "plot.svg", render_svg(r));
}

int cmd_generate(const CommonFlags& f) {
  RunConfig config = resolve_config(f);
  const Instance inst = generate_instance(config.instance);
  const fs::path out(f.out);
  fs::create_directories(out);
  save_matrix(inst.pair.t().matrix(), (out / "T.mtx").string(), header_comments(config, "T (Hermitian)"));
  save_matrix(inst.pair.b_matrix(), (out / "B.mtx").string(), header_comments(config, "B (perturbation)"));
  save_matrix(inst.pair.a_matrix(), (out / "A.mtx").string(), header_comments(config, "A = T + B"));
  write_text(out / "instance.json", config_to_json(config) + "\n");
  std::printf("wrote T.mtx B.mtx A.mtx instance.json to %s (n=%d, b=%.6g, d=%.6g)\n", out.string().c_str(),
              config.instance.n, inst.pair.b_norm(), inst.family.gap());
  return 0;
}

int cmd_project(const CommonFlags& f) {
  RunConfig config = resolve_config(f);
  const LoadedInstance li = obtain_instance(config, f);
  const Instance& inst = *li.instance;
  QuadratureOptions q;
  q.initial_order = config.quadrature.order;
  q.max_order = config.quadrature.max_order;
  q.panels.factor = config.quadrature.panel_factor;
  q.parallel = config.mode.parallel;
  q.throw_on_stall = !config.mode.force;
  std::optional<double> bp;
  if (config.quadrature.b_prime > 0.0) bp = config.quadrature.b_prime;
  const auto cp = contour_projections(inst.pair, inst.family, inst.pair.b_norm(), config.quadrature.tol, q,
                                      config.quadrature.style, bp);
  const fs::path out(f.out);
  fs::create_directories(out);
  nlohmann::json summary = nlohmann::json::array();
  for (int j = cp.set.first_index(); j <= cp.set.last_index(); ++j) {
    const auto& d = cp.details[static_cast<std::size_t>(j - cp.set.first_index())];
    const std::string name = "Q_" + std::to_string(j) + ".mtx";
    save_matrix(cp.set.at(j), (out / name).string(), header_comments(config, "Q_" + std::to_string(j)));
    summary.push_back({{"index", j}, {"file", name}, {"idempotency", d.idempotency_residual},
                       {"order", d.order}, {"nodes", d.node_count}, {"converged", d.converged}});
    std::printf("Q_%d  ||Q^2-Q||_F=%.3e order=%d nodes=%zu\n", j, d.idempotency_residual, d.order, d.node_count);
  }
  write_text(out / "projections.json",
             nlohmann::json{{"b_prime", cp.b_prime},
                            {"minimality", cp.set.minimality_residual()},
                            {"completeness", cp.set.completeness_residual()},
                            {"projections", summary}}
                     .dump(2) + "\n");
  return 0;
}

int cmd_certify(const CommonFlags& f, bool bounds_only) {
  RunConfig config = resolve_config(f);
  const LoadedInstance li = obtain_instance(config, f);
  PipelineOptions opt;
  opt.bounds_only = bounds_only;
  const CertificationReport r = run_certification(li.instance->pair, li.instance->family, config, li.echo, opt);
  const fs::path out(f.out);
  fs::create_directories(out);
  emit_report(r, out, bounds_only ? "bounds" : "report");
  print_summary(r);
  return r.exit_code;
}

int cmd_report(const std::string& path, const std::string& out_dir) {
  const CertificationReport r = load_report(path);
  const fs::path out(out_dir);
  fs::create_directories(out);
  write_text(out / "eigenvalues.csv", eigenvalue_csv(r));
  write_text(out / "plot.svg", render_svg(r));
  print_summary(r);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Riesz projection certification harness"};
  app.require_subcommand(1);
  CommonFlags gen_flags, project_flags, verify_flags, bounds_flags;
  auto* gen = app.add_subcommand("generate", "write T, B and A for an instance spec");
  add_common(gen, gen_flags, false);
  auto* project = app.add_subcommand("project", "contour-quadrature projections Q_j");
  add_common(project, project_flags, true);
  auto* verify = app.add_subcommand("verify", "full certification pipeline");
  add_common(verify, verify_flags, true);
  auto* bounds = app.add_subcommand("bounds", "estimate-chain bound checks only");
  add_common(bounds, bounds_flags, true);
  auto* report = app.add_subcommand("report", "re-render a stored report to CSV and SVG");
  std::string report_path;
  std::string report_out = ".";
  report->add_option("report", report_path, "report JSON")->required();
  report->add_option("--out", report_out, "output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*gen) return cmd_generate(gen_flags);
    if (*project) return cmd_project(project_flags);
    if (*verify) return cmd_certify(verify_flags, false);
    if (*bounds) return cmd_certify(bounds_flags, true);
    if (*report) return cmd_report(report_path, report_out);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.is_input_error() ? 2 : 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 2;
}
