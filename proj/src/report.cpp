#include "rieszcert/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace rieszcert {

using nlohmann::json;

namespace {

template <class F> void fields(InstanceEcho& v, F&& f) {
  f("source", v.source); f("n", v.n); f("segments", v.segments); f("cluster_sizes", v.cluster_sizes);
  f("b_ratio", v.b_ratio); f("seed", v.seed); f("perturbation_style", v.perturbation_style);
  f("b", v.b); f("d", v.d);
}
template <class F> void fields(HypothesisReport& v, F&& f) {
  f("holds", v.holds); f("b", v.b); f("d", v.d); f("margin", v.margin);
}
template <class F> void fields(StageRecord& v, F&& f) {
  f("name", v.name); f("status", v.status); f("error_code", v.error_code); f("message", v.message);
  f("seconds", v.seconds);
}
template <class F> void fields(EigenRecord& v, F&& f) {
  f("re", v.re); f("im", v.im); f("assigned_cluster", v.assigned_cluster);
  f("dist_to_segment", v.dist_to_segment); f("neighborhoods", v.neighborhoods);
}
template <class F> void fields(EnclosureSummary& v, F&& f) {
  f("enclosure", v.enclosure); f("outside", v.outside); f("ambiguous", v.ambiguous);
  f("max_excess", v.max_excess);
}
template <class F> void fields(ProjectionSummary& v, F&& f) {
  f("index", v.index); f("rank", v.rank); f("idempotency", v.idempotency); f("order", v.order);
  f("node_count", v.node_count); f("converged", v.converged); f("oracle_difference", v.oracle_difference);
  f("spectral_difference", v.spectral_difference);
}
template <class F> void fields(VerificationSummary& v, F&& f) {
  f("minimality", v.minimality); f("completeness", v.completeness); f("commutation", v.commutation);
  f("max_idempotency", v.max_idempotency); f("oracle_max_difference", v.oracle_max_difference);
  f("eigenvector_condition", v.eigenvector_condition); f("near_defective", v.near_defective);
  f("ill_conditioned", v.ill_conditioned);
}
template <class F> void fields(PartialSumSummary& v, F&& f) {
  f("n", v.n); f("lo", v.lo); f("hi", v.hi); f("norm", v.norm); f("horizontal_norm", v.horizontal_norm);
  f("vertical_norm", v.vertical_norm); f("big_vs_sum", v.big_vs_sum); f("three_term", v.three_term);
  f("idempotency", v.idempotency); f("order", v.order);
}
template <class F> void fields(BasisSummary& v, F&& f) {
  f("m", v.m); f("M", v.M); f("condition", v.condition); f("gram_hermitian", v.gram_hermitian);
  f("gram_identity", v.gram_identity); f("k_root_residual", v.k_root_residual);
  f("cross_orthogonality", v.cross_orthogonality); f("projection_hermitian", v.projection_hermitian);
  f("projection_idempotency", v.projection_idempotency); f("reconstruction", v.reconstruction);
  f("unconditional_constant", v.unconditional_constant);
  f("unconditional_exhaustive", v.unconditional_exhaustive); f("sign_vectors", v.sign_vectors);
  f("c1", v.c1); f("c1_ceiling", v.c1_ceiling); f("c2", v.c2); f("sum_bound_factor", v.sum_bound_factor);
  f("sum_bound_worst_ratio", v.sum_bound_worst_ratio); f("sum_bound_pass", v.sum_bound_pass);
  f("sum_bound_samples", v.sum_bound_samples);
}
template <class F> void fields(BlockSummary& v, F&& f) {
  f("off_block_residual", v.off_block_residual); f("basis_off_block", v.basis_off_block);
  f("basis_orthonormality", v.basis_orthonormality); f("spectrum_distance", v.spectrum_distance);
  f("ranks", v.ranks);
}
template <class F> void fields(BoundReport& v, F&& f) {
  f("name", v.name); f("lhs", v.lhs); f("rhs", v.rhs); f("pass", v.pass); f("slack", v.slack);
  f("context", v.context); f("applicable", v.applicable);
}
template <class F> void fields(CheckRecord& v, F&& f) {
  f("name", v.name); f("value", v.value); f("threshold", v.threshold); f("pass", v.pass);
}
template <class F> void fields(CertificationReport& v, F&& f) {
  f("instance", v.instance); f("config", v.config); f("hypothesis", v.hypothesis); f("stages", v.stages);
  f("enclosure", v.enclosure); f("eigenvalues", v.eigenvalues); f("b_prime", v.b_prime);
  f("projections", v.projections); f("verification", v.verification); f("partial_sums", v.partial_sums);
  f("basis", v.basis); f("blocks", v.blocks); f("bounds", v.bounds); f("checks", v.checks);
  f("pass", v.pass); f("exit_code", v.exit_code); f("total_seconds", v.total_seconds);
}

template <class T>
concept Reflected = requires(T& t) { fields(t, [](const char*, auto&) {}); };

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::ParseError, "report: " + what); }

json encode(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}
json encode(int v) { return v; }
json encode(bool v) { return v; }
json encode(std::uint64_t v) { return v; }
json encode(const std::string& v) { return v; }
json encode(const Segment& s) { return json::array({encode(s.alpha), encode(s.beta)}); }
json encode(const RunConfig& c) { return json::parse(config_to_json(c)); }
template <Reflected T> json encode(const T& v);
template <class T> json encode(const std::vector<T>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(encode(x));
  return a;
}
template <Reflected T> json encode(const T& v) {
  json o = json::object();
  fields(const_cast<T&>(v), [&](const char* key, const auto& member) { o[key] = encode(member); });
  return o;
}

void decode(const json& j, double& v) {
  if (j.is_number()) {
    v = j.get<double>();
  } else if (j == "inf") {
    v = std::numeric_limits<double>::infinity();
  } else if (j == "-inf") {
    v = -std::numeric_limits<double>::infinity();
  } else if (j == "nan") {
    v = std::numeric_limits<double>::quiet_NaN();
  } else {
    bad("expected a number, got " + j.dump());
  }
}
void decode(const json& j, int& v) {
  if (!j.is_number_integer()) bad("expected an integer, got " + j.dump());
  v = j.get<int>();
}
void decode(const json& j, bool& v) {
  if (!j.is_boolean()) bad("expected a boolean, got " + j.dump());
  v = j.get<bool>();
}
void decode(const json& j, std::uint64_t& v) {
  if (!j.is_number_unsigned()) bad("expected an unsigned integer, got " + j.dump());
  v = j.get<std::uint64_t>();
}
void decode(const json& j, std::string& v) {
  if (!j.is_string()) bad("expected a string, got " + j.dump());
  v = j.get<std::string>();
}
void decode(const json& j, Segment& s) {
  if (!j.is_array() || j.size() != 2) bad("expected [alpha, beta]");
  decode(j[0], s.alpha);
  decode(j[1], s.beta);
}
void decode(const json& j, RunConfig& c) { c = config_from_json(j.dump()); }
template <Reflected T> void decode(const json& j, T& v);
template <class T> void decode(const json& j, std::vector<T>& v) {
  if (!j.is_array()) bad("expected an array, got " + j.dump());
  v.assign(j.size(), T{});
  for (std::size_t i = 0; i < j.size(); ++i) decode(j[i], v[i]);
}
template <Reflected T> void decode(const json& j, T& v) {
  if (!j.is_object()) bad("expected an object");
  fields(v, [&](const char* key, auto& member) {
    if (!j.contains(key)) bad(std::string("missing field '") + key + "'");
    decode(j.at(key), member);
  });
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

CertificationReport without_timing(CertificationReport report) {
  for (auto& s : report.stages) s.seconds = 0.0;
  report.total_seconds = 0.0;
  return report;
}

std::string to_json_text(const CertificationReport& report, int indent) {
  return encode(report).dump(indent);
}

CertificationReport report_from_json_text(const std::string& text) {
  const json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) bad("not valid JSON");
  CertificationReport r;
  decode(j, r);
  return r;
}

CertificationReport load_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return report_from_json_text(ss.str());
}

void save_report(const CertificationReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path);
  out << to_json_text(report) << "\n";
}

std::string eigenvalue_csv(const CertificationReport& report) {
  std::string out = "re,im,assigned_cluster,dist_to_segment\n";
  for (const auto& e : report.eigenvalues) {
    out += g17(e.re) + "," + g17(e.im) + "," + std::to_string(e.assigned_cluster) + "," +
           g17(e.dist_to_segment) + "\n";
  }
  return out;
}

std::string render_svg(const CertificationReport& report) {
  const auto& segs = report.instance.segments;
  const double b = report.instance.b;
  const double bp = report.b_prime;
  double xmin = std::numeric_limits<double>::infinity();
  double xmax = -xmin;
  double ymax = std::max({b, bp, 1e-3});
  for (const auto& s : segs) {
    xmin = std::min(xmin, s.alpha);
    xmax = std::max(xmax, s.beta);
  }
  for (const auto& e : report.eigenvalues) {
    xmin = std::min(xmin, e.re);
    xmax = std::max(xmax, e.re);
    ymax = std::max(ymax, std::abs(e.im));
  }
  if (!std::isfinite(xmin)) {
    xmin = -1.0;
    xmax = 1.0;
  }
  const double pad = std::max({b, bp}) + 0.1 * std::max(1.0, xmax - xmin);
  xmin -= pad;
  xmax += pad;
  ymax += 0.1 * std::max(1.0, xmax - xmin);
  const double width = 900.0;
  const double scale = width / (xmax - xmin);
  const double height = 2.0 * ymax * scale;
  auto X = [&](double x) { return px((x - xmin) * scale); };
  auto Y = [&](double y) { return px((ymax - y) * scale); };

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + px(width) + "\" height=\"" +
                    px(height) + "\" viewBox=\"0 0 " + px(width) + " " + px(height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<line x1=\"0\" y1=\"" + Y(0) + "\" x2=\"" + px(width) + "\" y2=\"" + Y(0) +
         "\" stroke=\"#bbb\" stroke-width=\"0.5\"/>\n";
  for (const auto& s : segs) {
    if (b > 0.0) {
      const std::string r = px(b * scale);
      svg += "<path d=\"M " + X(s.alpha) + " " + Y(b) + " L " + X(s.beta) + " " + Y(b) + " A " + r + " " + r +
             " 0 0 1 " + X(s.beta) + " " + Y(-b) + " L " + X(s.alpha) + " " + Y(-b) + " A " + r + " " + r +
             " 0 0 1 " + X(s.alpha) + " " + Y(b) + " Z\" fill=\"#dde8ff\" stroke=\"#4a6fd0\" stroke-width=\"1\"/>\n";
    }
    if (bp > 0.0) {
      if (report.config.quadrature.style == ContourStyle::rectangle) {
        svg += "<rect x=\"" + X(s.alpha - bp) + "\" y=\"" + Y(bp) + "\" width=\"" +
               px((s.length() + 2 * bp) * scale) + "\" height=\"" + px(2 * bp * scale) +
               "\" fill=\"none\" stroke=\"#2a9d4b\" stroke-dasharray=\"4 3\"/>\n";
      } else {
        const std::string r = px(bp * scale);
        svg += "<path d=\"M " + X(s.alpha) + " " + Y(bp) + " L " + X(s.beta) + " " + Y(bp) + " A " + r + " " + r +
               " 0 0 1 " + X(s.beta) + " " + Y(-bp) + " L " + X(s.alpha) + " " + Y(-bp) + " A " + r + " " + r +
               " 0 0 1 " + X(s.alpha) + " " + Y(bp) + " Z\" fill=\"none\" stroke=\"#2a9d4b\" stroke-dasharray=\"4 3\"/>\n";
      }
    }
    svg += "<line x1=\"" + X(s.alpha) + "\" y1=\"" + Y(0) + "\" x2=\"" + X(s.beta) + "\" y2=\"" + Y(0) +
           "\" stroke=\"black\" stroke-width=\"3\"/>\n";
  }
  for (const auto& e : report.eigenvalues) {
    const char* color = e.neighborhoods == 1 ? "#c0392b" : "#f39c12";
    svg += "<circle cx=\"" + X(e.re) + "\" cy=\"" + Y(e.im) + "\" r=\"3\" fill=\"" + color + "\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace rieszcert
