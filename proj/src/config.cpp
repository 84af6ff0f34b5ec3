#include "rieszcert/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace rieszcert {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorCode::ConfigError, what); }

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Removes a trailing '#' comment that is not inside a string literal.
std::string strip_comment(std::string_view s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) quoted = !quoted;
    if (s[i] == '#' && !quoted) return std::string(s.substr(0, i));
  }
  return std::string(s);
}

json to_document(const RunConfig& c) {
  json segs = json::array();
  for (const auto& s : c.instance.segments) segs.push_back({s.alpha, s.beta});
  return {
      {"instance",
       {{"n", c.instance.n},
        {"segments", segs},
        {"cluster_sizes", c.instance.cluster_sizes},
        {"b_ratio", c.instance.b_ratio},
        {"seed", c.instance.seed},
        {"perturbation_style", std::string(to_string(c.instance.perturbation_style))}}},
      {"quadrature",
       {{"tol", c.quadrature.tol},
        {"order", c.quadrature.order},
        {"max_order", c.quadrature.max_order},
        {"panel_factor", c.quadrature.panel_factor},
        {"style", std::string(to_string(c.quadrature.style))},
        {"b_prime", c.quadrature.b_prime},
        {"step2_order", c.quadrature.step2_order}}},
      {"tolerances",
       {{"residual", c.tolerances.residual},
        {"oracle", c.tolerances.oracle},
        {"spectrum", c.tolerances.spectrum},
        {"orthogonality", c.tolerances.orthogonality},
        {"unconditional", c.tolerances.unconditional},
        {"gram_root", c.tolerances.gram_root}}},
      {"mode",
       {{"force", c.mode.force},
        {"parallel", c.mode.parallel},
        {"resolvent_samples", c.mode.resolvent_samples},
        {"vector_samples", c.mode.vector_samples},
        {"sign_samples", c.mode.sign_samples},
        {"spectral_shifts", c.mode.spectral_shifts},
        {"partial_sums", c.mode.partial_sums}}},
  };
}

template <typename V>
void read(const json& doc, const char* section, const char* key, V& out) {
  const json& v = doc.at(section).at(key);
  try {
    if constexpr (std::is_same_v<V, int>) {
      if (!v.is_number_integer()) config_error(std::string(section) + "." + key + " must be an integer");
    } else if constexpr (std::is_same_v<V, double>) {
      if (!v.is_number()) config_error(std::string(section) + "." + key + " must be a number");
    } else if constexpr (std::is_same_v<V, bool>) {
      if (!v.is_boolean()) config_error(std::string(section) + "." + key + " must be true or false");
    } else if constexpr (std::is_same_v<V, std::uint64_t>) {
      if (!v.is_number_unsigned()) config_error(std::string(section) + "." + key + " must be a non-negative integer");
    }
    out = v.get<V>();
  } catch (const json::exception& e) {
    config_error(std::string(section) + "." + key + ": " + e.what());
  }
}

RunConfig from_document(const json& doc) {
  RunConfig c;
  read(doc, "instance", "n", c.instance.n);
  read(doc, "instance", "cluster_sizes", c.instance.cluster_sizes);
  read(doc, "instance", "b_ratio", c.instance.b_ratio);
  read(doc, "instance", "seed", c.instance.seed);
  std::string style;
  read(doc, "instance", "perturbation_style", style);
  c.instance.perturbation_style = parse_perturbation_style(style);
  const json& segs = doc.at("instance").at("segments");
  if (!segs.is_array()) config_error("instance.segments must be an array of [alpha, beta] pairs");
  c.instance.segments.clear();
  for (const auto& s : segs) {
    if (!s.is_array() || s.size() != 2 || !s[0].is_number() || !s[1].is_number()) {
      config_error("instance.segments must be an array of [alpha, beta] pairs");
    }
    c.instance.segments.push_back({s[0].get<double>(), s[1].get<double>()});
  }

  read(doc, "quadrature", "tol", c.quadrature.tol);
  read(doc, "quadrature", "order", c.quadrature.order);
  read(doc, "quadrature", "max_order", c.quadrature.max_order);
  read(doc, "quadrature", "panel_factor", c.quadrature.panel_factor);
  read(doc, "quadrature", "style", style);
  c.quadrature.style = parse_contour_style(style);
  read(doc, "quadrature", "b_prime", c.quadrature.b_prime);
  read(doc, "quadrature", "step2_order", c.quadrature.step2_order);

  read(doc, "tolerances", "residual", c.tolerances.residual);
  read(doc, "tolerances", "oracle", c.tolerances.oracle);
  read(doc, "tolerances", "spectrum", c.tolerances.spectrum);
  read(doc, "tolerances", "orthogonality", c.tolerances.orthogonality);
  read(doc, "tolerances", "unconditional", c.tolerances.unconditional);
  read(doc, "tolerances", "gram_root", c.tolerances.gram_root);

  read(doc, "mode", "force", c.mode.force);
  read(doc, "mode", "parallel", c.mode.parallel);
  read(doc, "mode", "resolvent_samples", c.mode.resolvent_samples);
  read(doc, "mode", "vector_samples", c.mode.vector_samples);
  read(doc, "mode", "sign_samples", c.mode.sign_samples);
  read(doc, "mode", "spectral_shifts", c.mode.spectral_shifts);
  read(doc, "mode", "partial_sums", c.mode.partial_sums);
  return c;
}

void set_key(json& doc, std::string_view dotted, json value) {
  const auto dot = dotted.find('.');
  if (dot == std::string_view::npos) config_error("key '" + std::string(dotted) + "' needs a section");
  const std::string section(dotted.substr(0, dot));
  const std::string key(dotted.substr(dot + 1));
  if (!doc.contains(section)) config_error("unknown section [" + section + "]");
  if (!doc[section].contains(key)) config_error("unknown key " + section + "." + key);
  // Accept integral numbers where reals are expected.
  if (doc[section][key].is_number_float() && value.is_number()) value = value.get<double>();
  doc[section][key] = std::move(value);
}

json parse_value(std::string_view text) {
  const std::string t = trim(text);
  if (t.empty()) config_error("empty value");
  json v = json::parse(t, nullptr, false);
  if (v.is_discarded()) return json(t);  // bare word
  return v;
}

}  // namespace

std::string_view to_string(ContourStyle style) {
  return style == ContourStyle::stadium ? "stadium" : "rectangle";
}

ContourStyle parse_contour_style(std::string_view name) {
  if (name == "stadium") return ContourStyle::stadium;
  if (name == "rectangle") return ContourStyle::rectangle;
  config_error("unknown contour style '" + std::string(name) + "'");
}

RunConfig parse_config(std::string_view text) {
  json doc = to_document(RunConfig{});
  std::istringstream in{std::string(text)};
  std::string section;
  std::string pending_key;
  std::string pending_value;
  std::size_t pending_line = 0;
  int depth = 0;
  std::size_t line_no = 0;

  auto flush = [&] {
    json v = json::parse(pending_value, nullptr, false);
    if (v.is_discarded()) {
      config_error("line " + std::to_string(pending_line) + ": value of '" + pending_key +
                   "' is not a valid literal");
    }
    try {
      set_key(doc, section + "." + pending_key, std::move(v));
    } catch (const Error& e) {
      config_error("line " + std::to_string(pending_line) + ": " + e.what());
    }
    pending_key.clear();
    pending_value.clear();
  };
  auto bracket_depth = [](std::string_view s) {
    int d = 0;
    bool quoted = false;
    for (char ch : s) {
      if (ch == '"') quoted = !quoted;
      if (quoted) continue;
      if (ch == '[') ++d;
      if (ch == ']') --d;
    }
    return d;
  };

  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (!pending_key.empty()) {
      pending_value += " " + line;
      depth += bracket_depth(line);
      if (depth <= 0) flush();
      continue;
    }
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']' && line.find('=') == std::string::npos) {
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (!doc.contains(section)) config_error("line " + std::to_string(line_no) + ": unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) config_error("line " + std::to_string(line_no) + ": expected key = value");
    if (section.empty()) config_error("line " + std::to_string(line_no) + ": key outside a section");
    pending_key = trim(std::string_view(line).substr(0, eq));
    pending_value = trim(std::string_view(line).substr(eq + 1));
    pending_line = line_no;
    if (pending_value.empty()) config_error("line " + std::to_string(line_no) + ": empty value");
    depth = bracket_depth(pending_value);
    if (depth <= 0) flush();
  }
  if (!pending_key.empty()) config_error("line " + std::to_string(pending_line) + ": unterminated array");
  RunConfig c = from_document(doc);
  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

std::string format_config(const RunConfig& config) {
  const json doc = to_document(config);
  std::string out;
  for (const char* section : {"instance", "quadrature", "tolerances", "mode"}) {
    if (!out.empty()) out += "\n";
    out += "[" + std::string(section) + "]\n";
    for (const auto& [key, value] : doc.at(section).items()) out += key + " = " + value.dump() + "\n";
  }
  return out;
}

std::string config_to_json(const RunConfig& config) { return to_document(config).dump(); }

RunConfig config_from_json(std::string_view text) {
  const json parsed = json::parse(text, nullptr, false);
  if (parsed.is_discarded() || !parsed.is_object()) config_error("config is not a JSON object");
  json doc = to_document(RunConfig{});
  for (const auto& [section, body] : parsed.items()) {
    if (!body.is_object()) config_error("section " + section + " is not an object");
    for (const auto& [key, value] : body.items()) set_key(doc, section + "." + key, value);
  }
  return from_document(doc);
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    const json doc = to_document(RunConfig{});
    for (const auto& [section, body] : doc.items()) {
      for (const auto& [key, value] : body.items()) out.push_back(section + "." + key);
    }
    return out;
  }();
  return keys;
}

void apply_override(RunConfig& config, std::string_view dotted_key, std::string_view value) {
  json doc = to_document(config);
  set_key(doc, dotted_key, parse_value(value));
  config = from_document(doc);
}

void validate(const RunConfig& c) {
  validate(c.instance);
  if (!(c.quadrature.tol > 0.0)) config_error("quadrature.tol must be positive");
  if (c.quadrature.order < 2) config_error("quadrature.order must be at least 2");
  if (c.quadrature.max_order < c.quadrature.order) config_error("quadrature.max_order must be >= quadrature.order");
  if (c.quadrature.step2_order < 2) config_error("quadrature.step2_order must be at least 2");
  if (!(c.quadrature.panel_factor > 0.0)) config_error("quadrature.panel_factor must be positive");
  if (!(c.quadrature.b_prime >= 0.0)) config_error("quadrature.b_prime must be non-negative");
  if (c.mode.parallel < 1) config_error("mode.parallel must be at least 1");
  if (c.mode.resolvent_samples < 1 || c.mode.vector_samples < 1 || c.mode.sign_samples < 1 ||
      c.mode.spectral_shifts < 1) {
    config_error("sample counts must be positive");
  }
}

}  // namespace rieszcert
