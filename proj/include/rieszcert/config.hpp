#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "rieszcert/contour.hpp"
#include "rieszcert/instance.hpp"

namespace rieszcert {

struct QuadratureConfig {
  double tol = 1e-9;       // idempotency target ||Q^2 - Q||_F
  int order = 32;          // initial Gauss-Legendre points per panel
  int max_order = 512;     // doubling cap
  double panel_factor = 4.0;   // panel length <= factor * clearance to U_b
  ContourStyle style = ContourStyle::rectangle;
  double b_prime = 0.0;    // contour offset; 0 selects (b + d/2) / 2
  int step2_order = 32;

  friend bool operator==(const QuadratureConfig&, const QuadratureConfig&) = default;
};

struct ToleranceConfig {
  double residual = 1e-8;        // minimality, completeness, commutation, off-block
  double oracle = 1e-8;          // ||Q_j - Q_j(oracle)||_F
  double spectrum = 1e-7;        // block spectra vs spectrum of A
  double orthogonality = 1e-8;   // Gram cross terms and Hermitian defect of K Q_j K^{-1}
  double unconditional = 1e-6;   // unconditional constant <= cond(K) + this
  double gram_root = 1e-10;      // ||K^2 - G||_F / ||G||_F

  friend bool operator==(const ToleranceConfig&, const ToleranceConfig&) = default;
};

struct ModeConfig {
  bool force = false;                  // continue when b >= d/2
  int parallel = 1;
  int resolvent_samples = 1000;
  int vector_samples = 100;
  int sign_samples = 10000;
  int spectral_shifts = 16;
  bool partial_sums = true;

  friend bool operator==(const ModeConfig&, const ModeConfig&) = default;
};

struct RunConfig {
  InstanceSpec instance;
  QuadratureConfig quadrature;
  ToleranceConfig tolerances;
  ModeConfig mode;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

std::string_view to_string(ContourStyle style);
ContourStyle parse_contour_style(std::string_view name);

/// Section/key-value text: `[section]` headers, `key = value` lines, `#` comments.
/// Values are JSON literals (numbers, strings, booleans, arrays); arrays may span lines.
/// Throws ConfigError naming the line.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);
std::string format_config(const RunConfig& config);

/// The same content as a JSON object keyed by section.
std::string config_to_json(const RunConfig& config);
RunConfig config_from_json(std::string_view text);

/// Every dotted key accepted by apply_override, e.g. "instance.seed".
const std::vector<std::string>& config_keys();

/// Sets one dotted key from its textual value. Bare words are read as strings.
void apply_override(RunConfig& config, std::string_view dotted_key, std::string_view value);

/// Throws ConfigError or InvalidSpec on out-of-range values.
void validate(const RunConfig& config);

}  // namespace rieszcert
