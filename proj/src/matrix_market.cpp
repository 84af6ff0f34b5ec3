#include "rieszcert/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace rieszcert {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

[[noreturn]] void fail(std::size_t line, std::size_t column, const std::string& what) {
  throw Error(ErrorCode::ParseError,
              "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what);
}

// Splits one line into tokens with their 1-based columns.
struct Token {
  std::string_view text;
  std::size_t column;
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

double to_double(const Token& t, std::size_t line) {
  double v = 0.0;
  const char* end = t.text.data() + t.text.size();
  auto [ptr, ec] = std::from_chars(t.text.data(), end, v);
  if (ec != std::errc() || ptr != end) fail(line, t.column, "expected a number, got '" + std::string(t.text) + "'");
  return v;
}

long long to_index(const Token& t, std::size_t line) {
  long long v = 0;
  const char* end = t.text.data() + t.text.size();
  auto [ptr, ec] = std::from_chars(t.text.data(), end, v);
  if (ec != std::errc() || ptr != end || v < 0) {
    fail(line, t.column, "expected a non-negative integer, got '" + std::string(t.text) + "'");
  }
  return v;
}

std::string shortest(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

MatrixFile parse_matrix_market(std::string_view text) {
  std::vector<std::string_view> lines;
  for (std::size_t pos = 0; pos <= text.size();) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  if (lines.empty() || lines.front().empty()) fail(1, 1, "missing %%MatrixMarket header");

  const auto header = tokenize(lines.front());
  if (header.size() != 5 || lower(header[0].text) != "%%matrixmarket") {
    fail(1, 1, "header must read '%%MatrixMarket matrix <format> <field> <symmetry>'");
  }
  if (lower(header[1].text) != "matrix") fail(1, header[1].column, "object must be 'matrix'");
  const std::string format = lower(header[2].text);
  const std::string field = lower(header[3].text);
  const std::string symmetry = lower(header[4].text);
  if (format != "array" && format != "coordinate") fail(1, header[2].column, "unknown format '" + format + "'");
  if (field != "real" && field != "complex" && field != "integer" && field != "double") {
    fail(1, header[3].column, "unsupported field '" + field + "'");
  }
  if (symmetry != "general" && symmetry != "symmetric" && symmetry != "hermitian" &&
      symmetry != "skew-symmetric") {
    fail(1, header[4].column, "unsupported symmetry '" + symmetry + "'");
  }
  const bool complex_field = field == "complex";
  if (symmetry == "hermitian" && !complex_field) fail(1, header[4].column, "hermitian requires complex field");
  const std::size_t per_entry = complex_field ? 2 : 1;

  MatrixFile out;
  std::size_t li = 1;
  for (; li < lines.size(); ++li) {
    if (!lines[li].empty() && lines[li].front() == '%') {
      std::string_view c = lines[li].substr(1);
      if (!c.empty() && c.front() == ' ') c.remove_prefix(1);
      out.comments.emplace_back(c);
      continue;
    }
    if (!tokenize(lines[li]).empty()) break;
  }
  if (li >= lines.size()) fail(lines.size(), 1, "missing size line");
  const auto size = tokenize(lines[li]);
  const std::size_t size_line = li + 1;
  const std::size_t expected_size_tokens = format == "array" ? 2 : 3;
  if (size.size() != expected_size_tokens) {
    fail(size_line, 1, "size line needs " + std::to_string(expected_size_tokens) + " integers");
  }
  const long long rows = to_index(size[0], size_line);
  const long long cols = to_index(size[1], size_line);
  const long long nnz = format == "coordinate" ? to_index(size[2], size_line) : rows * cols;
  if (symmetry != "general" && rows != cols) fail(size_line, 1, "symmetric storage needs a square matrix");
  out.matrix = CMatrix::Zero(rows, cols);

  // Array storage of symmetric matrices lists the lower triangle column by column.
  std::vector<std::pair<long long, long long>> array_slots;
  if (format == "array") {
    for (long long c = 0; c < cols; ++c) {
      for (long long r = symmetry == "general" ? 0 : c + (symmetry == "skew-symmetric" ? 1 : 0); r < rows; ++r) {
        array_slots.emplace_back(r, c);
      }
    }
  }
  const long long entries = format == "array" ? static_cast<long long>(array_slots.size()) : nnz;

  long long read = 0;
  for (++li; li < lines.size() && read < entries; ++li) {
    const auto tok = tokenize(lines[li]);
    if (tok.empty() || tok.front().text.front() == '%') continue;
    const std::size_t line_no = li + 1;
    long long r = 0;
    long long c = 0;
    std::size_t first_value = 0;
    if (format == "coordinate") {
      if (tok.size() != 2 + per_entry) fail(line_no, 1, "expected row, column and " + std::to_string(per_entry) + " value(s)");
      r = to_index(tok[0], line_no) - 1;
      c = to_index(tok[1], line_no) - 1;
      if (r < 0 || r >= rows) fail(line_no, tok[0].column, "row index out of range");
      if (c < 0 || c >= cols) fail(line_no, tok[1].column, "column index out of range");
      first_value = 2;
    } else {
      if (tok.size() != per_entry) fail(line_no, 1, "expected " + std::to_string(per_entry) + " value(s)");
      std::tie(r, c) = array_slots[static_cast<std::size_t>(read)];
    }
    const double re = to_double(tok[first_value], line_no);
    const double im = complex_field ? to_double(tok[first_value + 1], line_no) : 0.0;
    const Complex v(re, im);
    out.matrix(r, c) = v;
    if (r != c) {
      if (symmetry == "symmetric") out.matrix(c, r) = v;
      if (symmetry == "hermitian") out.matrix(c, r) = std::conj(v);
      if (symmetry == "skew-symmetric") out.matrix(c, r) = -v;
    }
    ++read;
  }
  if (read < entries) {
    fail(lines.size(), 1, "expected " + std::to_string(entries) + " entries, found " + std::to_string(read));
  }
  for (; li < lines.size(); ++li) {
    const auto tok = tokenize(lines[li]);
    if (!tok.empty() && tok.front().text.front() != '%') fail(li + 1, tok.front().column, "trailing data");
  }
  return out;
}

MatrixFile load_matrix_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_matrix_market(ss.str());
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

CMatrix load_matrix(const std::string& path) { return load_matrix_file(path).matrix; }

std::string format_matrix_market(const CMatrix& matrix, const std::vector<std::string>& comments) {
  std::string out = "%%MatrixMarket matrix array complex general\n";
  for (const auto& c : comments) {
    std::istringstream lines(c);
    for (std::string l; std::getline(lines, l);) out += "% " + l + "\n";
  }
  out += std::to_string(matrix.rows()) + " " + std::to_string(matrix.cols()) + "\n";
  for (Eigen::Index c = 0; c < matrix.cols(); ++c) {
    for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
      out += shortest(matrix(r, c).real());
      out += ' ';
      out += shortest(matrix(r, c).imag());
      out += '\n';
    }
  }
  return out;
}

void save_matrix(const CMatrix& matrix, const std::string& path,
                 const std::vector<std::string>& comments) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path);
  out << format_matrix_market(matrix, comments);
}

CMatrix load_square_matrix(const std::string& path, Eigen::Index expected) {
  CMatrix m = load_matrix(path);
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::DimensionMismatch, path + " is " + std::to_string(m.rows()) + "x" +
                                                  std::to_string(m.cols()));
  }
  if (expected >= 0 && m.rows() != expected) {
    throw Error(ErrorCode::DimensionMismatch,
                path + " has dimension " + std::to_string(m.rows()) + ", expected " + std::to_string(expected));
  }
  return m;
}

}  // namespace rieszcert
