#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "rieszcert/common.hpp"

namespace rieszcert {

struct MatrixFile {
  CMatrix matrix;
  std::vector<std::string> comments;  // header comment lines without the leading '%'
};

/// Reads the Matrix Market exchange format: array or coordinate, real/integer/complex,
/// general/symmetric/hermitian/skew-symmetric. Real data loads with zero imaginary parts.
/// Throws ParseError naming line and column.
MatrixFile parse_matrix_market(std::string_view text);
MatrixFile load_matrix_file(const std::string& path);
CMatrix load_matrix(const std::string& path);

/// Complex general array form with shortest round-trip decimal values.
std::string format_matrix_market(const CMatrix& matrix, const std::vector<std::string>& comments = {});
void save_matrix(const CMatrix& matrix, const std::string& path,
                 const std::vector<std::string>& comments = {});

/// Loads and checks the shape. Throws DimensionMismatch.
CMatrix load_square_matrix(const std::string& path, Eigen::Index expected = -1);

}  // namespace rieszcert
