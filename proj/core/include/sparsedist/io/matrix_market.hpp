#pragma once

#include <filesystem>
#include <iosfwd>
#include <string_view>

#include "sparsedist/csr.hpp"

namespace sparsedist::io {

/// Reads a Matrix Market coordinate file (real, integer or pattern;
/// general, symmetric or skew-symmetric). Pattern entries become 1.0,
/// symmetric storage is mirrored, duplicates are summed and 1-based indices
/// become 0-based. Throws ParseError (with the line number), UnsupportedField
/// or IoError.
CsrMatrix read_matrix_market(const std::filesystem::path& path);
CsrMatrix parse_matrix_market(std::istream& in, std::string_view source = "<stream>");

/// Writes "coordinate real general" with 17 significant digits.
void write_matrix_market(const CsrMatrix& m, const std::filesystem::path& path);
void write_matrix_market(const CsrMatrix& m, std::ostream& out);

}  // namespace sparsedist::io
