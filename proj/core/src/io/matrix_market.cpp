#include "sparsedist/io/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "sparsedist/error.hpp"

namespace sparsedist::io {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string lower(std::string_view s) {
  std::string r(s);
  std::transform(r.begin(), r.end(), r.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return r;
}

[[noreturn]] void parse_error(std::string_view source, std::size_t line, const std::string& what) {
  throw Error(Errc::ParseError, std::string(source) + ":" + std::to_string(line) + ": " + what);
}

template <class T>
T parse_number(std::string_view tok, std::string_view source, std::size_t line) {
  T v{};
  const auto* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || ptr != end) parse_error(source, line, "bad number '" + std::string(tok) + "'");
  return v;
}

bool blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

CsrMatrix parse_matrix_market(std::istream& in, std::string_view source) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) parse_error(source, 1, "empty input");
  ++lineno;
  const auto header = split_ws(line);
  if (header.size() < 5 || lower(header[0]) != "%%matrixmarket" || lower(header[1]) != "matrix") {
    parse_error(source, lineno, "missing '%%MatrixMarket matrix' banner");
  }
  const std::string format = lower(header[2]);
  const std::string field = lower(header[3]);
  const std::string symmetry = lower(header[4]);
  if (format != "coordinate") throw Error(Errc::UnsupportedField, "format '" + format + "' (only coordinate)");
  if (field == "complex") throw Error(Errc::UnsupportedField, "complex field");
  if (field != "real" && field != "integer" && field != "pattern" && field != "double") {
    throw Error(Errc::UnsupportedField, "field '" + field + "'");
  }
  if (symmetry != "general" && symmetry != "symmetric" && symmetry != "skew-symmetric") {
    throw Error(Errc::UnsupportedField, "symmetry '" + symmetry + "'");
  }
  const bool pattern = field == "pattern";
  const bool mirror = symmetry != "general";
  const double mirror_sign = symmetry == "skew-symmetric" ? -1.0 : 1.0;

  bool have_size = false;
  std::int64_t n_rows = 0, n_cols = 0, declared = 0, seen = 0;
  std::vector<std::int64_t> rows, cols;
  std::vector<double> vals;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line[0] == '%') continue;
    if (blank(line)) continue;
    const auto tok = split_ws(line);
    if (!have_size) {
      if (tok.size() != 3) parse_error(source, lineno, "size line needs 'rows cols entries'");
      n_rows = parse_number<std::int64_t>(tok[0], source, lineno);
      n_cols = parse_number<std::int64_t>(tok[1], source, lineno);
      declared = parse_number<std::int64_t>(tok[2], source, lineno);
      if (n_rows < 0 || n_cols < 0 || declared < 0) parse_error(source, lineno, "negative size");
      rows.reserve(static_cast<std::size_t>(declared) * (mirror ? 2 : 1));
      have_size = true;
      continue;
    }
    if (seen == declared) parse_error(source, lineno, "more entries than the declared " + std::to_string(declared));
    const std::size_t want = pattern ? 2 : 3;
    if (tok.size() != want) {
      parse_error(source, lineno, "expected " + std::to_string(want) + " fields, got " + std::to_string(tok.size()));
    }
    const auto r = parse_number<std::int64_t>(tok[0], source, lineno);
    const auto c = parse_number<std::int64_t>(tok[1], source, lineno);
    if (r < 1 || r > n_rows || c < 1 || c > n_cols) {
      parse_error(source, lineno, "entry (" + std::to_string(r) + ", " + std::to_string(c) + ") outside " +
                                      std::to_string(n_rows) + "x" + std::to_string(n_cols));
    }
    const double v = pattern ? 1.0 : parse_number<double>(tok[2], source, lineno);
    rows.push_back(r - 1);
    cols.push_back(c - 1);
    vals.push_back(v);
    if (mirror && r != c) {
      rows.push_back(c - 1);
      cols.push_back(r - 1);
      vals.push_back(mirror_sign * v);
    }
    ++seen;
  }
  if (!have_size) parse_error(source, lineno, "missing size line");
  if (seen != declared) {
    parse_error(source, lineno, "declared " + std::to_string(declared) + " entries, found " + std::to_string(seen));
  }

  RawCsr raw;
  raw.n_rows = static_cast<std::size_t>(n_rows);
  raw.n_cols = static_cast<std::size_t>(n_cols);
  raw.indptr.assign(raw.n_rows + 1, 0);
  for (auto r : rows) ++raw.indptr[static_cast<std::size_t>(r) + 1];
  for (std::size_t r = 0; r < raw.n_rows; ++r) raw.indptr[r + 1] += raw.indptr[r];
  raw.indices.resize(rows.size());
  raw.values.resize(rows.size());
  std::vector<std::int64_t> fill(raw.indptr.begin(), raw.indptr.end() - 1);
  for (std::size_t t = 0; t < rows.size(); ++t) {
    const auto pos = static_cast<std::size_t>(fill[static_cast<std::size_t>(rows[t])]++);
    raw.indices[pos] = cols[t];
    raw.values[pos] = vals[t];
  }
  return validate_and_canonicalize(raw);
}

CsrMatrix read_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  return parse_matrix_market(in, path.string());
}

void write_matrix_market(const CsrMatrix& m, std::ostream& out) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.n_rows() << ' ' << m.n_cols() << ' ' << m.nnz() << '\n';
  char buf[64];
  for (std::size_t r = 0; r < m.n_rows(); ++r) {
    for (std::size_t t = m.indptr()[r]; t < m.indptr()[r + 1]; ++t) {
      std::snprintf(buf, sizeof(buf), "%.17g", m.values()[t]);
      out << (r + 1) << ' ' << (m.indices()[t] + 1) << ' ' << buf << '\n';
    }
  }
}

void write_matrix_market(const CsrMatrix& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
  write_matrix_market(m, out);
  if (!out) throw Error(Errc::IoError, "write failed for " + path.string());
}

}  // namespace sparsedist::io
