#include "sparsedist/io/output.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>
#include <vector>

#include "sparsedist/error.hpp"

namespace sparsedist::io {

using nlohmann::json;

namespace {

json number_to_json(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double number_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return std::strtod(j.get<std::string>().c_str(), nullptr);
  throw Error(Errc::ParseError, "expected a number in JSON output");
}

double parse_cell(const std::string& tok) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str()) throw Error(Errc::ParseError, "bad number '" + tok + "'");
  return v;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(tok);
  return out;
}

template <class T>
void write_file(const T& value, const std::filesystem::path& path, OutputFormat fmt, bool header,
                void (*writer)(const T&, std::ostream&, OutputFormat, bool)) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
  writer(value, out, fmt, header);
  if (!out) throw Error(Errc::IoError, "write failed for " + path.string());
}

}  // namespace

OutputFormat parse_format(std::string_view name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw Error(Errc::InvalidParam, "output format '" + std::string(name) + "' (csv|json)");
}

OutputFormat format_for(const std::filesystem::path& path) {
  return path.extension() == ".json" ? OutputFormat::Json : OutputFormat::Csv;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_distances(const DistanceOutput& d, std::ostream& out, OutputFormat fmt, bool header) {
  if (fmt == OutputFormat::Json) {
    json rows = json::array();
    for (std::size_t i = 0; i < d.rows(); ++i) {
      json row = json::array();
      for (double v : d.row(i)) row.push_back(number_to_json(v));
      rows.push_back(std::move(row));
    }
    out << json{{"rows", d.rows()}, {"cols", d.cols()}, {"data", std::move(rows)}}.dump() << '\n';
    return;
  }
  if (header) {
    for (std::size_t j = 0; j < d.cols(); ++j) out << (j ? "," : "") << 'j' << j;
    out << '\n';
  }
  for (std::size_t i = 0; i < d.rows(); ++i) {
    const auto row = d.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << format_double(row[j]);
    out << '\n';
  }
}

void write_neighbors(const NeighborResult& r, std::ostream& out, OutputFormat fmt, bool header) {
  if (fmt == OutputFormat::Json) {
    json records = json::array();
    for (std::size_t q = 0; q < r.n_queries; ++q) {
      json dist = json::array();
      for (double v : r.distances_row(q)) dist.push_back(number_to_json(v));
      const auto idx = r.indices_row(q);
      records.push_back({{"query", q},
                         {"neighbors", std::vector<std::size_t>(idx.begin(), idx.end())},
                         {"distances", std::move(dist)}});
    }
    out << records.dump() << '\n';
    return;
  }
  if (header) out << "query_id,neighbor_id,distance\n";
  for (std::size_t q = 0; q < r.n_queries; ++q) {
    for (std::size_t t = 0; t < r.k; ++t) {
      out << q << ',' << r.indices[q * r.k + t] << ',' << format_double(r.distances[q * r.k + t]) << '\n';
    }
  }
}

void write_output(const DistanceOutput& d, const std::filesystem::path& path, OutputFormat fmt, bool header) {
  write_file(d, path, fmt, header, &write_distances);
}

void write_output(const NeighborResult& r, const std::filesystem::path& path, OutputFormat fmt, bool header) {
  write_file(r, path, fmt, header, &write_neighbors);
}

DistanceOutput read_distances(std::istream& in, OutputFormat fmt, bool header) {
  if (fmt == OutputFormat::Json) {
    const json j = json::parse(in);
    DistanceOutput d(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
    const json& data = j.at("data");
    for (std::size_t i = 0; i < d.rows(); ++i) {
      for (std::size_t c = 0; c < d.cols(); ++c) d(i, c) = number_from_json(data.at(i).at(c));
    }
    return d;
  }
  std::string line;
  if (header) std::getline(in, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    for (const auto& tok : split_csv(line)) row.push_back(parse_cell(tok));
    rows.push_back(std::move(row));
  }
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  DistanceOutput d(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw Error(Errc::ParseError, "ragged CSV row " + std::to_string(i));
    for (std::size_t c = 0; c < cols; ++c) d(i, c) = rows[i][c];
  }
  return d;
}

NeighborResult read_neighbors(std::istream& in, OutputFormat fmt, bool header) {
  NeighborResult r;
  if (fmt == OutputFormat::Json) {
    const json j = json::parse(in);
    r.n_queries = j.size();
    for (const json& rec : j) {
      const auto idx = rec.at("neighbors").get<std::vector<std::size_t>>();
      r.k = idx.size();
      r.indices.insert(r.indices.end(), idx.begin(), idx.end());
      for (const json& v : rec.at("distances")) r.distances.push_back(number_from_json(v));
    }
    return r;
  }
  std::string line;
  if (header) std::getline(in, line);
  std::vector<std::size_t> queries;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto tok = split_csv(line);
    if (tok.size() != 3) throw Error(Errc::ParseError, "neighbor CSV rows need 3 fields");
    queries.push_back(std::stoull(tok[0]));
    r.indices.push_back(std::stoull(tok[1]));
    r.distances.push_back(parse_cell(tok[2]));
  }
  r.n_queries = queries.empty() ? 0 : queries.back() + 1;
  r.k = r.n_queries == 0 ? 0 : queries.size() / r.n_queries;
  return r;
}

}  // namespace sparsedist::io
