#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "sparsedist/distance_output.hpp"
#include "sparsedist/knn.hpp"

namespace sparsedist::io {

enum class OutputFormat { Csv, Json };

OutputFormat parse_format(std::string_view name);
/// ".json" -> Json, anything else -> Csv.
OutputFormat format_for(const std::filesystem::path& path);

/// "%.17g" text; reads back to the same double.
std::string format_double(double v);

/// CSV: one line per row of the matrix, optional "j0,j1,..." header.
/// JSON: {"rows": m, "cols": n, "data": [[...], ...]}. Non-finite values
/// are written as the strings "inf", "-inf" and "nan" in JSON.
void write_distances(const DistanceOutput& d, std::ostream& out, OutputFormat fmt, bool header = false);

/// CSV: "query_id,neighbor_id,distance" rows, k per query.
/// JSON: one {"query", "neighbors", "distances"} record per query.
void write_neighbors(const NeighborResult& r, std::ostream& out, OutputFormat fmt, bool header = false);

void write_output(const DistanceOutput& d, const std::filesystem::path& path, OutputFormat fmt, bool header = false);
void write_output(const NeighborResult& r, const std::filesystem::path& path, OutputFormat fmt, bool header = false);

DistanceOutput read_distances(std::istream& in, OutputFormat fmt, bool header = false);
NeighborResult read_neighbors(std::istream& in, OutputFormat fmt, bool header = false);

}  // namespace sparsedist::io
