#pragma once

#include <algorithm>
#include <iostream>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "subcity/csv.hpp"
#include "subcity/errors.hpp"
#include "subcity/geo.hpp"
#include "subcity/graph.hpp"

namespace subcity {

// Per-tower metadata: UTM and/or geographic coordinates plus an optional
// reference community label.
struct NodeMeta {
  NodeId id = 0;
  std::optional<double> easting;   // meters
  std::optional<double> northing;  // meters
  std::optional<GeoPoint> geo;
  std::string ref_community;  // empty when absent
};

namespace iodetail {

inline void warn_unknown_columns(const csv::Table& table, const std::set<std::size_t>& used) {
  for (std::size_t c = 0; c < table.header.size(); ++c)
    if (!used.contains(c))
      std::cerr << "warning: " << table.path << ": ignoring unrecognized column '"
                << table.header[c] << "'\n";
}

}  // namespace iodetail

// Reads an origin-destination edge table. Accepts the raw header pair
// (home_id, work_id) as well as the renamed (Source, Target); the optional
// third column count/weight defaults to 1. Header matching is
// case-insensitive; unknown columns are ignored with a warning.
inline std::vector<ODRecord> read_edges(const std::string& path) {
  auto table = csv::read_table(path);
  auto src = table.column({"home_id", "source"});
  auto dst = table.column({"work_id", "target"});
  if (!src || !dst)
    throw input_error(path + ": unrecognized schema: expected columns (home_id, work_id) or "
                             "(Source, Target)");
  auto cnt = table.column({"count", "weight"});
  iodetail::warn_unknown_columns(table, cnt ? std::set<std::size_t>{*src, *dst, *cnt}
                                            : std::set<std::size_t>{*src, *dst});

  std::vector<ODRecord> records;
  records.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::size_t line = table.line_of(r);
    ODRecord rec;
    rec.source = csv::parse_int(row[*src], path, line, "source id");
    rec.target = csv::parse_int(row[*dst], path, line, "target id");
    if (rec.source < 0 || rec.target < 0)
      throw input_error(path + ": line " + std::to_string(line) + ": node ids must be non-negative");
    if (cnt) {
      rec.count = csv::parse_int(row[*cnt], path, line, "count");
      if (rec.count < 1)
        throw input_error(path + ": line " + std::to_string(line) + ": count must be >= 1 (got " +
                          std::to_string(rec.count) + ")");
    }
    records.push_back(rec);
  }
  return records;
}

// Reads node metadata: column `id` plus (easting, northing) and/or
// (lat, lon), and an optional community label column.
inline std::vector<NodeMeta> read_nodes(const std::string& path) {
  auto table = csv::read_table(path);
  auto id = table.column({"id", "node_id", "tower_id"});
  if (!id) throw input_error(path + ": unrecognized schema: missing node id column");
  auto east = table.column({"easting", "x"});
  auto north = table.column({"northing", "y"});
  auto lat = table.column({"lat", "latitude"});
  auto lon = table.column({"lon", "longitude", "lng"});
  auto comm = table.column({"community", "ref_community", "label", "modularity_class"});
  if (static_cast<bool>(east) != static_cast<bool>(north))
    throw input_error(path + ": easting/northing columns must come as a pair");
  if (static_cast<bool>(lat) != static_cast<bool>(lon))
    throw input_error(path + ": lat/lon columns must come as a pair");

  std::set<std::size_t> used{*id};
  for (auto c : {east, north, lat, lon, comm})
    if (c) used.insert(*c);
  iodetail::warn_unknown_columns(table, used);

  std::vector<NodeMeta> metas;
  std::set<NodeId> seen;
  metas.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::size_t line = table.line_of(r);
    NodeMeta meta;
    meta.id = csv::parse_int(row[*id], path, line, "node id");
    if (meta.id < 0)
      throw input_error(path + ": line " + std::to_string(line) + ": node ids must be non-negative");
    if (!seen.insert(meta.id).second)
      throw input_error(path + ": duplicate node id " + std::to_string(meta.id) + " at line " +
                        std::to_string(line));
    if (east && !row[*east].empty() && !row[*north].empty()) {
      meta.easting = csv::parse_double(row[*east], path, line, "easting");
      meta.northing = csv::parse_double(row[*north], path, line, "northing");
    }
    if (lat && !row[*lat].empty() && !row[*lon].empty()) {
      GeoPoint p{csv::parse_double(row[*lat], path, line, "lat"),
                 csv::parse_double(row[*lon], path, line, "lon")};
      try {
        validate(p);
      } catch (const input_error& e) {
        throw input_error(path + ": line " + std::to_string(line) + ": " + e.what());
      }
      meta.geo = p;
    }
    if (comm) meta.ref_community = row[*comm];
    metas.push_back(std::move(meta));
  }
  return metas;
}

// Writes `id,lat,lon,community` sorted by ascending id, full float precision.
inline void write_nodes_with_geo(std::span<const NodeMeta> metas, const std::string& path) {
  std::vector<NodeMeta> sorted(metas.begin(), metas.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const NodeMeta& a, const NodeMeta& b) { return a.id < b.id; });
  auto out = csv::open_output(path);
  out << "id,lat,lon,community\n";
  for (const auto& meta : sorted) {
    if (!meta.geo)
      throw input_error("node " + std::to_string(meta.id) + " has no lat/lon; run `convert` first");
    out << meta.id << ',' << format_double(meta.geo->lat) << ',' << format_double(meta.geo->lon)
        << ',' << meta.ref_community << '\n';
  }
}

// A partition file: `id,community` with arbitrary label strings (letters in
// reference files, integers in detect output).
struct LabeledNodes {
  std::vector<NodeId> ids;
  std::vector<std::string> labels;
};

inline LabeledNodes read_partition_labels(const std::string& path) {
  auto table = csv::read_table(path);
  auto id = table.column({"id", "node_id"});
  auto comm = table.column({"community", "modularity_class", "label", "comm"});
  if (!id || !comm)
    throw input_error(path + ": unrecognized schema: expected columns (id, community)");
  LabeledNodes out;
  std::set<NodeId> seen;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const std::size_t line = table.line_of(r);
    NodeId node = csv::parse_int(table.rows[r][*id], path, line, "node id");
    if (!seen.insert(node).second)
      throw input_error(path + ": duplicate node id " + std::to_string(node) + " at line " +
                        std::to_string(line));
    if (table.rows[r][*comm].empty())
      throw input_error(path + ": line " + std::to_string(line) + ": empty community label");
    out.ids.push_back(node);
    out.labels.push_back(table.rows[r][*comm]);
  }
  return out;
}

// Per-node score files emitted by the centrality subcommand: `id,score`
// (any numeric second column name is accepted on read).
struct NodeScores {
  std::vector<NodeId> ids;
  std::vector<double> values;
};

inline NodeScores read_scores(const std::string& path) {
  auto table = csv::read_table(path);
  auto id = table.column({"id", "node_id"});
  if (!id || table.header.size() < 2)
    throw input_error(path + ": unrecognized schema: expected columns (id, score)");
  std::size_t score = (*id == 0) ? 1 : 0;
  NodeScores out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const std::size_t line = table.line_of(r);
    out.ids.push_back(csv::parse_int(table.rows[r][*id], path, line, "node id"));
    out.values.push_back(csv::parse_double(table.rows[r][score], path, line, "score"));
  }
  return out;
}

inline std::vector<GeoPoint> geo_points(std::span<const NodeMeta> metas) {
  std::vector<GeoPoint> points;
  points.reserve(metas.size());
  for (const auto& meta : metas) {
    if (!meta.geo)
      throw input_error("node " + std::to_string(meta.id) +
                        " has no lat/lon coordinates; run `convert` first");
    points.push_back(*meta.geo);
  }
  return points;
}

inline GeoTable distances_to_center(std::span<const NodeMeta> metas, bool spherical = false) {
  std::vector<NodeId> ids;
  ids.reserve(metas.size());
  for (const auto& meta : metas) ids.push_back(meta.id);
  return distances_to_center(ids, geo_points(metas), spherical);
}

}  // namespace subcity
