#pragma once

#include <cmath>
#include <map>
#include <span>
#include <string>

#include <json.hpp>

#include "subcity/csv.hpp"
#include "subcity/errors.hpp"
#include "subcity/graph.hpp"
#include "subcity/io.hpp"
#include "subcity/partition.hpp"

namespace subcity {

namespace exportdetail {

inline const NodeMeta& meta_for(const std::map<NodeId, const NodeMeta*>& by_id, NodeId id) {
  auto it = by_id.find(id);
  if (it == by_id.end())
    throw input_error("export: no metadata for node " + std::to_string(id));
  return *it->second;
}

// Well-spaced hues by golden-angle rotation; HSV string for DOT fillcolor.
inline std::string community_color(std::uint32_t c) {
  const double hue = std::fmod(0.61803398874989485 * static_cast<double>(c), 1.0);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f 0.600 0.850", hue);
  return buf;
}

}  // namespace exportdetail

// GeoJSON FeatureCollection of Point features, one per node in ascending id
// order. Optional centrality score spans are indexed like the graph.
inline void write_geojson(const Graph& g, const Partition& p, std::span<const NodeMeta> metas,
                          const std::string& path, std::span<const double> betweenness = {},
                          std::span<const double> eigenvector = {}) {
  if (p.assignment.size() != g.node_count())
    throw input_error("export: partition does not cover the graph");
  if (!betweenness.empty() && betweenness.size() != g.node_count())
    throw input_error("export: betweenness scores do not cover the graph");
  if (!eigenvector.empty() && eigenvector.size() != g.node_count())
    throw input_error("export: eigenvector scores do not cover the graph");
  std::map<NodeId, const NodeMeta*> by_id;
  for (const auto& m : metas) by_id[m.id] = &m;

  nlohmann::ordered_json features = nlohmann::ordered_json::array();
  for (NodeIndex i = 0; i < g.node_count(); ++i) {
    const NodeId id = g.node_id(i);
    const NodeMeta& meta = exportdetail::meta_for(by_id, id);
    if (!meta.geo)
      throw input_error("export: node " + std::to_string(id) +
                        " has no geographic coordinates (run convert first)");
    nlohmann::ordered_json props;
    props["id"] = id;
    props["community"] = p.assignment[i];
    if (!betweenness.empty()) props["betweenness"] = betweenness[i];
    if (!eigenvector.empty()) props["eigenvector"] = eigenvector[i];
    features.push_back({{"type", "Feature"},
                        {"geometry",
                         {{"type", "Point"},
                          {"coordinates", {meta.geo->lon, meta.geo->lat}}}},
                        {"properties", props}});
  }
  nlohmann::ordered_json doc{{"type", "FeatureCollection"}, {"features", features}};
  auto out = csv::open_output(path);
  out << doc.dump(2) << '\n';
}

// Graphviz DOT: nodes filled by community hue, edges carry their weight.
// Nodes are emitted in ascending id order, edges in adjacency order.
inline void write_dot(const Graph& g, const Partition& p, const std::string& path) {
  if (p.assignment.size() != g.node_count())
    throw input_error("export: partition does not cover the graph");
  auto out = csv::open_output(path);
  out << (g.directed() ? "digraph" : "graph") << " subcity {\n";
  out << "  node [style=filled];\n";
  for (NodeIndex i = 0; i < g.node_count(); ++i) {
    out << "  \"" << g.node_id(i) << "\" [community=" << p.assignment[i] << ", fillcolor=\""
        << exportdetail::community_color(p.assignment[i]) << "\"];\n";
  }
  const char* arrow = g.directed() ? " -> " : " -- ";
  for (NodeIndex i = 0; i < g.node_count(); ++i) {
    if (g.self_loop(i) > 0.0)
      out << "  \"" << g.node_id(i) << "\"" << arrow << "\"" << g.node_id(i)
          << "\" [weight=" << format_double(g.self_loop(i)) << "];\n";
    for (const auto& nb : g.out_neighbors(i)) {
      if (!g.directed() && nb.index < i) continue;  // one line per undirected edge
      out << "  \"" << g.node_id(i) << "\"" << arrow << "\"" << g.node_id(nb.index)
          << "\" [weight=" << format_double(nb.weight) << "];\n";
    }
  }
  out << "}\n";
}

}  // namespace subcity
