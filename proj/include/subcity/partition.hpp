#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "subcity/errors.hpp"
#include "subcity/graph.hpp"

namespace subcity {

// Node -> community assignment with per-community bookkeeping totals.
//
// internal_weight uses the modularity double-sum convention: for undirected
// graphs each intra-community edge contributes twice its weight (both
// orientations) and a self-loop contributes twice its weight; for directed
// graphs every intra-community arc (self-loops included) contributes once.
struct Partition {
  std::vector<std::uint32_t> assignment;  // per node index, dense 0-based
  std::uint32_t community_count = 0;

  std::vector<double> internal_weight;     // in_c
  std::vector<double> strength_total;      // undirected d_c
  std::vector<double> out_strength_total;  // directed
  std::vector<double> in_strength_total;

  double quality = 0.0;  // maintained by louvain; 0 otherwise

  std::size_t size() const { return assignment.size(); }
};

// Renumbers labels to dense 0..k-1 in order of first occurrence.
inline std::uint32_t renumber_first_occurrence(std::vector<std::uint32_t>& labels) {
  std::vector<std::uint32_t> remap;
  std::uint32_t next = 0;
  for (auto label : labels) {
    if (label >= remap.size()) remap.resize(label + 1, UINT32_MAX);
    if (remap[label] == UINT32_MAX) remap[label] = next++;
  }
  for (auto& label : labels) label = remap[label];
  return next;
}

inline void recompute_totals(const Graph& g, Partition& p) {
  const std::uint32_t k = p.community_count;
  p.internal_weight.assign(k, 0.0);
  if (g.directed()) {
    p.out_strength_total.assign(k, 0.0);
    p.in_strength_total.assign(k, 0.0);
    p.strength_total.clear();
  } else {
    p.strength_total.assign(k, 0.0);
    p.out_strength_total.clear();
    p.in_strength_total.clear();
  }
  for (NodeIndex i = 0; i < g.node_count(); ++i) {
    const std::uint32_t c = p.assignment[i];
    if (g.directed()) {
      p.out_strength_total[c] += g.out_strength(i);
      p.in_strength_total[c] += g.in_strength(i);
      p.internal_weight[c] += g.self_loop(i);
    } else {
      p.strength_total[c] += g.strength(i);
      p.internal_weight[c] += 2.0 * g.self_loop(i);
    }
    for (const auto& nb : g.out_neighbors(i))
      if (p.assignment[nb.index] == c) p.internal_weight[c] += nb.weight;
  }
}

// Builds a validated partition from raw labels (renumbered to dense form).
inline Partition make_partition(const Graph& g, std::vector<std::uint32_t> labels) {
  if (labels.size() != g.node_count())
    throw input_error("partition covers " + std::to_string(labels.size()) + " nodes, graph has " +
                      std::to_string(g.node_count()));
  Partition p;
  p.assignment = std::move(labels);
  p.community_count = renumber_first_occurrence(p.assignment);
  recompute_totals(g, p);
  return p;
}

inline Partition singleton_partition(const Graph& g) {
  std::vector<std::uint32_t> labels(g.node_count());
  for (std::uint32_t i = 0; i < labels.size(); ++i) labels[i] = i;
  return make_partition(g, std::move(labels));
}

inline Partition whole_graph_partition(const Graph& g) {
  return make_partition(g, std::vector<std::uint32_t>(g.node_count(), 0));
}

// Aligns a labeled node list (e.g. a partition CSV or reference labels) to a
// graph. Every graph node must be labeled.
inline Partition partition_from_labels(const Graph& g, std::span<const NodeId> ids,
                                       std::span<const std::string> labels) {
  if (ids.size() != labels.size())
    throw input_error("partition_from_labels: id/label count mismatch");
  std::map<NodeId, const std::string*> by_id;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!by_id.emplace(ids[i], &labels[i]).second)
      throw input_error("duplicate node id " + std::to_string(ids[i]) + " in partition labels");
  }
  std::map<std::string, std::uint32_t> label_index;
  std::vector<std::uint32_t> assignment(g.node_count());
  for (NodeIndex i = 0; i < g.node_count(); ++i) {
    auto it = by_id.find(g.node_id(i));
    if (it == by_id.end())
      throw input_error("node " + std::to_string(g.node_id(i)) + " has no community label");
    auto [pos, inserted] =
        label_index.emplace(*it->second, static_cast<std::uint32_t>(label_index.size()));
    assignment[i] = pos->second;
  }
  return make_partition(g, std::move(assignment));
}

}  // namespace subcity
