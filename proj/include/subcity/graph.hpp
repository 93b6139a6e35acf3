#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "subcity/errors.hpp"

namespace subcity {

// External tower identifier. Non-negative, stable across all derived tables.
using NodeId = std::int64_t;

// Dense position of a node inside one Graph (nodes are sorted by id).
using NodeIndex = std::uint32_t;

// One home -> work commuter observation; count is the number of commuters.
struct ODRecord {
  NodeId source = 0;
  NodeId target = 0;
  std::int64_t count = 1;
};

struct Neighbor {
  NodeIndex index;
  double weight;
};

// Immutable weighted graph aggregated from origin-destination records.
//
// Storage conventions:
//  - undirected: every edge appears in both endpoints' neighbor lists;
//  - directed: separate out/in lists;
//  - self-loops are kept out of the neighbor lists and stored per node.
//    A self-loop adds its weight to both in- and out-strength, and twice
//    to the undirected degree. total_weight() (m) counts every distinct
//    stored edge once, self-loops included.
class Graph {
 public:
  Graph() = default;

  bool directed() const { return directed_; }
  bool weighted() const { return weighted_; }
  std::size_t node_count() const { return ids_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  double total_weight() const { return total_weight_; }

  NodeId node_id(NodeIndex i) const { return ids_[i]; }
  const std::vector<NodeId>& node_ids() const { return ids_; }

  std::optional<NodeIndex> index_of(NodeId id) const {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it == ids_.end() || *it != id) return std::nullopt;
    return static_cast<NodeIndex>(it - ids_.begin());
  }

  // Undirected graphs: all neighbors. Directed graphs: out-neighbors.
  std::span<const Neighbor> out_neighbors(NodeIndex i) const {
    return {out_adj_[i].data(), out_adj_[i].size()};
  }
  std::span<const Neighbor> in_neighbors(NodeIndex i) const {
    const auto& lists = directed_ ? in_adj_ : out_adj_;
    return {lists[i].data(), lists[i].size()};
  }

  double self_loop(NodeIndex i) const { return self_loop_[i]; }

  // k_i for undirected graphs (self-loop counted twice).
  double strength(NodeIndex i) const { return out_strength_[i]; }
  double out_strength(NodeIndex i) const { return out_strength_[i]; }
  double in_strength(NodeIndex i) const { return directed_ ? in_strength_[i] : out_strength_[i]; }

  const std::vector<double>& strengths() const { return out_strength_; }
  const std::vector<double>& out_strengths() const { return out_strength_; }
  const std::vector<double>& in_strengths() const { return directed_ ? in_strength_ : out_strength_; }

  friend Graph build_graph(std::span<const ODRecord> records, bool directed, bool weighted,
                           std::span<const NodeId> extra_nodes);

 private:
  bool directed_ = false;
  bool weighted_ = true;
  std::vector<NodeId> ids_;  // ascending
  std::vector<std::vector<Neighbor>> out_adj_;
  std::vector<std::vector<Neighbor>> in_adj_;  // directed only
  std::vector<double> self_loop_;
  std::vector<double> out_strength_;
  std::vector<double> in_strength_;
  std::size_t edge_count_ = 0;
  double total_weight_ = 0.0;
};

// Aggregates records into a graph. Parallel records sum their counts; for
// undirected graphs (a,b) and (b,a) collapse into one edge. weighted=false
// collapses every aggregated weight to 1. extra_nodes registers isolated
// nodes that appear in no record (e.g. towers listed only in a node file).
inline Graph build_graph(std::span<const ODRecord> records, bool directed, bool weighted,
                         std::span<const NodeId> extra_nodes = {}) {
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records[i];
    if (rec.source < 0 || rec.target < 0)
      throw input_error("record " + std::to_string(i) + ": node ids must be non-negative (got " +
                        std::to_string(rec.source) + " -> " + std::to_string(rec.target) + ")");
    if (rec.count < 1)
      throw input_error("record " + std::to_string(i) + ": count must be >= 1 (got " +
                        std::to_string(rec.count) + ")");
  }

  Graph g;
  g.directed_ = directed;
  g.weighted_ = weighted;

  g.ids_.reserve(records.size() * 2 + extra_nodes.size());
  for (const auto& rec : records) {
    g.ids_.push_back(rec.source);
    g.ids_.push_back(rec.target);
  }
  for (NodeId id : extra_nodes) {
    if (id < 0) throw input_error("node ids must be non-negative (got " + std::to_string(id) + ")");
    g.ids_.push_back(id);
  }
  std::sort(g.ids_.begin(), g.ids_.end());
  g.ids_.erase(std::unique(g.ids_.begin(), g.ids_.end()), g.ids_.end());

  const std::size_t n = g.ids_.size();
  // std::map keys give a deterministic edge order regardless of record order.
  std::map<std::pair<NodeIndex, NodeIndex>, double> aggregated;
  for (const auto& rec : records) {
    NodeIndex s = *g.index_of(rec.source);
    NodeIndex t = *g.index_of(rec.target);
    if (!directed && s > t) std::swap(s, t);
    aggregated[{s, t}] += static_cast<double>(rec.count);
  }
  if (!weighted)
    for (auto& [key, w] : aggregated) w = 1.0;

  g.out_adj_.assign(n, {});
  if (directed) g.in_adj_.assign(n, {});
  g.self_loop_.assign(n, 0.0);
  g.out_strength_.assign(n, 0.0);
  if (directed) g.in_strength_.assign(n, 0.0);

  for (const auto& [key, w] : aggregated) {
    const auto [s, t] = key;
    g.total_weight_ += w;
    ++g.edge_count_;
    if (s == t) {
      g.self_loop_[s] += w;
      if (directed) {
        g.out_strength_[s] += w;
        g.in_strength_[s] += w;
      } else {
        g.out_strength_[s] += 2.0 * w;
      }
      continue;
    }
    g.out_adj_[s].push_back({t, w});
    if (directed) {
      g.in_adj_[t].push_back({s, w});
      g.out_strength_[s] += w;
      g.in_strength_[t] += w;
    } else {
      g.out_adj_[t].push_back({s, w});
      g.out_strength_[s] += w;
      g.out_strength_[t] += w;
    }
  }
  return g;
}

}  // namespace subcity
