#pragma once

// Independent reference implementations used only by tests. They recompute
// the quantities under test from first principles with different algorithms
// than the library (dense matrices, Floyd-Warshall, exhaustive search).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "subcity/centrality.hpp"
#include "subcity/graph.hpp"
#include "subcity/rng.hpp"

namespace oracle {

using subcity::Graph;
using subcity::NodeIndex;
using subcity::ODRecord;
using subcity::SplitMix64;

// Quality of a labeling straight from the dense-matrix definition:
//   undirected: Q = sum_ij delta(c_i,c_j) [A_ij/(2m) - g k_i k_j/(2m)^2]
//   directed:   Q = sum_ij delta(c_i,c_j) [A_ij/m - g kout_i kin_j/m^2]
// with A_ii twice the self-loop weight in the undirected case.
inline double dense_modularity(const Graph& g, const std::vector<std::uint32_t>& labels,
                               double gamma) {
  const std::size_t n = g.node_count();
  std::vector<double> a(n * n, 0.0);
  for (NodeIndex i = 0; i < n; ++i) {
    a[i * n + i] += (g.directed() ? 1.0 : 2.0) * g.self_loop(i);
    for (const auto& nb : g.out_neighbors(i)) a[i * n + nb.index] += nb.weight;
  }
  const double m = g.total_weight();
  double q = 0.0;
  if (g.directed()) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (labels[i] != labels[j]) continue;
        q += a[i * n + j] / m - gamma * g.out_strength(i) * g.in_strength(j) / (m * m);
      }
  } else {
    const double two_m = 2.0 * m;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (labels[i] != labels[j]) continue;
        q += a[i * n + j] / two_m - gamma * g.strength(i) * g.strength(j) / (two_m * two_m);
      }
  }
  return q;
}

// Enumerates every set partition of {0..n-1} as restricted growth strings.
inline void for_each_partition(std::size_t n,
                               const std::function<void(const std::vector<std::uint32_t>&)>& fn) {
  std::vector<std::uint32_t> labels(n, 0);
  std::function<void(std::size_t, std::uint32_t)> rec = [&](std::size_t i, std::uint32_t used) {
    if (i == n) {
      fn(labels);
      return;
    }
    for (std::uint32_t v = 0; v <= used; ++v) {
      labels[i] = v;
      rec(i + 1, v == used ? used + 1 : used);
    }
  };
  rec(0, 0);
}

// Optimal quality over all partitions (exhaustive; n <= 10).
inline double best_modularity(const Graph& g, double gamma) {
  double best = -std::numeric_limits<double>::infinity();
  for_each_partition(g.node_count(), [&](const std::vector<std::uint32_t>& labels) {
    best = std::max(best, dense_modularity(g, labels, gamma));
  });
  return best;
}

// Betweenness from scratch: Floyd-Warshall distances, then path counts by
// a forward DP, then the pair-sum definition
//   bc(v) = sum_{s != v != t} sigma_st(v) / sigma_st
// with sigma_st(v) = sigma_sv * sigma_vt when v lies on a shortest path.
// No backward dependency accumulation is involved.
inline std::vector<double> brute_betweenness(const Graph& g, subcity::EdgeLength length) {
  const std::size_t n = g.node_count();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n * n, kInf);
  for (std::size_t i = 0; i < n; ++i) dist[i * n + i] = 0.0;
  for (NodeIndex i = 0; i < n; ++i)
    for (const auto& nb : g.out_neighbors(i)) {
      const double len = length == subcity::EdgeLength::unit ? 1.0 : 1.0 / nb.weight;
      dist[i * n + nb.index] = std::min(dist[i * n + nb.index], len);
    }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (dist[i * n + k] + dist[k * n + j] < dist[i * n + j])
          dist[i * n + j] = dist[i * n + k] + dist[k * n + j];

  // sigma[s][v]: process v by increasing dist from s, relax outgoing edges.
  std::vector<double> sigma(n * n, 0.0);
  for (std::size_t s = 0; s < n; ++s) {
    sigma[s * n + s] = 1.0;
    std::vector<std::size_t> order;
    for (std::size_t v = 0; v < n; ++v)
      if (dist[s * n + v] < kInf) order.push_back(v);
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return dist[s * n + x] < dist[s * n + y]; });
    for (const std::size_t v : order)
      for (const auto& nb : g.out_neighbors(v)) {
        const double len = length == subcity::EdgeLength::unit ? 1.0 : 1.0 / nb.weight;
        if (dist[s * n + v] + len == dist[s * n + nb.index])
          sigma[s * n + nb.index] += sigma[s * n + v];
      }
  }

  std::vector<double> bc(n, 0.0);
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < n; ++t) {
      if (s == t || sigma[s * n + t] == 0.0) continue;
      for (std::size_t v = 0; v < n; ++v) {
        if (v == s || v == t) continue;
        if (dist[s * n + v] + dist[v * n + t] == dist[s * n + t])
          bc[v] += sigma[s * n + v] * sigma[v * n + t] / sigma[s * n + t];
      }
    }
  const double denom = static_cast<double>(n - 1) * static_cast<double>(n - 2);
  for (auto& x : bc) x /= denom;
  return bc;
}

// Maximum one-to-one matching overlap by brute force over row permutations
// (pads the smaller side; k <= 8).
inline std::int64_t brute_matching_overlap(const std::vector<std::vector<std::int64_t>>& counts) {
  const std::size_t rows = counts.size();
  const std::size_t cols = counts.empty() ? 0 : counts.front().size();
  const std::size_t k = std::max(rows, cols);
  std::vector<std::size_t> perm(k);
  for (std::size_t i = 0; i < k; ++i) perm[i] = i;
  std::int64_t best = 0;
  do {
    std::int64_t total = 0;
    for (std::size_t i = 0; i < rows; ++i)
      if (perm[i] < cols) total += counts[i][perm[i]];
    best = std::max(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

struct RandomGraphSpec {
  std::size_t min_nodes = 3;
  std::size_t max_nodes = 8;
  double edge_prob = 0.4;
  bool allow_self_loops = true;
  bool directed = false;
  bool weighted = true;
};

// Random record list with power-of-two counts so inverse-weight shortest
// path lengths are dyadic and float comparisons stay exact.
inline std::vector<ODRecord> random_records(SplitMix64& rng, const RandomGraphSpec& spec,
                                            std::size_t& n_out) {
  const std::size_t n =
      spec.min_nodes + static_cast<std::size_t>(rng.below(spec.max_nodes - spec.min_nodes + 1));
  n_out = n;
  std::vector<ODRecord> records;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v) {
      if (u == v && !spec.allow_self_loops) continue;
      if (!spec.directed && v < u) continue;
      if (rng.uniform01() >= spec.edge_prob) continue;
      const std::int64_t count = std::int64_t{1} << rng.below(4);
      records.push_back({static_cast<subcity::NodeId>(u), static_cast<subcity::NodeId>(v), count});
    }
  return records;
}

}  // namespace oracle
