#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <queue>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "subcity/errors.hpp"
#include "subcity/graph.hpp"
#include "subcity/partition.hpp"

namespace subcity {

enum class EdgeLength { unit, inverse_weight };

struct CentralityResult {
  std::string measure;
  std::vector<double> scores;     // indexed like the graph's nodes
  std::string normalization;      // human-readable descriptor
  double eigenvalue = 0.0;        // Rayleigh estimate (eigenvector only)
  std::uint32_t iterations = 0;   // (eigenvector only)
};

namespace centdetail {

// Work is split into fixed chunks of sources (or rows) regardless of the
// thread count, and chunk results are combined in chunk order, so output is
// bit-identical no matter how many workers run or how they are scheduled.
constexpr std::size_t kChunk = 32;

template <typename Body>
inline void run_chunks(std::size_t chunks, unsigned threads, Body&& body) {
  if (threads <= 1 || chunks <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) body(c);
    return;
  }
  std::atomic<std::size_t> cursor{0};
  auto drain = [&] {
    for (;;) {
      const std::size_t c = cursor.fetch_add(1);
      if (c >= chunks) break;
      body(c);
    }
  };
  const unsigned spawn = static_cast<unsigned>(
      std::min<std::size_t>(threads, chunks) - 1);
  std::vector<std::thread> pool;
  pool.reserve(spawn);
  for (unsigned i = 0; i < spawn; ++i) pool.emplace_back(drain);
  drain();
  for (auto& th : pool) th.join();
}

struct BrandesScratch {
  std::vector<double> sigma, delta, dist;
  std::vector<std::vector<std::uint32_t>> pred;
  std::vector<std::uint32_t> order;  // nodes in nondecreasing settle order

  explicit BrandesScratch(std::size_t n) : sigma(n), delta(n), dist(n), pred(n) {
    order.reserve(n);
  }
};

// Single-source shortest-path DAG plus the dependency accumulation; adds
// this source's contribution to `acc`.
inline void accumulate_source(const Graph& g, EdgeLength length, std::uint32_t s,
                              BrandesScratch& sc, std::vector<double>& acc) {
  const std::size_t n = g.node_count();
  std::fill(sc.sigma.begin(), sc.sigma.end(), 0.0);
  std::fill(sc.delta.begin(), sc.delta.end(), 0.0);
  for (auto& p : sc.pred) p.clear();
  sc.order.clear();
  sc.sigma[s] = 1.0;

  if (length == EdgeLength::unit) {
    std::fill(sc.dist.begin(), sc.dist.end(), -1.0);
    sc.dist[s] = 0.0;
    std::vector<std::uint32_t> queue{s};
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const std::uint32_t v = queue[head];
      sc.order.push_back(v);
      for (const auto& nb : g.out_neighbors(v)) {
        if (sc.dist[nb.index] < 0.0) {
          sc.dist[nb.index] = sc.dist[v] + 1.0;
          queue.push_back(nb.index);
        }
        if (sc.dist[nb.index] == sc.dist[v] + 1.0) {
          sc.sigma[nb.index] += sc.sigma[v];
          sc.pred[nb.index].push_back(v);
        }
      }
    }
  } else {
    constexpr double kUnreached = std::numeric_limits<double>::infinity();
    std::fill(sc.dist.begin(), sc.dist.end(), kUnreached);
    sc.dist[s] = 0.0;
    using Entry = std::pair<double, std::uint32_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    heap.push({0.0, s});
    std::vector<char> settled(n, 0);
    while (!heap.empty()) {
      const auto [d, v] = heap.top();
      heap.pop();
      if (settled[v]) continue;
      settled[v] = 1;
      sc.order.push_back(v);
      for (const auto& nb : g.out_neighbors(v)) {
        const double nd = d + 1.0 / nb.weight;
        if (nd < sc.dist[nb.index]) {
          sc.dist[nb.index] = nd;
          sc.sigma[nb.index] = sc.sigma[v];
          sc.pred[nb.index].assign(1, v);
          heap.push({nd, nb.index});
        } else if (nd == sc.dist[nb.index]) {
          sc.sigma[nb.index] += sc.sigma[v];
          sc.pred[nb.index].push_back(v);
        }
      }
    }
  }

  for (auto it = sc.order.rbegin(); it != sc.order.rend(); ++it) {
    const std::uint32_t w = *it;
    for (const std::uint32_t v : sc.pred[w])
      sc.delta[v] += sc.sigma[v] / sc.sigma[w] * (1.0 + sc.delta[w]);
    if (w != s) acc[w] += sc.delta[w];
  }
}

}  // namespace centdetail

// Brandes' betweenness. Unit lengths run a BFS per source; inverse_weight
// runs Dijkstra with length 1/w so heavy flows act as short distances.
// Endpoints are excluded and self-loops never lie on a shortest path.
// `threads` = 0 uses the hardware concurrency; any value yields identical
// output (sources are processed in fixed chunks reduced in fixed order).
inline CentralityResult betweenness(const Graph& g, EdgeLength length = EdgeLength::unit,
                                    unsigned threads = 0) {
  const std::size_t n = g.node_count();
  if (n == 0) throw input_error("betweenness requires a non-empty graph");
  CentralityResult result;
  result.measure = "betweenness";
  result.scores.assign(n, 0.0);
  if (n < 3) {
    result.normalization = "undefined for n < 3 (normalization divides by (n-1)(n-2)); all scores set to 0";
    return result;
  }

  using namespace centdetail;
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::vector<double>> partial(chunks);
  run_chunks(chunks, threads, [&](std::size_t chunk) {
    BrandesScratch sc(n);
    auto& acc = partial[chunk];
    acc.assign(n, 0.0);
    const std::uint32_t lo = static_cast<std::uint32_t>(chunk * kChunk);
    const std::uint32_t hi = static_cast<std::uint32_t>(std::min(n, chunk * kChunk + kChunk));
    for (std::uint32_t s = lo; s < hi; ++s) accumulate_source(g, length, s, sc, acc);
  });
  for (const auto& acc : partial)
    for (std::size_t i = 0; i < n; ++i) result.scores[i] += acc[i];

  // The undirected sweep visits each unordered pair from both ends, so the
  // same divisor implements the pair count over (n-1)(n-2)/2.
  const double denom = static_cast<double>(n - 1) * static_cast<double>(n - 2);
  for (auto& x : result.scores) x /= denom;
  result.normalization = g.directed() ? "pair count divided by (n-1)(n-2), endpoints excluded"
                                      : "pair count divided by (n-1)(n-2)/2, endpoints excluded";
  return result;
}

// Power iteration on the weighted adjacency. Iterating with A + I keeps the
// spectrum positive so bipartite structures (stars, even cycles) cannot
// oscillate; the fixed point is unchanged. Directed graphs score a node by
// its in-edges. The optional teleport mixes in a uniform 0.15 restart for
// graphs whose terminal components would otherwise absorb all mass; that
// variant is a pragmatic fallback, not the default measure.
// `threads` > 1 splits the matrix-vector product by rows; each row is
// computed whole by one worker, so any thread count gives identical output.
inline CentralityResult eigenvector(const Graph& g, double tol = 1e-10,
                                    std::uint32_t max_iter = 10000, bool teleport = false,
                                    unsigned threads = 1) {
  const std::size_t n = g.node_count();
  if (n == 0) throw input_error("eigenvector centrality requires a non-empty graph");
  if (g.total_weight() <= 0.0)
    throw input_error("eigenvector centrality is undefined on a graph with no edges");
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());

  // x <- A x with incoming orientation: x_i += A_ji x_j.
  const std::size_t row_chunks = (n + centdetail::kChunk - 1) / centdetail::kChunk;
  auto apply = [&](const std::vector<double>& x, std::vector<double>& out) {
    centdetail::run_chunks(row_chunks, threads, [&](std::size_t chunk) {
      const std::size_t lo = chunk * centdetail::kChunk;
      const std::size_t hi = std::min(n, lo + centdetail::kChunk);
      for (std::size_t i = lo; i < hi; ++i) {
        const auto nbs = g.directed() ? g.in_neighbors(static_cast<std::uint32_t>(i))
                                      : g.out_neighbors(static_cast<std::uint32_t>(i));
        double sum = 0.0;
        for (const auto& nb : nbs) sum += nb.weight * x[nb.index];
        out[i] = sum + g.self_loop(static_cast<std::uint32_t>(i)) * x[i];
      }
    });
  };

  std::vector<double> x(n, 1.0 / static_cast<double>(n)), next(n);
  double norm = std::sqrt(1.0 / static_cast<double>(n));
  for (auto& v : x) v /= norm;

  const double restart = teleport ? 0.15 : 0.0;
  bool converged = false;
  std::uint32_t used = 0;
  for (std::uint32_t iter = 1; iter <= max_iter; ++iter) {
    apply(x, next);
    double mass = 0.0;
    if (restart > 0.0) {
      for (const double v : x) mass += v;
      mass /= static_cast<double>(n);
    }
    for (std::uint32_t i = 0; i < n; ++i)
      next[i] = (1.0 - restart) * (next[i] + x[i]) + restart * mass;
    norm = 0.0;
    for (const double v : next) norm += v * v;
    norm = std::sqrt(norm);
    if (norm <= 0.0)
      throw numeric_error("eigenvector centrality: iterate collapsed to the zero vector");
    double diff = 0.0;
    for (std::uint32_t i = 0; i < n; ++i) {
      next[i] /= norm;
      diff = std::max(diff, std::abs(next[i] - x[i]));
    }
    x.swap(next);
    used = iter;
    if (diff <= tol) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw numeric_error(
        "eigenvector centrality did not converge in " + std::to_string(max_iter) +
        " iterations: the dominant eigenvalue is likely degenerate (periodic or "
        "disconnected structure with tied component spectra)");

  CentralityResult result;
  result.measure = "eigenvector";
  result.scores = x;
  result.iterations = used;
  // Rayleigh quotient on the original adjacency (||x|| = 1).
  apply(x, next);
  double lambda = 0.0;
  for (std::uint32_t i = 0; i < n; ++i) lambda += x[i] * next[i];
  result.eigenvalue = lambda;
  result.normalization = teleport ? "Euclidean norm 1; 0.15 uniform teleport mixed in"
                                  : "Euclidean norm 1";
  return result;
}

struct CommunityStats {
  std::uint32_t community = 0;
  std::size_t size = 0;
  double mean = 0.0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double whisker_low = 0.0;   // smallest value within Q1 - 1.5 IQR
  double whisker_high = 0.0;  // largest value within Q3 + 1.5 IQR
  std::vector<NodeId> outliers;
};

struct GroupStats {
  std::vector<CommunityStats> communities;  // sorted by community index
};

namespace statdetail {

// Linear-interpolation quantile on sorted data (the midpoint median is the
// q = 0.5 case of this rule).
inline double quantile_sorted(std::span<const double> sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(lo);
  if (lo + 1 >= sorted.size()) return sorted[lo];
  return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

}  // namespace statdetail

// Box-plot statistics of a score vector per community. Whiskers follow the
// 1.5 IQR rule: they sit on the most extreme values inside the fences, and
// nodes beyond the fences are listed as outliers (ascending id).
inline GroupStats group_stats(std::span<const double> scores, const Partition& p,
                              std::span<const NodeId> ids) {
  if (scores.size() != p.assignment.size())
    throw input_error("group_stats: score vector does not match the partition");
  if (ids.size() != scores.size())
    throw input_error("group_stats: id vector does not match the partition");
  GroupStats out;
  out.communities.resize(p.community_count);
  std::vector<std::vector<std::size_t>> members(p.community_count);
  for (std::size_t i = 0; i < scores.size(); ++i) members[p.assignment[i]].push_back(i);

  for (std::uint32_t c = 0; c < p.community_count; ++c) {
    CommunityStats& cs = out.communities[c];
    cs.community = c;
    cs.size = members[c].size();
    std::vector<double> vals;
    vals.reserve(cs.size);
    double sum = 0.0;
    for (const std::size_t i : members[c]) {
      vals.push_back(scores[i]);
      sum += scores[i];
    }
    std::sort(vals.begin(), vals.end());
    cs.mean = sum / static_cast<double>(cs.size);
    cs.median = statdetail::quantile_sorted(vals, 0.5);
    cs.q1 = statdetail::quantile_sorted(vals, 0.25);
    cs.q3 = statdetail::quantile_sorted(vals, 0.75);
    const double iqr = cs.q3 - cs.q1;
    const double lo_fence = cs.q1 - 1.5 * iqr;
    const double hi_fence = cs.q3 + 1.5 * iqr;
    cs.whisker_low = cs.q3;
    cs.whisker_high = cs.q1;
    for (const double v : vals) {
      if (v >= lo_fence) {
        cs.whisker_low = v;
        break;
      }
    }
    for (auto it = vals.rbegin(); it != vals.rend(); ++it) {
      if (*it <= hi_fence) {
        cs.whisker_high = *it;
        break;
      }
    }
    for (const std::size_t i : members[c]) {
      if (scores[i] < lo_fence || scores[i] > hi_fence) cs.outliers.push_back(ids[i]);
    }
    std::sort(cs.outliers.begin(), cs.outliers.end());
  }
  return out;
}

// Sample Pearson correlation; both inputs must vary.
inline double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw input_error("pearson: vectors differ in length");
  if (x.size() < 2) throw input_error("pearson: need at least two observations");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw numeric_error("pearson correlation undefined: an input has zero variance");
  return sxy / std::sqrt(sxx * syy);
}

struct ScatterRow {
  NodeId id = 0;
  double distance = 0.0;
  double score = 0.0;
};

struct DistanceCorrelation {
  std::vector<ScatterRow> rows;  // sorted by id
  std::optional<double> r;       // empty when the correlation is undefined
  std::string note;              // reason when r is empty
};

// Pairs every node's distance-to-center with its centrality score. The
// scatter is always produced; an undefined correlation (constant input) is
// reported alongside rather than aborting the export.
inline DistanceCorrelation centrality_vs_distance(std::span<const double> scores,
                                                  std::span<const NodeId> ids,
                                                  std::span<const double> distances) {
  if (scores.size() != ids.size() || scores.size() != distances.size())
    throw input_error("centrality_vs_distance: inputs are not aligned");
  if (scores.empty()) throw input_error("centrality_vs_distance: no nodes");
  DistanceCorrelation out;
  out.rows.resize(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i)
    out.rows[i] = {ids[i], distances[i], scores[i]};
  std::sort(out.rows.begin(), out.rows.end(),
            [](const ScatterRow& a, const ScatterRow& b) { return a.id < b.id; });
  try {
    out.r = pearson(distances, scores);
  } catch (const std::exception& e) {
    out.note = e.what();
  }
  return out;
}

}  // namespace subcity
