#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "subcity/errors.hpp"
#include "subcity/graph.hpp"
#include "subcity/modularity.hpp"
#include "subcity/partition.hpp"
#include "subcity/rng.hpp"

namespace subcity {

enum class NodeOrder { ascending, shuffled };

// How a node picks among candidate communities: the default takes the
// highest-gain candidate (lowest community id on ties); random_improving
// draws uniformly among all strictly improving candidates, which explores
// move trajectories the greedy rule cannot reach. Useful for multi-run
// searches; single runs should stay greedy.
enum class MovePolicy { greedy, random_improving };

namespace louvaindetail {

// Which arithmetic form drives the greedy moves. Both maximize the same
// argmax (the scaled form multiplies every gain by r > 0); the scaled form
// exists so the equivalence can be exercised directly in tests.
enum class GainForm { gamma, resolution_scaled };

// Working copy of one aggregation level. Neighbor lists exclude self-loops;
// self-loop weight is tracked per node and strengths include it (twice for
// the undirected degree, once per direction for directed graphs).
struct WorkGraph {
  bool directed = false;
  std::vector<std::vector<Neighbor>> out_adj;
  std::vector<std::vector<Neighbor>> in_adj;  // directed only
  std::vector<double> self_loop;
  std::vector<double> k_out;  // undirected degree lives here
  std::vector<double> k_in;   // directed only
  double m = 0.0;

  std::size_t size() const { return self_loop.size(); }
};

inline WorkGraph from_graph(const Graph& g) {
  WorkGraph w;
  w.directed = g.directed();
  const std::size_t n = g.node_count();
  w.out_adj.resize(n);
  if (w.directed) w.in_adj.resize(n);
  w.self_loop.resize(n);
  w.k_out.resize(n);
  if (w.directed) w.k_in.resize(n);
  for (NodeIndex i = 0; i < n; ++i) {
    auto out = g.out_neighbors(i);
    w.out_adj[i].assign(out.begin(), out.end());
    if (w.directed) {
      auto in = g.in_neighbors(i);
      w.in_adj[i].assign(in.begin(), in.end());
      w.k_in[i] = g.in_strength(i);
    }
    w.self_loop[i] = g.self_loop(i);
    w.k_out[i] = g.out_strength(i);
  }
  w.m = g.total_weight();
  return w;
}

// Q of the all-singletons partition, the starting point of every level.
inline double singleton_quality(const WorkGraph& w, double gamma) {
  double q = 0.0;
  if (w.directed) {
    for (std::size_t i = 0; i < w.size(); ++i)
      q += w.self_loop[i] / w.m - gamma * (w.k_out[i] / w.m) * (w.k_in[i] / w.m);
  } else {
    const double two_m = 2.0 * w.m;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double frac = w.k_out[i] / two_m;
      q += 2.0 * w.self_loop[i] / two_m - gamma * frac * frac;
    }
  }
  return q;
}

struct MoveState {
  std::vector<std::uint32_t> comm;     // per work-node community slot
  std::vector<std::uint32_t> members;  // occupancy per slot
  std::vector<double> tot;             // undirected: sum of degrees per slot
  std::vector<double> tot_out, tot_in;
  // scratch: per-slot accumulated weights from the node under consideration
  std::vector<double> w_to, w_from;
  std::vector<std::uint32_t> touched;
  std::vector<double> cand_gain;           // gain per touched entry, same order
  std::vector<std::uint32_t> empty_slots;  // stack; entries validated lazily
};

// Moving state over slots 0..n-1 with the given initial assignment; slots
// not used by `initial` start out empty and are reusable by moves.
inline MoveState init_state(const WorkGraph& w, std::span<const std::uint32_t> initial) {
  const std::uint32_t n = static_cast<std::uint32_t>(w.size());
  MoveState st;
  st.comm.assign(initial.begin(), initial.end());
  st.members.assign(n, 0);
  if (w.directed) {
    st.tot_out.assign(n, 0.0);
    st.tot_in.assign(n, 0.0);
  } else {
    st.tot.assign(n, 0.0);
  }
  for (std::uint32_t i = 0; i < n; ++i) {
    const std::uint32_t c = st.comm[i];
    ++st.members[c];
    if (w.directed) {
      st.tot_out[c] += w.k_out[i];
      st.tot_in[c] += w.k_in[i];
    } else {
      st.tot[c] += w.k_out[i];
    }
  }
  for (std::uint32_t c = n; c-- > 0;)
    if (st.members[c] == 0) st.empty_slots.push_back(c);
  st.w_to.assign(n, 0.0);
  st.w_from.assign(n, 0.0);
  return st;
}

// One full local-moving phase. Sweeps repeat until a sweep moves nothing.
// Returns the quality delta accumulated over all accepted moves.
inline double local_moving(const WorkGraph& w, MoveState& st, double gamma, double scale,
                           GainForm form, std::span<const std::uint32_t> order, MovePolicy policy,
                           SplitMix64& rng, bool& any_move) {
  const std::size_t n = w.size();
  const double m = w.m;
  const double two_m = 2.0 * m;
  // The scaled form replaces gain = edge_part - gamma * null_part with
  // gain' = r * edge_part - null_part.
  const bool scaled = form == GainForm::resolution_scaled;
  // Moves are accepted only when they beat staying by more than rounding
  // noise: on an exact-tie plateau both directions of a move can evaluate
  // one ulp above zero, and accepting those oscillates forever.
  constexpr double kMoveTol = 1e-12;
  double q_delta = 0.0;
  any_move = false;
  bool moved_in_sweep = true;
  for (int sweep = 0; sweep < 10000 && moved_in_sweep; ++sweep) {
    moved_in_sweep = false;
    for (const std::uint32_t u : order) {
      const std::uint32_t old_c = st.comm[u];
      // Remove u from its community.
      if (w.directed) {
        st.tot_out[old_c] -= w.k_out[u];
        st.tot_in[old_c] -= w.k_in[u];
      } else {
        st.tot[old_c] -= w.k_out[u];
      }

      // Collect edge weight from u to each neighboring community.
      st.touched.clear();
      auto touch = [&](std::uint32_t c) {
        if (st.w_to[c] == 0.0 && st.w_from[c] == 0.0 && c != old_c) st.touched.push_back(c);
      };
      for (const auto& nb : w.out_adj[u]) {
        const std::uint32_t c = st.comm[nb.index];
        touch(c);
        st.w_to[c] += nb.weight;
      }
      if (w.directed) {
        for (const auto& nb : w.in_adj[u]) {
          const std::uint32_t c = st.comm[nb.index];
          touch(c);
          st.w_from[c] += nb.weight;
        }
      }
      st.touched.push_back(old_c);
      // A vacant slot is always a candidate: a node may pay to leave its
      // community even when no neighboring community would take it at a
      // profit. Skipped when the node is already alone (pure relabel).
      while (!st.empty_slots.empty() && st.members[st.empty_slots.back()] != 0)
        st.empty_slots.pop_back();
      if (!st.empty_slots.empty() && st.members[old_c] > 1)
        st.touched.push_back(st.empty_slots.back());
      std::sort(st.touched.begin(), st.touched.end());

      // Insertion gain for each candidate; strictly-greater comparison over
      // ascending community ids makes ties resolve to the lowest id.
      st.cand_gain.clear();
      double best_gain = 0.0, old_gain = 0.0;
      std::uint32_t best_c = old_c;
      bool have_best = false;
      for (const std::uint32_t c : st.touched) {
        double gain;
        if (w.directed) {
          const double edge_part = (st.w_to[c] + st.w_from[c] + w.self_loop[u]) / m;
          const double null_part = (st.tot_out[c] * w.k_in[u] + st.tot_in[c] * w.k_out[u] +
                                    w.k_out[u] * w.k_in[u]) /
                                   (m * m);
          gain = scaled ? scale * edge_part - null_part : edge_part - gamma * null_part;
        } else {
          const double edge_part = (2.0 * st.w_to[c] + 2.0 * w.self_loop[u]) / two_m;
          const double null_part =
              (2.0 * st.tot[c] * w.k_out[u] + w.k_out[u] * w.k_out[u]) / (two_m * two_m);
          gain = scaled ? scale * edge_part - null_part : edge_part - gamma * null_part;
        }
        st.cand_gain.push_back(gain);
        if (c == old_c) old_gain = gain;
        if (!have_best || gain > best_gain) {
          best_gain = gain;
          best_c = c;
          have_best = true;
        }
      }
      for (const std::uint32_t c : st.touched) {
        st.w_to[c] = 0.0;
        st.w_from[c] = 0.0;
      }

      // Strict improvement required; zero-gain moves are rejected.
      auto improves = [&](std::size_t j) {
        const double gain = st.cand_gain[j];
        const double tol = kMoveTol * std::max(std::abs(gain), std::abs(old_gain));
        return st.touched[j] != old_c && gain > old_gain + tol;
      };
      std::uint32_t target = old_c;
      double accept_gain = old_gain;
      if (policy == MovePolicy::greedy) {
        const double tie_tol = kMoveTol * std::max(std::abs(best_gain), std::abs(old_gain));
        if (best_c != old_c && best_gain > old_gain + tie_tol) {
          target = best_c;
          accept_gain = best_gain;
        }
      } else {
        std::uint64_t improving = 0;
        for (std::size_t j = 0; j < st.touched.size(); ++j)
          if (improves(j)) ++improving;
        if (improving > 0) {
          std::uint64_t pick = rng.below(improving);
          for (std::size_t j = 0; j < st.touched.size(); ++j) {
            if (!improves(j)) continue;
            if (pick == 0) {
              target = st.touched[j];
              accept_gain = st.cand_gain[j];
              break;
            }
            --pick;
          }
        }
      }
      if (w.directed) {
        st.tot_out[target] += w.k_out[u];
        st.tot_in[target] += w.k_in[u];
      } else {
        st.tot[target] += w.k_out[u];
      }
      st.comm[u] = target;
      if (target != old_c) {
        --st.members[old_c];
        ++st.members[target];
        if (st.members[old_c] == 0) st.empty_slots.push_back(old_c);
        // The scaled form's gains are r * (real dQ); undo the scaling when
        // tracking the true quality.
        const double dq = accept_gain - old_gain;
        q_delta += scaled ? dq / scale : dq;
        moved_in_sweep = true;
        any_move = true;
      }
    }
  }
  return q_delta;
}

// Collapses communities into super-nodes. `labels` must be dense 0..k-1.
inline WorkGraph aggregate(const WorkGraph& w, std::span<const std::uint32_t> labels,
                           std::uint32_t k) {
  WorkGraph next;
  next.directed = w.directed;
  next.out_adj.resize(k);
  if (w.directed) next.in_adj.resize(k);
  next.self_loop.assign(k, 0.0);
  next.k_out.assign(k, 0.0);
  if (w.directed) next.k_in.assign(k, 0.0);
  next.m = w.m;

  std::vector<double> acc(k, 0.0);
  std::vector<std::uint32_t> touched;
  std::vector<std::vector<std::uint32_t>> members(k);
  for (std::uint32_t u = 0; u < w.size(); ++u) members[labels[u]].push_back(u);

  for (std::uint32_t c = 0; c < k; ++c) {
    touched.clear();
    double self_raw = 0.0;
    for (const std::uint32_t u : members[c]) {
      self_raw += w.self_loop[u];
      next.k_out[c] += w.k_out[u];
      if (w.directed) next.k_in[c] += w.k_in[u];
      for (const auto& nb : w.out_adj[u]) {
        const std::uint32_t d = labels[nb.index];
        if (d == c) {
          // Undirected lists hold each intra edge twice; halve afterwards.
          self_raw += w.directed ? nb.weight : nb.weight / 2.0;
        } else {
          if (acc[d] == 0.0) touched.push_back(d);
          acc[d] += nb.weight;
        }
      }
    }
    next.self_loop[c] = self_raw;
    std::sort(touched.begin(), touched.end());
    for (const std::uint32_t d : touched) {
      next.out_adj[c].push_back({d, acc[d]});
      acc[d] = 0.0;
    }
  }
  if (w.directed) {
    for (std::uint32_t c = 0; c < k; ++c)
      for (const auto& nb : next.out_adj[c]) next.in_adj[nb.index].push_back({c, nb.weight});
  }
  return next;
}

inline Partition louvain_impl(const Graph& g, const QualityParams& q, std::uint64_t seed,
                              NodeOrder order, GainForm form,
                              MovePolicy policy = MovePolicy::greedy) {
  if (g.node_count() == 0) throw input_error("louvain requires a graph with at least one node");
  const double gamma = q.gamma();
  const double scale = q.resolution;

  // Current assignment of original nodes, refined in place across rounds.
  std::vector<std::uint32_t> membership(g.node_count());
  for (std::uint32_t i = 0; i < membership.size(); ++i) membership[i] = i;

  const WorkGraph original = from_graph(g);
  SplitMix64 rng(mix_seed(seed, 0x10CA1u));
  double quality = original.m > 0.0 ? singleton_quality(original, gamma) : 0.0;
  constexpr double kMinGain = 1e-12;

  auto visit_order = [&](std::size_t n) {
    std::vector<std::uint32_t> visit(n);
    for (std::uint32_t i = 0; i < n; ++i) visit[i] = i;
    if (order == NodeOrder::shuffled) deterministic_shuffle(visit, rng);
    return visit;
  };

  // Aggregation can strand nodes inside merged communities, so each round
  // first re-runs local moving at the finest level, then climbs through
  // aggregated levels while super-node moves keep paying. Every accepted
  // move strictly increases Q, which bounds the rounds.
  for (int round = 0; round < 100 && original.m > 0.0; ++round) {
    MoveState st = init_state(original, membership);
    bool any_move = false;
    double round_gain = local_moving(original, st, gamma, scale, form,
                                     visit_order(original.size()), policy, rng, any_move);
    if (!any_move) break;
    std::uint32_t k = renumber_first_occurrence(st.comm);
    membership = st.comm;

    WorkGraph work = aggregate(original, st.comm, k);
    for (int level = 1; level < 100 && k > 1; ++level) {
      std::vector<std::uint32_t> singletons(work.size());
      for (std::uint32_t i = 0; i < singletons.size(); ++i) singletons[i] = i;
      MoveState agg = init_state(work, singletons);
      bool moved = false;
      const double gained =
          local_moving(work, agg, gamma, scale, form, visit_order(work.size()), policy, rng, moved);
      if (!moved) break;
      round_gain += gained;
      const std::uint32_t k2 = renumber_first_occurrence(agg.comm);
      for (auto& c : membership) c = agg.comm[c];
      const bool stalled = k2 == work.size() || gained <= kMinGain;
      k = k2;
      if (stalled) break;
      work = aggregate(work, agg.comm, k2);
    }
    quality += round_gain;
    if (round_gain <= kMinGain) break;
  }

  Partition p = make_partition(g, std::move(membership));
  p.quality = quality;
  return p;
}

}  // namespace louvaindetail

// Two-phase Louvain modularity maximization. Deterministic for a given
// (seed, order, policy); ascending order visits nodes by id, shuffled order
// applies a seeded permutation at every level.
inline Partition louvain(const Graph& g, const QualityParams& q, std::uint64_t seed = 0,
                         NodeOrder order = NodeOrder::ascending,
                         MovePolicy policy = MovePolicy::greedy) {
  return louvaindetail::louvain_impl(g, q, seed, order, louvaindetail::GainForm::gamma, policy);
}

struct SweepRow {
  double resolution = 1.0;
  std::uint32_t communities = 0;  // community count of the best-quality run
  std::uint32_t min_communities = 0;
  double median_communities = 0.0;
  std::uint32_t max_communities = 0;
  double best_quality = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  double mean_communities = 0.0;    // over the representative counts
  double stddev_communities = 0.0;  // population standard deviation
};

// Runs Louvain `runs` times per resolution with seeds derived from
// (seed, resolution value, run), so duplicate resolution entries produce
// identical rows. Shuffled node order is used so runs actually differ.
inline SweepResult resolution_sweep(const Graph& g, std::span<const double> resolutions,
                                    std::uint64_t seed, std::uint32_t runs) {
  if (resolutions.empty()) throw input_error("resolution_sweep: no resolutions given");
  if (runs < 1) throw input_error("resolution_sweep: runs must be >= 1");
  SweepResult result;
  for (const double r : resolutions) {
    const QualityParams q = QualityParams::from_resolution(r);
    const std::uint64_t res_salt = std::bit_cast<std::uint64_t>(r);
    SweepRow row;
    row.resolution = r;
    std::vector<std::uint32_t> counts;
    bool first = true;
    for (std::uint32_t run = 0; run < runs; ++run) {
      const Partition p = louvain(g, q, mix_seed(seed, res_salt, run), NodeOrder::shuffled);
      counts.push_back(p.community_count);
      if (first || p.quality > row.best_quality) {
        row.best_quality = p.quality;
        row.communities = p.community_count;
        first = false;
      }
    }
    std::sort(counts.begin(), counts.end());
    row.min_communities = counts.front();
    row.max_communities = counts.back();
    const std::size_t h = counts.size() / 2;
    row.median_communities = counts.size() % 2 ? counts[h] : (counts[h - 1] + counts[h]) / 2.0;
    result.rows.push_back(row);
  }
  double mean = 0.0;
  for (const auto& row : result.rows) mean += row.communities;
  mean /= static_cast<double>(result.rows.size());
  double var = 0.0;
  for (const auto& row : result.rows) {
    const double d = row.communities - mean;
    var += d * d;
  }
  result.mean_communities = mean;
  result.stddev_communities = std::sqrt(var / static_cast<double>(result.rows.size()));
  return result;
}

}  // namespace subcity
