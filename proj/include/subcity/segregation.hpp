#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "subcity/errors.hpp"
#include "subcity/graph.hpp"
#include "subcity/partition.hpp"
#include "subcity/rng.hpp"

namespace subcity {

// How a record contributes to the flow counts: its commuter count (default)
// or one unit per distinct source/target node pair.
enum class FlowCount { records, distinct_pairs };

enum class NullModel { analytic, montecarlo };

// Community-to-community commuter flows with their observed and null
// probabilities. Matrices are k x k, indexed [source][target].
struct SegregationTable {
  std::uint32_t k = 0;
  std::vector<std::vector<std::int64_t>> counts;
  std::int64_t total = 0;
  std::vector<std::vector<double>> joint;        // counts / total
  std::vector<std::vector<double>> conditional;  // counts / row sum
  std::vector<std::vector<double>> expected;     // null model E[P_X(Y)]
  std::vector<std::vector<std::uint8_t>> segregated;

  std::vector<std::int64_t> row_sums() const {
    std::vector<std::int64_t> sums(k, 0);
    for (std::uint32_t x = 0; x < k; ++x)
      for (std::uint32_t y = 0; y < k; ++y) sums[x] += counts[x][y];
    return sums;
  }

  std::vector<std::int64_t> col_sums() const {
    std::vector<std::int64_t> sums(k, 0);
    for (std::uint32_t x = 0; x < k; ++x)
      for (std::uint32_t y = 0; y < k; ++y) sums[y] += counts[x][y];
    return sums;
  }
};

// Accumulates record flows into community-pair counts and the joint
// distribution. Every record endpoint must be a node of g.
inline SegregationTable build_flow_table(std::span<const ODRecord> records, const Graph& g,
                                         const Partition& p,
                                         FlowCount mode = FlowCount::records) {
  if (p.assignment.size() != g.node_count())
    throw input_error("build_flow_table: partition does not cover the graph");
  SegregationTable t;
  t.k = p.community_count;
  t.counts.assign(t.k, std::vector<std::int64_t>(t.k, 0));

  auto community_of = [&](NodeId id) {
    const auto idx = g.index_of(id);
    if (!idx) throw input_error("build_flow_table: record endpoint " + std::to_string(id) +
                                " has no community assignment");
    return p.assignment[*idx];
  };

  if (mode == FlowCount::records) {
    for (const auto& rec : records)
      t.counts[community_of(rec.source)][community_of(rec.target)] += rec.count;
  } else {
    std::map<std::pair<NodeId, NodeId>, bool> seen;
    for (const auto& rec : records) {
      if (seen.emplace(std::make_pair(rec.source, rec.target), true).second)
        t.counts[community_of(rec.source)][community_of(rec.target)] += 1;
    }
  }
  for (const auto& row : t.counts)
    for (const std::int64_t c : row) t.total += c;
  if (t.total <= 0) throw input_error("build_flow_table: no flow records");

  t.joint.assign(t.k, std::vector<double>(t.k, 0.0));
  for (std::uint32_t x = 0; x < t.k; ++x)
    for (std::uint32_t y = 0; y < t.k; ++y)
      t.joint[x][y] = static_cast<double>(t.counts[x][y]) / static_cast<double>(t.total);
  return t;
}

// P_X(Y) = n_XY / n_X. Every source community must emit at least one record.
inline void conditional_table(SegregationTable& t) {
  const auto rows = t.row_sums();
  t.conditional.assign(t.k, std::vector<double>(t.k, 0.0));
  for (std::uint32_t x = 0; x < t.k; ++x) {
    if (rows[x] <= 0)
      throw input_error("conditional_table: source community " + std::to_string(x) +
                        " has no outgoing records");
    for (std::uint32_t y = 0; y < t.k; ++y)
      t.conditional[x][y] =
          static_cast<double>(t.counts[x][y]) / static_cast<double>(rows[x]);
  }
}

// Null expectation of P_X(Y) when each commuter keeps their home community
// but is assigned a workplace drawn from the global target pool.
//
// The analytic form is the target marginal n_.Y / N, the same for every X.
// Monte Carlo reproduces it empirically: commuters are expanded to unit
// records, the target labels are permuted wholesale `trials` times, and the
// per-trial conditionals are averaged in trial order.
inline void null_expected(SegregationTable& t, NullModel mode, std::uint32_t trials = 0,
                          std::uint64_t seed = 0) {
  t.expected.assign(t.k, std::vector<double>(t.k, 0.0));
  if (mode == NullModel::analytic) {
    const auto cols = t.col_sums();
    for (std::uint32_t x = 0; x < t.k; ++x)
      for (std::uint32_t y = 0; y < t.k; ++y)
        t.expected[x][y] = static_cast<double>(cols[y]) / static_cast<double>(t.total);
    return;
  }
  if (trials < 1) throw input_error("null_expected: montecarlo requires trials >= 1");

  std::vector<std::uint32_t> src, tgt;
  src.reserve(static_cast<std::size_t>(t.total));
  tgt.reserve(static_cast<std::size_t>(t.total));
  for (std::uint32_t x = 0; x < t.k; ++x)
    for (std::uint32_t y = 0; y < t.k; ++y)
      for (std::int64_t i = 0; i < t.counts[x][y]; ++i) {
        src.push_back(x);
        tgt.push_back(y);
      }
  const auto row_totals = t.row_sums();  // preserved by target permutation

  std::vector<std::int64_t> trial_counts(static_cast<std::size_t>(t.k) * t.k);
  std::vector<std::uint32_t> shuffled;
  for (std::uint32_t trial = 0; trial < trials; ++trial) {
    shuffled = tgt;
    SplitMix64 rng(mix_seed(seed, trial));
    deterministic_shuffle(shuffled, rng);
    std::fill(trial_counts.begin(), trial_counts.end(), 0);
    for (std::size_t i = 0; i < src.size(); ++i)
      ++trial_counts[static_cast<std::size_t>(src[i]) * t.k + shuffled[i]];
    for (std::uint32_t x = 0; x < t.k; ++x)
      for (std::uint32_t y = 0; y < t.k; ++y)
        t.expected[x][y] += static_cast<double>(trial_counts[static_cast<std::size_t>(x) * t.k + y]) /
                            static_cast<double>(row_totals[x]);
  }
  for (auto& row : t.expected)
    for (auto& v : row) v /= static_cast<double>(trials);
}

// A pair is segregated when the observed conditional strictly exceeds the
// null expectation; exact ties are not segregated.
inline void classify_segregated(SegregationTable& t) {
  if (t.conditional.empty() || t.expected.empty())
    throw input_error("classify_segregated: conditional and expected tables required");
  t.segregated.assign(t.k, std::vector<std::uint8_t>(t.k, 0));
  for (std::uint32_t x = 0; x < t.k; ++x)
    for (std::uint32_t y = 0; y < t.k; ++y)
      t.segregated[x][y] = t.conditional[x][y] > t.expected[x][y] ? 1 : 0;
}

// Full pipeline: counts, joint, conditional, null expectation, flags.
inline SegregationTable segregation_analysis(std::span<const ODRecord> records, const Graph& g,
                                             const Partition& p,
                                             NullModel null_model = NullModel::analytic,
                                             std::uint32_t trials = 0, std::uint64_t seed = 0,
                                             FlowCount mode = FlowCount::records) {
  SegregationTable t = build_flow_table(records, g, p, mode);
  conditional_table(t);
  null_expected(t, null_model, trials, seed);
  classify_segregated(t);
  return t;
}

}  // namespace subcity
