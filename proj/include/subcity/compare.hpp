#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "subcity/errors.hpp"
#include "subcity/partition.hpp"

namespace subcity {

// Cross-tabulation of two labelings of the same node set. counts[u][v] is
// the number of nodes with label u in A and v in B; entries sum to n.
struct ContingencyTable {
  std::vector<std::vector<std::int64_t>> counts;
  std::int64_t total = 0;

  std::size_t rows() const { return counts.size(); }
  std::size_t cols() const { return counts.empty() ? 0 : counts.front().size(); }
};

inline ContingencyTable contingency(const std::vector<std::uint32_t>& a,
                                    const std::vector<std::uint32_t>& b, std::uint32_t ka,
                                    std::uint32_t kb) {
  if (a.size() != b.size()) throw input_error("contingency: label vectors differ in length");
  ContingencyTable t;
  t.counts.assign(ka, std::vector<std::int64_t>(kb, 0));
  for (std::size_t i = 0; i < a.size(); ++i) ++t.counts[a[i]][b[i]];
  t.total = static_cast<std::int64_t>(a.size());
  return t;
}

namespace comparedetail {

// Assignment problem on an n x n cost matrix (minimization) via the
// potentials/augmenting-path method; returns column -> row, O(n^3).
inline std::vector<int> assign_min_cost(const std::vector<std::vector<std::int64_t>>& cost) {
  const int n = static_cast<int>(cost.size());
  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::int64_t> u(n + 1, 0), v(n + 1, 0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<std::int64_t> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = 0;
      std::int64_t delta = kInf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const std::int64_t cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> col_to_row(n);
  for (int j = 1; j <= n; ++j) col_to_row[j - 1] = p[j] - 1;
  return col_to_row;
}

}  // namespace comparedetail

// Largest node count coverable by a one-to-one matching of A-labels to
// B-labels. Surplus labels on the larger side stay unmatched.
inline std::int64_t max_matching_overlap(const ContingencyTable& t) {
  const std::size_t n = std::max(t.rows(), t.cols());
  if (n == 0) return 0;
  // Pad to square and negate: max-weight matching as min-cost assignment.
  std::vector<std::vector<std::int64_t>> cost(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t i = 0; i < t.rows(); ++i)
    for (std::size_t j = 0; j < t.cols(); ++j) cost[i][j] = -t.counts[i][j];
  const std::vector<int> col_to_row = comparedetail::assign_min_cost(cost);
  std::int64_t matched = 0;
  for (std::size_t j = 0; j < n; ++j) matched -= cost[col_to_row[j]][j];
  return matched;
}

// Mutual information normalized by the arithmetic mean of the entropies,
// natural logarithms. Two zero-entropy partitions are identical -> 1.
inline double normalized_mutual_information(const ContingencyTable& t) {
  const double n = static_cast<double>(t.total);
  if (t.total <= 0) throw input_error("normalized_mutual_information: empty labeling");
  std::vector<std::int64_t> row(t.rows(), 0), col(t.cols(), 0);
  for (std::size_t i = 0; i < t.rows(); ++i)
    for (std::size_t j = 0; j < t.cols(); ++j) {
      row[i] += t.counts[i][j];
      col[j] += t.counts[i][j];
    }
  double ha = 0.0, hb = 0.0, mi = 0.0;
  for (const std::int64_t r : row)
    if (r > 0) ha -= (r / n) * std::log(r / n);
  for (const std::int64_t c : col)
    if (c > 0) hb -= (c / n) * std::log(c / n);
  for (std::size_t i = 0; i < t.rows(); ++i)
    for (std::size_t j = 0; j < t.cols(); ++j) {
      const std::int64_t nij = t.counts[i][j];
      if (nij > 0) mi += (nij / n) * std::log(n * nij / (static_cast<double>(row[i]) * col[j]));
    }
  const double denom = 0.5 * (ha + hb);
  if (denom == 0.0) return 1.0;
  return mi / denom;
}

// Adjusted Rand index. The denominator vanishes only when both partitions
// are all-singletons or both are one block; the labelings then agree -> 1.
inline double adjusted_rand_index(const ContingencyTable& t) {
  if (t.total <= 0) throw input_error("adjusted_rand_index: empty labeling");
  auto choose2 = [](double x) { return x * (x - 1.0) / 2.0; };
  std::vector<std::int64_t> row(t.rows(), 0), col(t.cols(), 0);
  double index = 0.0;
  for (std::size_t i = 0; i < t.rows(); ++i)
    for (std::size_t j = 0; j < t.cols(); ++j) {
      row[i] += t.counts[i][j];
      col[j] += t.counts[i][j];
      index += choose2(static_cast<double>(t.counts[i][j]));
    }
  double sum_a = 0.0, sum_b = 0.0;
  for (const std::int64_t r : row) sum_a += choose2(static_cast<double>(r));
  for (const std::int64_t c : col) sum_b += choose2(static_cast<double>(c));
  const double pairs = choose2(static_cast<double>(t.total));
  const double expected = sum_a * sum_b / pairs;
  const double maximum = 0.5 * (sum_a + sum_b);
  const double denom = maximum - expected;
  if (denom == 0.0) return 1.0;
  return (index - expected) / denom;
}

struct CompareResult {
  double similarity_pct = 0.0;
  double nmi = 0.0;
  double ari = 0.0;
  ContingencyTable table;
};

// All three scores are invariant under relabeling either side.
inline CompareResult compare_labels(const std::vector<std::uint32_t>& a,
                                    const std::vector<std::uint32_t>& b, std::uint32_t ka,
                                    std::uint32_t kb) {
  if (a.empty()) throw input_error("compare_labels: empty labeling");
  CompareResult r;
  r.table = contingency(a, b, ka, kb);
  r.similarity_pct =
      100.0 * static_cast<double>(max_matching_overlap(r.table)) / static_cast<double>(a.size());
  r.nmi = normalized_mutual_information(r.table);
  r.ari = adjusted_rand_index(r.table);
  return r;
}

inline CompareResult compare_partitions(const Partition& a, const Partition& b) {
  if (a.assignment.size() != b.assignment.size())
    throw input_error("compare_partitions: partitions cover different node sets");
  return compare_labels(a.assignment, b.assignment, a.community_count, b.community_count);
}

}  // namespace subcity
