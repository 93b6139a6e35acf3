#include <cmath>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "subcity/centrality.hpp"
#include "subcity/partition.hpp"
#include "subcity/rng.hpp"

using namespace subcity;

namespace {

// Line graph over ids 0..n-1 so partitions are easy to state.
Graph line_graph(int n) {
  std::vector<ODRecord> records;
  for (int i = 0; i + 1 < n; ++i) records.push_back({i, i + 1, 1});
  return build_graph(records, false, true);
}

}  // namespace

TEST_CASE("group stats on one community") {
  const Graph g = line_graph(4);
  const Partition p = whole_graph_partition(g);
  const std::vector<double> scores = {1.0, 2.0, 3.0, 4.0};
  const GroupStats stats = group_stats(scores, p, g.node_ids());
  REQUIRE(stats.communities.size() == 1);
  const CommunityStats& c = stats.communities[0];
  CHECK(c.size == 4);
  CHECK(c.mean == 2.5);
  CHECK(c.median == 2.5);
  CHECK(c.q1 == 1.75);  // linear interpolation at position 0.75
  CHECK(c.q3 == 3.25);
  CHECK(c.whisker_low == 1.0);   // all points inside the 1.5 IQR fences
  CHECK(c.whisker_high == 4.0);
  CHECK(c.outliers.empty());
}

TEST_CASE("constant scores have zero spread and no outliers") {
  const Graph g = line_graph(5);
  const GroupStats stats =
      group_stats(std::vector<double>(5, 0.7), whole_graph_partition(g), g.node_ids());
  const CommunityStats& c = stats.communities[0];
  CHECK(c.q1 == 0.7);
  CHECK(c.q3 == 0.7);
  CHECK(c.whisker_low == 0.7);
  CHECK(c.whisker_high == 0.7);
  CHECK(c.outliers.empty());
}

TEST_CASE("outliers sit beyond the 1.5 IQR fences") {
  const Graph g = line_graph(5);
  const std::vector<double> scores = {1.0, 2.0, 3.0, 4.0, 100.0};
  const GroupStats stats = group_stats(scores, whole_graph_partition(g), g.node_ids());
  const CommunityStats& c = stats.communities[0];
  CHECK(c.median == 3.0);
  CHECK(c.q1 == 2.0);
  CHECK(c.q3 == 4.0);
  CHECK(c.whisker_low == 1.0);
  CHECK(c.whisker_high == 4.0);  // 100 is outside q3 + 1.5*2 = 7
  REQUIRE(c.outliers.size() == 1);
  CHECK(c.outliers[0] == 4);  // node id of the extreme score
}

TEST_CASE("per-community grouping and global mean recomposition") {
  const Graph g = line_graph(6);
  const Partition p = make_partition(g, {0, 0, 0, 1, 1, 1});
  const std::vector<double> scores = {0.1, 0.2, 0.3, 10.0, 20.0, 30.0};
  const GroupStats stats = group_stats(scores, p, g.node_ids());
  REQUIRE(stats.communities.size() == 2);
  CHECK(stats.communities[0].community == 0);
  CHECK(stats.communities[1].community == 1);
  CHECK(stats.communities[0].mean == Catch::Approx(0.2).margin(1e-15));
  CHECK(stats.communities[1].mean == 20.0);

  double recomposed = 0.0, global = 0.0;
  for (const auto& c : stats.communities) recomposed += c.mean * static_cast<double>(c.size);
  for (const double s : scores) global += s;
  CHECK(recomposed == Catch::Approx(global).epsilon(1e-12));
}

TEST_CASE("group stats validates its inputs") {
  const Graph g = line_graph(3);
  const Partition p = whole_graph_partition(g);
  CHECK_THROWS_AS(group_stats(std::vector<double>{1.0}, p, g.node_ids()), input_error);
  CHECK_THROWS_AS(group_stats(std::vector<double>(3, 1.0), p, std::vector<NodeId>{1}),
                  input_error);
}

TEST_CASE("pearson correlation") {
  const std::vector<double> x = {1.0, 2.0, 3.0, 4.0, 5.0};

  SECTION("affine increasing is exactly +1") {
    std::vector<double> y;
    for (const double v : x) y.push_back(2.0 * v + 3.0);
    CHECK(std::abs(pearson(x, y) - 1.0) <= 1e-12);
  }

  SECTION("affine decreasing is exactly -1") {
    std::vector<double> y;
    for (const double v : x) y.push_back(-v);
    CHECK(std::abs(pearson(x, y) + 1.0) <= 1e-12);
  }

  SECTION("symmetric and scale invariant") {
    const std::vector<double> y = {2.0, 1.0, 4.0, 3.0, 6.0};
    const double r = pearson(x, y);
    CHECK(pearson(y, x) == Catch::Approx(r).margin(1e-15));
    std::vector<double> y_scaled;
    for (const double v : y) y_scaled.push_back(100.0 * v - 7.0);
    CHECK(pearson(x, y_scaled) == Catch::Approx(r).margin(1e-12));
    CHECK(r > -1.0);
    CHECK(r < 1.0);
  }

  SECTION("degenerate inputs raise") {
    CHECK_THROWS_AS(pearson(x, std::vector<double>(5, 1.0)), numeric_error);
    CHECK_THROWS_AS(pearson(std::vector<double>(5, 2.0), x), numeric_error);
    CHECK_THROWS_AS(pearson(x, std::vector<double>{1.0}), input_error);
    CHECK_THROWS_AS(pearson(std::vector<double>{1.0}, std::vector<double>{1.0}), input_error);
  }
}

TEST_CASE("distance scatter pairs scores with distances") {
  const std::vector<NodeId> ids = {30, 10, 20};
  const std::vector<double> distances = {3.0, 1.0, 2.0};

  SECTION("monotone decay gives a negative correlation") {
    const std::vector<double> scores = {0.1, 0.9, 0.4};
    const DistanceCorrelation d = centrality_vs_distance(scores, ids, distances);
    REQUIRE(d.rows.size() == 3);
    CHECK(d.rows[0].id == 10);  // sorted by id
    CHECK(d.rows[0].score == 0.9);
    CHECK(d.rows[2].id == 30);
    REQUIRE(d.r.has_value());
    CHECK(*d.r < 0.0);
  }

  SECTION("constant scores surface the error but keep the scatter") {
    const std::vector<double> scores = {0.5, 0.5, 0.5};
    const DistanceCorrelation d = centrality_vs_distance(scores, ids, distances);
    REQUIRE(d.rows.size() == 3);
    CHECK_FALSE(d.r.has_value());
    CHECK(d.note.find("variance") != std::string::npos);
  }

  SECTION("misaligned inputs are rejected") {
    CHECK_THROWS_AS(
        centrality_vs_distance(std::vector<double>{1.0}, ids, distances), input_error);
  }
}
