#include <cmath>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "subcity/centrality.hpp"

using namespace subcity;

namespace {

Graph ring(int n, bool directed = false) {
  std::vector<ODRecord> records;
  for (int i = 0; i < n; ++i) records.push_back({i, (i + 1) % n, 1});
  return build_graph(records, directed, true);
}

Graph star(int leaves) {
  std::vector<ODRecord> records;
  for (int i = 1; i <= leaves; ++i) records.push_back({0, i, 1});
  return build_graph(records, false, true);
}

}  // namespace

TEST_CASE("betweenness on closed-form graphs") {
  SECTION("path: only the middle vertex carries traffic") {
    const Graph g = build_graph(std::vector<ODRecord>{{0, 1, 1}, {1, 2, 1}}, false, true);
    const CentralityResult r = betweenness(g);
    CHECK(r.scores == std::vector<double>{0.0, 1.0, 0.0});
  }

  SECTION("star: the hub carries everything") {
    const CentralityResult r = betweenness(star(5));
    CHECK(r.scores[0] == 1.0);
    for (int i = 1; i <= 5; ++i) CHECK(r.scores[i] == 0.0);
  }

  SECTION("directed 3-cycle: every node relays one pair") {
    const CentralityResult r = betweenness(ring(3, true));
    CHECK(r.scores == std::vector<double>{0.5, 0.5, 0.5});
  }

  SECTION("self-loops do not create paths") {
    const Graph g =
        build_graph(std::vector<ODRecord>{{0, 1, 1}, {1, 2, 1}, {1, 1, 9}}, false, true);
    const CentralityResult r = betweenness(g);
    CHECK(r.scores == std::vector<double>{0.0, 1.0, 0.0});
  }
}

TEST_CASE("betweenness small-n and degenerate input") {
  const Graph g = build_graph(std::vector<ODRecord>{{0, 1, 1}}, false, true);
  const CentralityResult r = betweenness(g);
  CHECK(r.scores == std::vector<double>{0.0, 0.0});
  CHECK(r.normalization.find("undefined") != std::string::npos);
  CHECK_THROWS_AS(betweenness(Graph{}), input_error);
}

TEST_CASE("inverse-weight lengths reroute through heavy edges") {
  // Heavy two-hop route 0-1-2 (weights 4) beats the direct unit edge 0-2:
  // 1/4 + 1/4 < 1/1.
  const Graph g =
      build_graph(std::vector<ODRecord>{{0, 1, 4}, {1, 2, 4}, {0, 2, 1}}, false, true);
  const CentralityResult unit = betweenness(g, EdgeLength::unit);
  CHECK(unit.scores[1] == 0.0);  // direct edge wins topologically
  const CentralityResult inv = betweenness(g, EdgeLength::inverse_weight);
  CHECK(inv.scores[1] == 1.0);
}

TEST_CASE("betweenness agrees with the brute-force path census") {
  SplitMix64 rng(555);
  for (int trial = 0; trial < 40; ++trial) {
    oracle::RandomGraphSpec spec;
    spec.min_nodes = 3;
    spec.max_nodes = 25;
    spec.edge_prob = 0.15;
    spec.directed = trial % 2 == 1;
    std::size_t n = 0;
    const auto records = oracle::random_records(rng, spec, n);
    if (records.empty()) continue;
    const Graph g = build_graph(records, spec.directed, true);
    if (g.node_count() < 3) continue;

    const auto unit = betweenness(g, EdgeLength::unit);
    const auto unit_ref = oracle::brute_betweenness(g, EdgeLength::unit);
    // Path counts are exact integers, but the pair-dependency fractions are
    // summed in a different order than Brandes accumulates them, so the two
    // totals can differ in the last ulp.
    for (std::size_t i = 0; i < g.node_count(); ++i)
      CHECK(std::abs(unit.scores[i] - unit_ref[i]) <= 1e-9);

    const auto inv = betweenness(g, EdgeLength::inverse_weight);
    const auto inv_ref = oracle::brute_betweenness(g, EdgeLength::inverse_weight);
    for (std::size_t i = 0; i < g.node_count(); ++i)
      CHECK(std::abs(inv.scores[i] - inv_ref[i]) <= 1e-9);
  }
}

TEST_CASE("worker-thread count never changes centrality output") {
  SplitMix64 rng(313);
  oracle::RandomGraphSpec spec;
  spec.min_nodes = 40;
  spec.max_nodes = 80;
  spec.edge_prob = 0.1;
  for (int trial = 0; trial < 4; ++trial) {
    spec.directed = trial % 2 == 1;
    std::size_t n = 0;
    const auto records = oracle::random_records(rng, spec, n);
    if (records.empty()) continue;
    const Graph g = build_graph(records, spec.directed, true);
    if (g.node_count() < 3) continue;
    const auto base = betweenness(g, EdgeLength::inverse_weight, 1);
    for (unsigned threads : {2u, 3u, 7u}) {
      const auto r = betweenness(g, EdgeLength::inverse_weight, threads);
      CHECK(r.scores == base.scores);  // bitwise, not approximate
    }
    const auto eig1 = eigenvector(g, 1e-10, 10000, true, 1);
    const auto eig4 = eigenvector(g, 1e-10, 10000, true, 4);
    CHECK(eig1.scores == eig4.scores);
    CHECK(eig1.iterations == eig4.iterations);
  }
}

TEST_CASE("degree-1 nodes never lie between others") {
  SplitMix64 rng(808);
  for (int trial = 0; trial < 10; ++trial) {
    oracle::RandomGraphSpec spec;
    spec.min_nodes = 5;
    spec.max_nodes = 20;
    spec.edge_prob = 0.2;
    spec.allow_self_loops = false;
    std::size_t n = 0;
    const auto records = oracle::random_records(rng, spec, n);
    if (records.empty()) continue;
    const Graph g = build_graph(records, false, true);
    if (g.node_count() < 3) continue;
    const auto r = betweenness(g);
    for (std::size_t i = 0; i < g.node_count(); ++i)
      if (g.out_neighbors(i).size() == 1) CHECK(r.scores[i] == 0.0);
  }
}

TEST_CASE("eigenvector centrality closed forms") {
  SECTION("cycle is uniform") {
    for (int n : {4, 5, 8}) {
      const CentralityResult r = eigenvector(ring(n));
      const double expect = 1.0 / std::sqrt(static_cast<double>(n));
      for (const double s : r.scores) CHECK(s == Catch::Approx(expect).margin(1e-10));
      CHECK(r.eigenvalue == Catch::Approx(2.0).margin(1e-8));
    }
  }

  SECTION("star concentrates half the mass on the hub") {
    for (int leaves : {4, 9}) {
      const CentralityResult r = eigenvector(star(leaves));
      CHECK(r.scores[0] == Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-10));
      const double leaf = 1.0 / std::sqrt(2.0 * leaves);
      for (int i = 1; i <= leaves; ++i) CHECK(r.scores[i] == Catch::Approx(leaf).margin(1e-10));
      CHECK(r.eigenvalue == Catch::Approx(std::sqrt(static_cast<double>(leaves))).margin(1e-8));
    }
  }

  SECTION("directed cycle is uniform with unit eigenvalue") {
    const CentralityResult r = eigenvector(ring(3, true));
    for (const double s : r.scores)
      CHECK(s == Catch::Approx(1.0 / std::sqrt(3.0)).margin(1e-10));
    CHECK(r.eigenvalue == Catch::Approx(1.0).margin(1e-8));
  }
}

TEST_CASE("eigenvector satisfies the eigenpair residual") {
  SplitMix64 rng(771);
  for (int trial = 0; trial < 20; ++trial) {
    oracle::RandomGraphSpec spec;
    spec.min_nodes = 4;
    spec.max_nodes = 30;
    spec.edge_prob = 0.3;
    spec.directed = trial % 2 == 1;
    std::size_t n = 0;
    const auto records = oracle::random_records(rng, spec, n);
    if (records.empty()) continue;
    const Graph g = build_graph(records, spec.directed, true);
    if (g.total_weight() <= 0.0) continue;
    CentralityResult r;
    try {
      r = eigenvector(g);
    } catch (const numeric_error&) {
      continue;  // degenerate random spectrum: the documented failure mode
    }
    double norm = 0.0;
    for (const double s : r.scores) norm += s * s;
    CHECK(std::abs(std::sqrt(norm) - 1.0) <= 1e-12);

    // residual ||Ax - lambda x||_inf on the incoming-orientation adjacency
    double residual = 0.0;
    for (NodeIndex i = 0; i < g.node_count(); ++i) {
      double ax = g.self_loop(i) * r.scores[i];
      const auto nbs = g.directed() ? g.in_neighbors(i) : g.out_neighbors(i);
      for (const auto& nb : nbs) ax += nb.weight * r.scores[nb.index];
      residual = std::max(residual, std::abs(ax - r.eigenvalue * r.scores[i]));
    }
    CHECK(residual <= 1e-8);
  }
}

TEST_CASE("eigenvector error and fallback paths") {
  SECTION("zero-edge graph is rejected") {
    const Graph g = build_graph({}, false, true, std::vector<NodeId>{1, 2});
    CHECK_THROWS_AS(eigenvector(g), input_error);
    CHECK_THROWS_AS(eigenvector(Graph{}), input_error);
  }

  SECTION("iteration cap raises a descriptive error") {
    CHECK_THROWS_WITH(eigenvector(star(6), 1e-10, 2),
                      Catch::Matchers::ContainsSubstring("did not converge"));
  }

  SECTION("mass drains from a weaker component unless teleport is on") {
    // Triangle (spectral radius 2) plus a lone edge (radius 1).
    const Graph g = build_graph(
        std::vector<ODRecord>{{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {10, 11, 1}}, false, true);
    const CentralityResult plain = eigenvector(g);
    CHECK(plain.scores[3] < 1e-6);
    CHECK(plain.scores[4] < 1e-6);
    const CentralityResult mixed = eigenvector(g, 1e-10, 10000, true);
    CHECK(mixed.scores[3] > 1e-3);
  }
}
