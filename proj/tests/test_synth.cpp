#include <cmath>
#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "subcity/compare.hpp"
#include "subcity/graph.hpp"
#include "subcity/louvain.hpp"
#include "subcity/synth.hpp"

using namespace subcity;

TEST_CASE("synthetic output is deterministic for identical settings") {
  SynthSpec spec;
  spec.communities = 3;
  spec.nodes_per_community = 12;
  spec.seed = 77;
  const SynthOutput a = generate(spec);
  const SynthOutput b = generate(spec);

  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].source == b.records[i].source);
    CHECK(a.records[i].target == b.records[i].target);
    CHECK(a.records[i].count == b.records[i].count);
  }
  REQUIRE(a.metas.size() == b.metas.size());
  for (std::size_t i = 0; i < a.metas.size(); ++i) {
    CHECK(a.metas[i].id == b.metas[i].id);
    CHECK(a.metas[i].easting == b.metas[i].easting);
    CHECK(a.metas[i].northing == b.metas[i].northing);
    CHECK(a.metas[i].ref_community == b.metas[i].ref_community);
  }
  CHECK(a.planted_labels == b.planted_labels);

  SynthSpec other = spec;
  other.seed = 78;
  const SynthOutput c = generate(other);
  auto triples = [](const SynthOutput& o) {
    std::vector<std::vector<std::int64_t>> t;
    for (const auto& rec : o.records) t.push_back({rec.source, rec.target, rec.count});
    return t;
  };
  CHECK(triples(a) != triples(c));  // different draw, same shape
  CHECK(c.metas.size() == a.metas.size());
}

TEST_CASE("node bookkeeping matches the requested layout") {
  SynthSpec spec;
  spec.communities = 4;
  spec.nodes_per_community = 7;
  spec.seed = 5;
  const SynthOutput out = generate(spec);
  REQUIRE(out.metas.size() == 28);
  REQUIRE(out.planted_labels.size() == 28);
  std::vector<int> block_sizes(4, 0);
  for (std::size_t u = 0; u < out.metas.size(); ++u) {
    CHECK(out.metas[u].id == static_cast<NodeId>(u));
    CHECK(out.planted_labels[u] == static_cast<std::uint32_t>(u / 7));
    CHECK(out.metas[u].ref_community == std::to_string(out.planted_labels[u]));
    ++block_sizes[out.planted_labels[u]];
  }
  for (const int s : block_sizes) CHECK(s == 7);
}

TEST_CASE("zero cross probability isolates the blocks") {
  SynthSpec spec;
  spec.communities = 3;
  spec.nodes_per_community = 10;
  spec.p_in = 0.5;
  spec.p_out = 0.0;
  spec.seed = 9;
  const SynthOutput out = generate(spec);
  REQUIRE_FALSE(out.records.empty());
  for (const auto& rec : out.records)
    CHECK(out.planted_labels[static_cast<std::size_t>(rec.source)] ==
          out.planted_labels[static_cast<std::size_t>(rec.target)]);
}

TEST_CASE("commuter counts are positive and honor the mean floor") {
  SynthSpec spec;
  spec.communities = 2;
  spec.nodes_per_community = 15;
  spec.count_mean = 1.0;  // degenerate: every record is exactly one commuter
  spec.seed = 3;
  const SynthOutput unit = generate(spec);
  REQUIRE_FALSE(unit.records.empty());
  for (const auto& rec : unit.records) CHECK(rec.count == 1);

  spec.count_mean = 4.0;
  const SynthOutput heavier = generate(spec);
  double mean = 0.0;
  for (const auto& rec : heavier.records) {
    CHECK(rec.count >= 1);
    mean += static_cast<double>(rec.count);
  }
  mean /= static_cast<double>(heavier.records.size());
  CHECK(mean > 2.0);  // loose: shifted Poisson with mean 4
  CHECK(mean < 6.0);
}

TEST_CASE("count mean does not disturb which pairs appear") {
  SynthSpec spec;
  spec.communities = 2;
  spec.nodes_per_community = 10;
  spec.seed = 21;
  SynthSpec fat = spec;
  fat.count_mean = 6.0;
  const SynthOutput a = generate(spec);
  const SynthOutput b = generate(fat);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].source == b.records[i].source);
    CHECK(a.records[i].target == b.records[i].target);
  }
}

TEST_CASE("record rates track the planted probabilities") {
  const SynthSpec spec;  // defaults: 4 x 50, p_in 0.3, p_out 0.01, seed 0
  const SynthOutput out = generate(spec);
  std::int64_t intra = 0, cross = 0;
  for (const auto& rec : out.records) {
    if (out.planted_labels[static_cast<std::size_t>(rec.source)] ==
        out.planted_labels[static_cast<std::size_t>(rec.target)])
      ++intra;
    else
      ++cross;
  }
  // Ordered intra pairs: 4 * 50 * 49 = 9800; cross pairs: 200 * 150 = 30000.
  const double intra_mean = 9800.0 * 0.3;
  const double intra_sd = std::sqrt(9800.0 * 0.3 * 0.7);
  const double cross_mean = 30000.0 * 0.01;
  const double cross_sd = std::sqrt(30000.0 * 0.01 * 0.99);
  CHECK(std::abs(static_cast<double>(intra) - intra_mean) <= 3.0 * intra_sd);
  CHECK(std::abs(static_cast<double>(cross) - cross_mean) <= 3.0 * cross_sd);
}

TEST_CASE("planted communities are recoverable") {
  int recovered = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SynthSpec spec;
    spec.seed = seed;
    const SynthOutput out = generate(spec);
    std::vector<NodeId> all_nodes;
    for (const auto& meta : out.metas) all_nodes.push_back(meta.id);
    const Graph g = build_graph(out.records, false, true, all_nodes);
    const Partition found = louvain(g, QualityParams{}, seed);
    const CompareResult match = compare_labels(found.assignment, out.planted_labels,
                                               found.community_count, spec.communities);
    if (match.nmi >= 0.95) ++recovered;
  }
  CHECK(recovered >= 9);
}

TEST_CASE("block centers sit apart on the ring") {
  const SynthSpec spec;  // ring radius 20 km, scatter sigma 2 km
  const SynthOutput out = generate(spec);
  std::vector<double> east(spec.communities, 0.0), north(spec.communities, 0.0);
  for (std::size_t u = 0; u < out.metas.size(); ++u) {
    REQUIRE(out.metas[u].easting.has_value());
    east[out.planted_labels[u]] += *out.metas[u].easting;
    north[out.planted_labels[u]] += *out.metas[u].northing;
  }
  for (std::uint32_t b = 0; b < spec.communities; ++b) {
    east[b] /= spec.nodes_per_community;
    north[b] /= spec.nodes_per_community;
    const double r = std::hypot(east[b] - spec.center_easting, north[b] - spec.center_northing);
    CHECK(std::abs(r - spec.ring_radius) < 1500.0);  // 3 sigma of the block mean is ~850 m
  }
  for (std::uint32_t a = 0; a < spec.communities; ++a)
    for (std::uint32_t b = a + 1; b < spec.communities; ++b)
      CHECK(std::hypot(east[a] - east[b], north[a] - north[b]) > 10000.0);
}

TEST_CASE("spec validation") {
  SynthSpec ok;
  CHECK_NOTHROW(validate(ok));

  SynthSpec one_block;
  one_block.communities = 1;
  one_block.p_in = 0.0;  // no structure needed with a single block
  one_block.p_out = 0.5;
  CHECK_NOTHROW(validate(one_block));

  SynthSpec bad = ok;
  bad.communities = 0;
  CHECK_THROWS_AS(validate(bad), input_error);
  bad = ok;
  bad.nodes_per_community = 0;
  CHECK_THROWS_AS(validate(bad), input_error);
  bad = ok;
  bad.p_in = 1.2;
  CHECK_THROWS_AS(validate(bad), input_error);
  bad = ok;
  bad.p_out = -0.1;
  CHECK_THROWS_AS(validate(bad), input_error);
  bad = ok;
  bad.p_in = 0.01;
  bad.p_out = 0.3;
  CHECK_THROWS_AS(validate(bad), input_error);
  bad = ok;
  bad.p_in = bad.p_out = 0.2;
  CHECK_THROWS_AS(validate(bad), input_error);
  bad = ok;
  bad.count_mean = 0.5;
  CHECK_THROWS_AS(validate(bad), input_error);
  bad = ok;
  bad.coord_sigma = -1.0;
  CHECK_THROWS_AS(validate(bad), input_error);
}
