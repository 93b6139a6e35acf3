#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "subcity/errors.hpp"
#include "subcity/graph.hpp"
#include "subcity/io.hpp"
#include "subcity/rng.hpp"

namespace subcity {

// Planted-partition generator: k blocks whose internal record probability
// exceeds the cross-block one, commuter counts >= 1, block centers on a
// ring so distance-to-center varies by block.
struct SynthSpec {
  std::uint32_t communities = 4;
  std::uint32_t nodes_per_community = 50;
  double p_in = 0.3;
  double p_out = 0.01;
  double count_mean = 2.0;  // mean commuter count per emitted record
  double center_easting = 350000.0;
  double center_northing = 6300000.0;
  double ring_radius = 20000.0;   // meters, block centers sit on this ring
  double coord_sigma = 2000.0;    // Gaussian scatter around the block center
  std::uint64_t seed = 0;
};

struct SynthOutput {
  std::vector<ODRecord> records;
  std::vector<NodeMeta> metas;                // one per node, ids 0..kn-1
  std::vector<std::uint32_t> planted_labels;  // indexed by node id
};

inline void validate(const SynthSpec& s) {
  if (s.communities < 1) throw input_error("synth: need at least one community");
  if (s.nodes_per_community < 1) throw input_error("synth: need at least one node per community");
  if (s.p_in < 0.0 || s.p_in > 1.0 || s.p_out < 0.0 || s.p_out > 1.0)
    throw input_error("synth: p_in and p_out must lie in [0, 1]");
  if (s.communities > 1 && s.p_in <= s.p_out)
    throw input_error("synth: planted structure requires p_in > p_out");
  if (s.count_mean < 1.0) throw input_error("synth: count mean must be >= 1");
  if (s.ring_radius < 0.0 || s.coord_sigma < 0.0)
    throw input_error("synth: geographic scales must be non-negative");
}

// Every ordered pair of distinct nodes draws from its own seeded stream, so
// the output is independent of evaluation order (and parallelizable).
inline SynthOutput generate(const SynthSpec& spec) {
  validate(spec);
  const std::uint64_t n_total =
      static_cast<std::uint64_t>(spec.communities) * spec.nodes_per_community;
  constexpr std::uint64_t kPairSalt = 0x70A1D5;
  constexpr std::uint64_t kCoordSalt = 0xC003D5;

  SynthOutput out;
  out.planted_labels.resize(n_total);
  out.metas.resize(n_total);
  for (std::uint64_t u = 0; u < n_total; ++u) {
    const std::uint32_t block = static_cast<std::uint32_t>(u / spec.nodes_per_community);
    out.planted_labels[u] = block;
    const double angle =
        2.0 * std::numbers::pi * static_cast<double>(block) / static_cast<double>(spec.communities);
    SplitMix64 rng(mix_seed(spec.seed, kCoordSalt, u));
    NodeMeta& meta = out.metas[u];
    meta.id = static_cast<NodeId>(u);
    meta.easting = spec.center_easting + spec.ring_radius * std::cos(angle) +
                   spec.coord_sigma * standard_normal(rng);
    meta.northing = spec.center_northing + spec.ring_radius * std::sin(angle) +
                    spec.coord_sigma * standard_normal(rng);
    meta.ref_community = std::to_string(block);
  }

  for (std::uint64_t u = 0; u < n_total; ++u) {
    for (std::uint64_t v = 0; v < n_total; ++v) {
      if (u == v) continue;
      const bool same = out.planted_labels[u] == out.planted_labels[v];
      const double p = same ? spec.p_in : spec.p_out;
      SplitMix64 rng(mix_seed(spec.seed, kPairSalt, u * n_total + v));
      if (rng.uniform01() >= p) continue;
      out.records.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v),
                             one_shifted_poisson(spec.count_mean - 1.0, rng)});
    }
  }
  return out;
}

}  // namespace subcity
