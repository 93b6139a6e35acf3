// subcity: build commuter mobility networks from origin-destination CSVs,
// detect communities, measure centrality and its geographic trend, and
// score community-pair segregation against a randomized null.
//
// Every subcommand is deterministic for a fixed --seed: identical
// invocations produce byte-identical files.

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "subcity/subcity.hpp"

namespace {

using namespace subcity;

struct GraphVariant {
  bool directed = false;
  bool weighted = true;
};

void add_variant_flags(CLI::App* cmd, GraphVariant& v) {
  cmd->add_flag("--directed,!--undirected", v.directed,
                "Treat edges as directed home->work arcs (default: undirected)");
  cmd->add_flag("--weighted,!--unweighted", v.weighted,
                "Use commuter counts as weights (default) or collapse to 1");
}

std::vector<NodeId> meta_ids(const std::vector<NodeMeta>& metas) {
  std::vector<NodeId> ids;
  ids.reserve(metas.size());
  for (const auto& m : metas) ids.push_back(m.id);
  return ids;
}

Graph load_graph(const std::string& edges_path, const std::string& nodes_path,
                 const GraphVariant& v, std::vector<ODRecord>* records_out = nullptr,
                 std::vector<NodeMeta>* metas_out = nullptr) {
  std::vector<ODRecord> records = read_edges(edges_path);
  std::vector<NodeMeta> metas;
  std::vector<NodeId> extra;
  if (!nodes_path.empty()) {
    metas = read_nodes(nodes_path);
    extra = meta_ids(metas);
  }
  Graph g = build_graph(records, v.directed, v.weighted, extra);
  if (records_out) *records_out = std::move(records);
  if (metas_out) *metas_out = std::move(metas);
  return g;
}

// Aligns a partition CSV to a graph. Dense community indices are assigned in
// first-occurrence order over ascending node id; names[] maps an index back
// to the label string from the file (so letters stay letters in reports).
struct NamedPartition {
  Partition partition;
  std::vector<std::string> names;
};

NamedPartition partition_with_names(const Graph& g, const LabeledNodes& ln) {
  std::map<NodeId, const std::string*> by_id;
  for (std::size_t i = 0; i < ln.ids.size(); ++i) by_id[ln.ids[i]] = &ln.labels[i];
  NamedPartition np;
  std::vector<std::uint32_t> assignment(g.node_count());
  std::map<std::string, std::uint32_t> dense;
  for (NodeIndex i = 0; i < g.node_count(); ++i) {
    auto it = by_id.find(g.node_id(i));
    if (it == by_id.end())
      throw input_error("node " + std::to_string(g.node_id(i)) + " has no community label");
    auto [pos, inserted] = dense.emplace(*it->second, static_cast<std::uint32_t>(dense.size()));
    if (inserted) np.names.push_back(*it->second);
    assignment[i] = pos->second;
  }
  np.partition = make_partition(g, std::move(assignment));
  return np;
}

std::vector<double> align_scores(const Graph& g, const NodeScores& s, const std::string& what) {
  std::map<NodeId, double> by_id;
  for (std::size_t i = 0; i < s.ids.size(); ++i) {
    if (!by_id.emplace(s.ids[i], s.values[i]).second)
      throw input_error(what + ": duplicate score for node " + std::to_string(s.ids[i]));
  }
  if (by_id.size() != g.node_count())
    throw input_error(what + ": score file covers " + std::to_string(by_id.size()) +
                      " nodes, graph has " + std::to_string(g.node_count()));
  std::vector<double> scores(g.node_count());
  for (NodeIndex i = 0; i < g.node_count(); ++i) {
    auto it = by_id.find(g.node_id(i));
    if (it == by_id.end())
      throw input_error(what + ": no score for node " + std::to_string(g.node_id(i)));
    scores[i] = it->second;
  }
  return scores;
}

void write_partition_csv(const Graph& g, const Partition& p, const std::string& path) {
  auto out = csv::open_output(path);
  out << "id,community\n";
  for (NodeIndex i = 0; i < g.node_count(); ++i)
    out << g.node_id(i) << ',' << p.assignment[i] << '\n';
}

// ---------------------------------------------------------------- convert

struct ConvertOpts {
  std::string nodes, out;
  int zone = 19;
  std::string hemisphere = "S";
};

void run_convert(const ConvertOpts& o) {
  const std::string hemi = csv::lower(o.hemisphere);
  if (hemi != "s" && hemi != "n")
    throw input_error("--hemisphere must be N or S (got '" + o.hemisphere + "')");
  const bool south = hemi == "s";
  std::vector<NodeMeta> metas = read_nodes(o.nodes);
  for (auto& meta : metas) {
    if (meta.geo) continue;  // already geographic; pass through
    if (!meta.easting || !meta.northing)
      throw input_error("node " + std::to_string(meta.id) +
                        " has neither easting/northing nor lat/lon");
    meta.geo = utm_to_geo(UtmCoord{*meta.easting, *meta.northing, o.zone, south});
  }
  write_nodes_with_geo(metas, o.out);
  std::cout << "converted=" << metas.size() << " zone=" << o.zone << (south ? "S" : "N") << "\n";
}

// ------------------------------------------------------------------ build

struct BuildOpts {
  std::string edges, nodes, out;
  GraphVariant variant;
};

void run_build(const BuildOpts& o) {
  const Graph g = load_graph(o.edges, o.nodes, o.variant);
  std::size_t loop_nodes = 0;
  double loop_weight = 0.0;
  for (NodeIndex i = 0; i < g.node_count(); ++i) {
    if (g.self_loop(i) > 0.0) {
      ++loop_nodes;
      loop_weight += g.self_loop(i);
    }
  }
  std::vector<std::pair<std::string, std::string>> rows = {
      {"nodes", std::to_string(g.node_count())},
      {"edges", std::to_string(g.edge_count())},
      {"total_weight", format_double(g.total_weight())},
      {"self_loop_nodes", std::to_string(loop_nodes)},
      {"self_loop_weight", format_double(loop_weight)},
      {"directed", g.directed() ? "true" : "false"},
      {"weighted", g.weighted() ? "true" : "false"},
  };
  if (!o.out.empty()) {
    auto out = csv::open_output(o.out);
    out << "metric,value\n";
    for (const auto& [k, v] : rows) out << k << ',' << v << '\n';
  }
  for (const auto& [k, v] : rows) std::cout << k << '=' << v << '\n';
}

// ----------------------------------------------------------------- detect

struct DetectOpts {
  std::string edges, nodes, out;
  GraphVariant variant;
  double resolution = 1.0;
  std::uint64_t seed = 0;
  std::uint32_t runs = 1;
  std::string order = "ascending";
};

void run_detect(const DetectOpts& o) {
  const Graph g = load_graph(o.edges, o.nodes, o.variant);
  const QualityParams q = QualityParams::from_resolution(o.resolution);
  NodeOrder order;
  if (o.order == "ascending") {
    order = NodeOrder::ascending;
  } else if (o.order == "shuffled") {
    order = NodeOrder::shuffled;
  } else {
    throw input_error("--order must be ascending or shuffled (got '" + o.order + "')");
  }

  Partition best;
  // A single run honors --order; multiple runs only differ under shuffling,
  // so they always shuffle, with per-run derived seeds. Best quality wins,
  // earliest run on ties.
  if (o.runs <= 1) {
    best = louvain(g, q, o.seed, order);
  } else {
    bool first = true;
    for (std::uint32_t run = 0; run < o.runs; ++run) {
      Partition p = louvain(g, q, mix_seed(o.seed, run), NodeOrder::shuffled);
      if (first || p.quality > best.quality) {
        best = std::move(p);
        first = false;
      }
    }
  }
  write_partition_csv(g, best, o.out);
  std::cout << "communities=" << best.community_count
            << " quality=" << format_double(best.quality) << "\n";
}

// ------------------------------------------------------------------ sweep

struct SweepOpts {
  std::string edges, nodes, out;
  GraphVariant variant;
  std::vector<double> resolutions;
  std::uint64_t seed = 0;
  std::uint32_t runs = 10;
};

void run_sweep(const SweepOpts& o) {
  const Graph g = load_graph(o.edges, o.nodes, o.variant);
  const SweepResult result = resolution_sweep(g, o.resolutions, o.seed, o.runs);
  auto out = csv::open_output(o.out);
  out << "resolution,communities,min,median,max,best_quality\n";
  for (const auto& row : result.rows) {
    out << format_double(row.resolution) << ',' << row.communities << ',' << row.min_communities
        << ',' << format_double(row.median_communities) << ',' << row.max_communities << ','
        << format_double(row.best_quality) << '\n';
  }
  out << "average," << format_double(result.mean_communities) << ",,,,\n";
  out << "std," << format_double(result.stddev_communities) << ",,,,\n";
}

// ---------------------------------------------------------------- compare

struct CompareOpts {
  std::string a, b, out, contingency;
};

struct DenseLabels {
  std::vector<std::uint32_t> labels;  // aligned to ascending node id
  std::vector<std::string> names;     // dense index -> original label
};

DenseLabels densify_sorted(const LabeledNodes& ln) {
  std::vector<std::size_t> order(ln.ids.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return ln.ids[x] < ln.ids[y]; });
  DenseLabels d;
  std::map<std::string, std::uint32_t> dense;
  for (const std::size_t i : order) {
    auto [pos, inserted] = dense.emplace(ln.labels[i], static_cast<std::uint32_t>(dense.size()));
    if (inserted) d.names.push_back(ln.labels[i]);
    d.labels.push_back(pos->second);
  }
  return d;
}

void run_compare(const CompareOpts& o) {
  const LabeledNodes la = read_partition_labels(o.a);
  const LabeledNodes lb = read_partition_labels(o.b);
  std::vector<NodeId> ids_a = la.ids, ids_b = lb.ids;
  std::sort(ids_a.begin(), ids_a.end());
  std::sort(ids_b.begin(), ids_b.end());
  if (ids_a != ids_b)
    throw input_error("compare: the two partitions cover different node sets");

  const DenseLabels da = densify_sorted(la);
  const DenseLabels db = densify_sorted(lb);
  const CompareResult r =
      compare_labels(da.labels, db.labels, static_cast<std::uint32_t>(da.names.size()),
                     static_cast<std::uint32_t>(db.names.size()));

  std::vector<std::pair<std::string, double>> metrics = {
      {"similarity_pct", r.similarity_pct}, {"nmi", r.nmi}, {"ari", r.ari}};
  if (!o.out.empty()) {
    auto out = csv::open_output(o.out);
    out << "metric,value\n";
    for (const auto& [k, v] : metrics) out << k << ',' << format_double(v) << '\n';
  }
  if (!o.contingency.empty()) {
    auto out = csv::open_output(o.contingency);
    out << "a_comm,b_comm,count\n";
    for (std::size_t i = 0; i < r.table.rows(); ++i)
      for (std::size_t j = 0; j < r.table.cols(); ++j)
        out << da.names[i] << ',' << db.names[j] << ',' << r.table.counts[i][j] << '\n';
  }
  for (const auto& [k, v] : metrics) std::cout << k << '=' << format_double(v) << '\n';
}

// -------------------------------------------------------------- centrality

struct CentralityOpts {
  std::string edges, nodes, out, partition, stats, boxplot;
  GraphVariant variant;
  std::string measure = "betweenness";
  std::string length = "unit";
  double tol = 1e-10;
  std::uint32_t max_iter = 10000;
  bool teleport = false;
  unsigned threads = 0;
};

void run_centrality(const CentralityOpts& o) {
  const Graph g = load_graph(o.edges, o.nodes, o.variant);
  CentralityResult result;
  if (o.measure == "betweenness") {
    EdgeLength len;
    if (o.length == "unit") {
      len = EdgeLength::unit;
    } else if (o.length == "inverse") {
      len = EdgeLength::inverse_weight;
    } else {
      throw input_error("--length must be unit or inverse (got '" + o.length + "')");
    }
    result = betweenness(g, len, o.threads);
    if (g.node_count() < 3) std::cerr << "warning: " << result.normalization << "\n";
  } else if (o.measure == "eigenvector") {
    result = eigenvector(g, o.tol, o.max_iter, o.teleport, o.threads == 0 ? 1 : o.threads);
    std::cout << "eigenvalue=" << format_double(result.eigenvalue)
              << " iterations=" << result.iterations << "\n";
  } else {
    throw input_error("--measure must be betweenness or eigenvector (got '" + o.measure + "')");
  }

  {
    auto out = csv::open_output(o.out);
    out << "id,score\n";
    for (NodeIndex i = 0; i < g.node_count(); ++i)
      out << g.node_id(i) << ',' << format_double(result.scores[i]) << '\n';
  }

  if (o.stats.empty() && o.boxplot.empty()) return;
  if (o.partition.empty())
    throw input_error("--stats/--boxplot require --partition");
  const NamedPartition np = partition_with_names(g, read_partition_labels(o.partition));
  const GroupStats stats = group_stats(result.scores, np.partition, g.node_ids());
  if (!o.stats.empty()) {
    auto out = csv::open_output(o.stats);
    out << "community,size,mean,median\n";
    for (const auto& cs : stats.communities)
      out << np.names[cs.community] << ',' << cs.size << ',' << format_double(cs.mean) << ','
          << format_double(cs.median) << '\n';
  }
  if (!o.boxplot.empty()) {
    auto out = csv::open_output(o.boxplot);
    out << "community,q1,median,q3,whisker_low,whisker_high,outliers\n";
    for (const auto& cs : stats.communities) {
      out << np.names[cs.community] << ',' << format_double(cs.q1) << ','
          << format_double(cs.median) << ',' << format_double(cs.q3) << ','
          << format_double(cs.whisker_low) << ',' << format_double(cs.whisker_high) << ',';
      for (std::size_t i = 0; i < cs.outliers.size(); ++i)
        out << (i ? ";" : "") << cs.outliers[i];
      out << '\n';
    }
  }
}

// --------------------------------------------------------------- geo-stats

struct GeoStatsOpts {
  std::string nodes, scores, out, matrix;
  bool spherical = false;
};

void run_geo_stats(const GeoStatsOpts& o) {
  const std::vector<NodeMeta> metas = read_nodes(o.nodes);
  const GeoTable table = distances_to_center(metas, o.spherical);
  std::cout << "center_lat=" << format_double(table.center.lat)
            << " center_lon=" << format_double(table.center.lon) << "\n";

  if (o.scores.empty()) {
    auto out = csv::open_output(o.out);
    out << "id,distance_km\n";
    std::vector<std::size_t> order(table.ids.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return table.ids[x] < table.ids[y]; });
    for (const std::size_t i : order)
      out << table.ids[i] << ',' << format_double(table.distance_km[i]) << '\n';
    return;
  }

  const NodeScores raw = read_scores(o.scores);
  std::map<NodeId, double> by_id;
  for (std::size_t i = 0; i < raw.ids.size(); ++i) {
    if (!by_id.emplace(raw.ids[i], raw.values[i]).second)
      throw input_error("duplicate score for node " + std::to_string(raw.ids[i]));
  }
  if (by_id.size() != table.ids.size())
    throw input_error("score file covers " + std::to_string(by_id.size()) +
                      " nodes, node file has " + std::to_string(table.ids.size()));
  std::vector<double> scores(table.ids.size());
  for (std::size_t i = 0; i < table.ids.size(); ++i) {
    auto it = by_id.find(table.ids[i]);
    if (it == by_id.end())
      throw input_error("no score for node " + std::to_string(table.ids[i]));
    scores[i] = it->second;
  }

  const DistanceCorrelation corr = centrality_vs_distance(scores, table.ids, table.distance_km);
  {
    auto out = csv::open_output(o.out);
    out << "id,distance_km,score\n";
    for (const auto& row : corr.rows)
      out << row.id << ',' << format_double(row.distance) << ',' << format_double(row.score)
          << '\n';
  }
  if (!corr.r) {
    // Scatter is already on disk; the undefined correlation is a numeric
    // failure of this invocation.
    throw numeric_error(corr.note);
  }
  std::cout << "pearson_r=" << format_double(*corr.r) << "\n";
  if (!o.matrix.empty()) {
    auto out = csv::open_output(o.matrix);
    out << ",distance_km,score\n";
    out << "distance_km,1," << format_double(*corr.r) << '\n';
    out << "score," << format_double(*corr.r) << ",1\n";
  }
}

// ------------------------------------------------------------- segregation

struct SegregationOpts {
  std::string edges, partition, out;
  std::string null_model = "analytic";
  std::uint32_t trials = 1000;
  std::uint64_t seed = 0;
  bool distinct_pairs = false;
};

void run_segregation(const SegregationOpts& o) {
  NullModel null_model;
  if (o.null_model == "analytic") {
    null_model = NullModel::analytic;
  } else if (o.null_model == "montecarlo") {
    null_model = NullModel::montecarlo;
  } else {
    throw input_error("--null must be analytic or montecarlo (got '" + o.null_model + "')");
  }
  const std::vector<ODRecord> records = read_edges(o.edges);
  // Flow tables only need a node universe; the directed weighted graph is
  // the canonical indexing of the records.
  const Graph g = build_graph(records, /*directed=*/true, /*weighted=*/true);
  const NamedPartition np = partition_with_names(g, read_partition_labels(o.partition));
  const SegregationTable t = segregation_analysis(
      records, g, np.partition, null_model, o.trials, o.seed,
      o.distinct_pairs ? FlowCount::distinct_pairs : FlowCount::records);

  auto out = csv::open_output(o.out);
  out << "source_comm,target_comm,count,joint_p,cond_p,expected_p,segregated\n";
  for (std::uint32_t x = 0; x < t.k; ++x)
    for (std::uint32_t y = 0; y < t.k; ++y)
      out << np.names[x] << ',' << np.names[y] << ',' << t.counts[x][y] << ','
          << format_double(t.joint[x][y]) << ',' << format_double(t.conditional[x][y]) << ','
          << format_double(t.expected[x][y]) << ','
          << (t.segregated[x][y] ? "true" : "false") << '\n';
  std::cout << "communities=" << t.k << " total=" << t.total << "\n";
}

// ------------------------------------------------------------------ synth

struct SynthOpts {
  SynthSpec spec;
  std::string out_edges, out_nodes, out_truth;
};

void run_synth(const SynthOpts& o) {
  const SynthOutput result = generate(o.spec);
  {
    auto out = csv::open_output(o.out_edges);
    out << "home_id,work_id,count\n";
    for (const auto& rec : result.records)
      out << rec.source << ',' << rec.target << ',' << rec.count << '\n';
  }
  {
    auto out = csv::open_output(o.out_nodes);
    out << "id,easting,northing,community\n";
    for (const auto& meta : result.metas)
      out << meta.id << ',' << format_double(*meta.easting) << ','
          << format_double(*meta.northing) << ',' << meta.ref_community << '\n';
  }
  {
    auto out = csv::open_output(o.out_truth);
    out << "id,community\n";
    for (std::size_t i = 0; i < result.planted_labels.size(); ++i)
      out << i << ',' << result.planted_labels[i] << '\n';
  }
  std::cout << "nodes=" << result.metas.size() << " records=" << result.records.size() << "\n";
}

// ----------------------------------------------------------------- export

struct ExportOpts {
  std::string edges, nodes, partition, out, betweenness, eigenvector;
  GraphVariant variant;
  std::string format = "geojson";
};

void run_export(const ExportOpts& o) {
  std::vector<NodeMeta> metas;
  const Graph g = load_graph(o.edges, o.nodes, o.variant, nullptr, &metas);
  const NamedPartition np = partition_with_names(g, read_partition_labels(o.partition));
  if (o.format == "geojson") {
    std::vector<double> bet, eig;
    if (!o.betweenness.empty())
      bet = align_scores(g, read_scores(o.betweenness), "--betweenness");
    if (!o.eigenvector.empty())
      eig = align_scores(g, read_scores(o.eigenvector), "--eigenvector");
    write_geojson(g, np.partition, metas, o.out, bet, eig);
  } else if (o.format == "dot") {
    write_dot(g, np.partition, o.out);
  } else {
    throw input_error("--format must be geojson or dot (got '" + o.format + "')");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"subcity: commuter mobility networks, communities, centrality, segregation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "subcity 1.0.0");

  ConvertOpts convert_opts;
  auto* convert = app.add_subcommand("convert", "Convert node UTM coordinates to lat/lon");
  convert->add_option("--nodes", convert_opts.nodes, "Node CSV (id,easting,northing[,community])")
      ->required();
  convert->add_option("--zone", convert_opts.zone, "UTM zone (default 19)");
  convert->add_option("--hemisphere", convert_opts.hemisphere, "N or S (default S)");
  convert->add_option("--out", convert_opts.out, "Output CSV (id,lat,lon,community)")->required();
  convert->callback([&] { run_convert(convert_opts); });

  BuildOpts build_opts;
  auto* build = app.add_subcommand("build", "Aggregate an edge list and report graph summary");
  build->add_option("--edges", build_opts.edges, "Edge CSV (home_id,work_id[,count])")->required();
  build->add_option("--nodes", build_opts.nodes, "Node CSV registering isolated nodes");
  add_variant_flags(build, build_opts.variant);
  build->add_option("--out", build_opts.out, "Summary CSV (metric,value)");
  build->callback([&] { run_build(build_opts); });

  DetectOpts detect_opts;
  auto* detect = app.add_subcommand("detect", "Louvain community detection");
  detect->add_option("--edges", detect_opts.edges, "Edge CSV")->required();
  detect->add_option("--nodes", detect_opts.nodes, "Node CSV registering isolated nodes");
  add_variant_flags(detect, detect_opts.variant);
  detect->add_option("--resolution", detect_opts.resolution,
                     "Resolution r > 0; larger r gives fewer, larger communities (default 1)");
  detect->add_option("--seed", detect_opts.seed, "Seed for shuffled node order (default 0)");
  detect->add_option("--runs", detect_opts.runs,
                     "Shuffled restarts; the best-quality partition is kept (default 1)");
  detect->add_option("--order", detect_opts.order, "ascending|shuffled (default ascending)");
  detect->add_option("--out", detect_opts.out, "Partition CSV (id,community)")->required();
  detect->callback([&] { run_detect(detect_opts); });

  SweepOpts sweep_opts;
  auto* sweep = app.add_subcommand("sweep", "Community counts across resolutions");
  sweep->add_option("--edges", sweep_opts.edges, "Edge CSV")->required();
  sweep->add_option("--nodes", sweep_opts.nodes, "Node CSV registering isolated nodes");
  add_variant_flags(sweep, sweep_opts.variant);
  sweep->add_option("--resolutions", sweep_opts.resolutions, "Comma-separated resolutions")
      ->required()
      ->delimiter(',');
  sweep->add_option("--seed", sweep_opts.seed, "Root seed (default 0)");
  sweep->add_option("--runs", sweep_opts.runs, "Shuffled runs per resolution (default 10)");
  sweep->add_option("--out", sweep_opts.out, "Sweep CSV")->required();
  sweep->callback([&] { run_sweep(sweep_opts); });

  CompareOpts compare_opts;
  auto* compare = app.add_subcommand("compare", "Similarity of two partitions");
  compare->add_option("--a", compare_opts.a, "First partition CSV (id,community)")->required();
  compare->add_option("--b", compare_opts.b, "Second partition CSV (id,community)")->required();
  compare->add_option("--out", compare_opts.out, "Metrics CSV (metric,value)");
  compare->add_option("--contingency", compare_opts.contingency,
                      "Contingency CSV (a_comm,b_comm,count)");
  compare->callback([&] { run_compare(compare_opts); });

  CentralityOpts centrality_opts;
  auto* centrality = app.add_subcommand("centrality", "Betweenness or eigenvector centrality");
  centrality->add_option("--edges", centrality_opts.edges, "Edge CSV")->required();
  centrality->add_option("--nodes", centrality_opts.nodes, "Node CSV registering isolated nodes");
  add_variant_flags(centrality, centrality_opts.variant);
  centrality->add_option("--measure", centrality_opts.measure, "betweenness|eigenvector")
      ->required();
  centrality->add_option("--length", centrality_opts.length,
                         "Betweenness edge length: unit|inverse (default unit)");
  centrality->add_option("--tol", centrality_opts.tol,
                         "Eigenvector convergence tolerance (default 1e-10)");
  centrality->add_option("--max-iter", centrality_opts.max_iter,
                         "Eigenvector iteration cap (default 10000)");
  centrality->add_option("--threads", centrality_opts.threads,
                         "Worker threads, 0 = auto; any value gives identical output");
  centrality->add_flag("--teleport", centrality_opts.teleport,
                       "Mix a uniform 0.15 restart into the eigenvector iteration");
  centrality->add_option("--partition", centrality_opts.partition,
                         "Partition CSV for --stats/--boxplot grouping");
  centrality->add_option("--out", centrality_opts.out, "Score CSV (id,score)")->required();
  centrality->add_option("--stats", centrality_opts.stats,
                         "Per-community CSV (community,size,mean,median)");
  centrality->add_option("--boxplot", centrality_opts.boxplot,
                         "Per-community box-plot CSV (quartiles, whiskers, outliers)");
  centrality->callback([&] { run_centrality(centrality_opts); });

  GeoStatsOpts geo_opts;
  auto* geo_stats = app.add_subcommand("geo-stats", "Distance to mean center, score correlation");
  geo_stats->add_option("--nodes", geo_opts.nodes, "Node CSV with lat/lon")->required();
  geo_stats->add_flag("--spherical", geo_opts.spherical,
                      "Use the spherical (3-D unit vector) mean center instead of degree means");
  geo_stats->add_option("--scores", geo_opts.scores, "Score CSV (id,score) to correlate");
  geo_stats->add_option("--out", geo_opts.out, "Distance CSV")->required();
  geo_stats->add_option("--matrix", geo_opts.matrix, "2x2 Pearson matrix CSV (needs --scores)");
  geo_stats->callback([&] { run_geo_stats(geo_opts); });

  SegregationOpts seg_opts;
  auto* segregation = app.add_subcommand("segregation", "Community-pair flow probabilities");
  segregation->add_option("--edges", seg_opts.edges, "Edge CSV")->required();
  segregation->add_option("--partition", seg_opts.partition, "Partition CSV (id,community)")
      ->required();
  segregation->add_option("--null", seg_opts.null_model, "analytic|montecarlo (default analytic)");
  segregation->add_option("--trials", seg_opts.trials, "Monte Carlo trials (default 1000)");
  segregation->add_option("--seed", seg_opts.seed, "Monte Carlo seed (default 0)");
  segregation->add_flag("--distinct-pairs", seg_opts.distinct_pairs,
                        "Count each distinct node pair once instead of summing commuter counts");
  segregation->add_option("--out", seg_opts.out, "Segregation CSV")->required();
  segregation->callback([&] { run_segregation(seg_opts); });

  SynthOpts synth_opts;
  auto* synth = app.add_subcommand("synth", "Generate a planted-partition city");
  synth->add_option("--k", synth_opts.spec.communities, "Planted communities (default 4)");
  synth->add_option("--n", synth_opts.spec.nodes_per_community, "Nodes per community (default 50)");
  synth->add_option("--p-in", synth_opts.spec.p_in, "Within-block record probability");
  synth->add_option("--p-out", synth_opts.spec.p_out, "Cross-block record probability");
  synth->add_option("--count-mean", synth_opts.spec.count_mean,
                    "Mean commuter count per record, >= 1 (default 2)");
  synth->add_option("--ring-radius", synth_opts.spec.ring_radius,
                    "Radius of the ring of block centers, meters (default 20000)");
  synth->add_option("--sigma", synth_opts.spec.coord_sigma,
                    "Gaussian scatter around block centers, meters (default 2000)");
  synth->add_option("--seed", synth_opts.spec.seed, "Generator seed (default 0)");
  synth->add_option("--out-edges", synth_opts.out_edges, "Edge CSV (home_id,work_id,count)")
      ->required();
  synth->add_option("--out-nodes", synth_opts.out_nodes, "Node CSV (id,easting,northing,community)")
      ->required();
  synth->add_option("--out-truth", synth_opts.out_truth, "Planted partition CSV (id,community)")
      ->required();
  synth->callback([&] { run_synth(synth_opts); });

  ExportOpts export_opts;
  auto* export_cmd = app.add_subcommand("export", "GeoJSON or DOT export of a partitioned graph");
  export_cmd->add_option("--edges", export_opts.edges, "Edge CSV")->required();
  export_cmd->add_option("--nodes", export_opts.nodes, "Node CSV (lat/lon required for geojson)")
      ->required();
  export_cmd->add_option("--partition", export_opts.partition, "Partition CSV")->required();
  add_variant_flags(export_cmd, export_opts.variant);
  export_cmd->add_option("--format", export_opts.format, "geojson|dot (default geojson)");
  export_cmd->add_option("--betweenness", export_opts.betweenness,
                         "Score CSV added as a GeoJSON property");
  export_cmd->add_option("--eigenvector", export_opts.eigenvector,
                         "Score CSV added as a GeoJSON property");
  export_cmd->add_option("--out", export_opts.out, "Output file")->required();
  export_cmd->callback([&] { run_export(export_opts); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    return 2;
  } catch (const input_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const numeric_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
