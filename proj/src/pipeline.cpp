#include "circtrade/pipeline.hpp"

#include "circtrade/error.hpp"
#include "circtrade/projection.hpp"
#include "circtrade/rng.hpp"

#include <omp.h>

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace circtrade {

namespace {

template <class F>
auto in_stage(Stage stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

std::string fmt_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::config: return "config";
    case Stage::ingest: return "ingest";
    case Stage::graph: return "graph";
    case Stage::walk: return "walk";
    case Stage::embed: return "embed";
    case Stage::cluster: return "cluster";
    case Stage::detect: return "detect";
    case Stage::output: return "output";
    case Stage::eval: return "eval";
    case Stage::synth: return "synth";
  }
  return "unknown";
}

int exit_code(Stage stage) {
  switch (stage) {
    case Stage::config: return 2;
    case Stage::ingest: return 10;
    case Stage::graph: return 11;
    case Stage::walk: return 12;
    case Stage::embed: return 13;
    case Stage::cluster: return 14;
    case Stage::detect: return 15;
    case Stage::output: return 16;
    case Stage::eval: return 17;
    case Stage::synth: return 18;
  }
  return 1;
}

void PipelineConfig::propagate() {
  walk.seed = derive_seed(seed, "walk");
  embed.seed = derive_seed(seed, "embed");
  embed.threads = threads;
  embed.deterministic = deterministic;
}

void PipelineConfig::validate() const {
  in_stage(Stage::config, [&] {
    if (input.empty()) throw ConfigError("input path is empty");
    if (out_dir.empty()) throw ConfigError("output directory is empty");
    if (threads < 1) throw ConfigError("threads must be at least 1");
    walk.validate();
    embed.validate();
    dbscan.validate();
    cycles.validate();
  });
}

std::string PipelineConfig::to_config_text() const {
  std::ostringstream out;
  out << "input = " << input.string() << '\n'
      << "out-dir = " << out_dir.string() << '\n'
      << "scale = " << to_string(scale) << '\n'
      << "p = " << fmt_double(walk.p) << '\n'
      << "q = " << fmt_double(walk.q) << '\n'
      << "walk-length = " << walk.walk_length << '\n'
      << "walks-per-node = " << walk.walks_per_node << '\n'
      << "dims = " << embed.dimensions << '\n'
      << "window = " << embed.window << '\n'
      << "negatives = " << embed.negatives << '\n'
      << "epochs = " << embed.epochs << '\n'
      << "lr = " << fmt_double(embed.learning_rate) << '\n'
      << "eps = " << fmt_double(dbscan.eps) << '\n'
      << "min-pts = " << dbscan.min_pts << '\n'
      << "max-cycle-len = " << cycles.max_len << '\n'
      << "cycle-window-days = " << fmt_double(static_cast<double>(cycles.window) / 1440.0) << '\n'
      << "tolerance = " << fmt_double(cycles.tolerance) << '\n'
      << "seed = " << seed << '\n'
      << "threads = " << threads << '\n'
      << "deterministic = " << (deterministic ? "true" : "false") << '\n';
  return out.str();
}

PipelineResult run_pipeline(PipelineConfig cfg) {
  cfg.propagate();
  cfg.validate();
  omp_set_num_threads(cfg.threads);

  PipelineResult r;
  r.table = in_stage(Stage::ingest, [&] { return parse_transactions(cfg.input); });
  in_stage(Stage::graph, [&] {
    r.graph = build_sales_flow_graph(r.table.registry, r.table.transactions);
    r.weighted = project_to_weighted(r.graph, cfg.scale);
  });
  r.corpus = in_stage(Stage::walk, [&] { return generate_walks(r.weighted, cfg.walk); });
  r.embedding = in_stage(Stage::embed, [&] { return train(r.corpus, r.weighted.node_count(), cfg.embed); });
  in_stage(Stage::cluster, [&] {
    r.clusters = dbscan(r.embedding.input, cfg.dbscan);
    r.projection = r.embedding.dims() >= 2 ? project_2d(r.embedding.input) : DenseMatrix(r.embedding.rows(), 2);
  });
  in_stage(Stage::detect, [&] {
    r.communities = extract_communities(r.clusters, r.graph);
    r.cycles = detect_cycles(r.communities, cfg.cycles);
  });

  in_stage(Stage::output, [&] {
    const auto& dir = cfg.out_dir;
    std::filesystem::create_directories(dir);
    write_dealers(dir / "dealers.csv", r.table.registry);
    write_embeddings(dir / "embeddings.csv", r.embedding.input);
    write_clusters(dir / "clusters.csv", r.clusters);
    write_projection(dir / "projection.csv", r.projection, r.clusters);
    write_cycles(dir / "cycles.jsonl", r.cycles);
    for (const char* name : {"dealers.csv", "embeddings.csv", "clusters.csv", "projection.csv", "cycles.jsonl"})
      r.artifact_hashes[name] = sha256_file(dir / name);

    {
      std::ofstream conf(dir / "run.conf");
      conf << cfg.to_config_text();
      if (!conf) throw IoError("cannot write run.conf");
    }

    std::size_t noise = 0, flagged = 0;
    for (int l : r.clusters.labels) noise += l == ClusterAssignment::noise;
    for (const auto& c : r.cycles.cycles) flagged += c.flagged;

    nlohmann::ordered_json m;
    nlohmann::ordered_json params;
    std::istringstream lines(cfg.to_config_text());
    for (std::string line; std::getline(lines, line);) {
      const auto eq = line.find(" = ");
      params[line.substr(0, eq)] = line.substr(eq + 3);
    }
    m["parameters"] = params;
    m["seed"] = cfg.seed;
    m["stage_seeds"] = {{"walk", cfg.walk.seed}, {"embed", cfg.embed.seed}};
    m["embedding_dimensions"] = r.embedding.dims();
    m["counts"] = {{"dealers", r.table.registry.size()},
                   {"transactions", r.table.transactions.size()},
                   {"undirected_edges", r.weighted.edge_count()},
                   {"walks", r.corpus.walks.size()},
                   {"clusters", r.clusters.cluster_count},
                   {"noise", noise},
                   {"cycles", r.cycles.cycles.size()},
                   {"flagged_cycles", flagged},
                   {"cycles_truncated", r.cycles.truncated}};
    m["artifacts"] = r.artifact_hashes;
    std::ofstream out(dir / "manifest.json");
    out << m.dump(2) << '\n';
    if (!out) throw IoError("cannot write manifest.json");
  });
  return r;
}

EvalScores evaluate(const ClusterAssignment& predicted, const GroundTruth& truth) {
  const std::size_t n = predicted.labels.size();
  if (truth.ring_membership.size() != n)
    throw LengthMismatch("ground truth covers " + std::to_string(truth.ring_membership.size()) +
                         " dealers, predictions cover " + std::to_string(n));
  const auto pred = noise_as_singletons(predicted.labels);
  std::vector<int> truth_labels(n);
  std::vector<int> pred_ring, truth_ring;
  int fresh = static_cast<int>(truth.ring_count());
  for (std::size_t i = 0; i < n; ++i) {
    if (truth.ring_membership[i]) {
      truth_labels[i] = *truth.ring_membership[i];
      pred_ring.push_back(pred[i]);
      truth_ring.push_back(truth_labels[i]);
    } else {
      truth_labels[i] = fresh++;
    }
  }

  EvalScores s;
  s.ari = adjusted_rand_index(pred, truth_labels);
  s.nmi = normalized_mutual_information(pred, truth_labels);
  s.ari_ring_members = adjusted_rand_index(pred_ring, truth_ring);

  std::vector<std::vector<DealerId>> communities(static_cast<std::size_t>(predicted.cluster_count));
  for (std::size_t i = 0; i < n; ++i)
    if (predicted.labels[i] >= 0) communities[static_cast<std::size_t>(predicted.labels[i])].push_back(static_cast<DealerId>(i));
  std::erase_if(communities, [](const auto& c) { return c.empty(); });
  const auto rr = ring_recovery(communities, truth.rings());
  s.ring_precision = rr.precision;
  s.ring_recall = rr.recall;
  return s;
}

EvalScores run_eval(const std::filesystem::path& pred_dir, const std::filesystem::path& truth_file) {
  return in_stage(Stage::eval, [&] {
    auto predicted = read_clusters(pred_dir / "clusters.csv");
    const auto names = read_dealers(pred_dir / "dealers.csv");
    if (names.size() != predicted.labels.size()) throw LengthMismatch("dealers.csv and clusters.csv differ in length");
    const auto gt = read_ground_truth(truth_file);

    // Ground truth re-indexed to prediction order; truth dealers absent from
    // the predictions are appended as noise.
    std::unordered_map<std::string, std::size_t> pred_index;
    for (std::size_t i = 0; i < names.size(); ++i) pred_index.emplace(names[i], i);
    GroundTruth truth;
    truth.ring_membership.assign(names.size(), std::nullopt);
    for (std::size_t t = 0; t < gt.dealers.size(); ++t) {
      auto it = pred_index.find(gt.dealers[t]);
      if (it == pred_index.end()) {
        predicted.labels.push_back(ClusterAssignment::noise);
        truth.ring_membership.push_back(gt.truth.ring_membership[t]);
      } else {
        truth.ring_membership[it->second] = gt.truth.ring_membership[t];
      }
    }
    const auto scores = evaluate(predicted, truth);

    nlohmann::ordered_json j;
    j["ari"] = scores.ari;
    j["nmi"] = scores.nmi;
    j["ari_ring_members"] = scores.ari_ring_members;
    j["ring_precision"] = scores.ring_precision;
    j["ring_recall"] = scores.ring_recall;
    std::ofstream out(pred_dir / "eval.json");
    out << j.dump(2) << '\n';
    if (!out) throw IoError("cannot write eval.json");
    return scores;
  });
}

}  // namespace circtrade
