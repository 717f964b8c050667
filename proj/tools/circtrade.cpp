// circtrade: circular-trading community detection over sales invoices.
//
// Every flag lives on the top-level app so it can be given before or after
// the subcommand and read from a flat `key = value` file via --config.

#include "circtrade/artifacts.hpp"
#include "circtrade/error.hpp"
#include "circtrade/pipeline.hpp"
#include "circtrade/projection.hpp"
#include "circtrade/synth.hpp"

#include <omp.h>

#include "CLI11.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>

namespace ct = circtrade;
namespace fs = std::filesystem;

namespace {

struct Options {
  ct::PipelineConfig pipeline;
  std::string scale = "log1p";
  double cycle_window_days = 30.0;
  fs::path clusters, truth, pred_dir;
  ct::ScenarioConfig scenario;
};

template <class F>
void stage(ct::Stage s, F&& f) {
  try {
    f();
  } catch (const ct::StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw ct::StageError(s, e.what());
  }
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ct::StageError(ct::Stage::config, what);
}

// Resolves derived fields and checks every stage config; runs before any output is touched.
void finalize(Options& o) {
  stage(ct::Stage::config, [&] {
    o.pipeline.scale = ct::parse_weight_scale(o.scale);
    if (!(std::isfinite(o.cycle_window_days) && o.cycle_window_days > 0))
      throw ct::ConfigError("cycle window must be positive");
    o.pipeline.cycles.window = static_cast<ct::Minutes>(std::llround(o.cycle_window_days * 1440.0));
    o.pipeline.propagate();
    o.pipeline.walk.validate();
    o.pipeline.embed.validate();
    o.pipeline.dbscan.validate();
    o.pipeline.cycles.validate();
    if (o.pipeline.threads < 1) throw ct::ConfigError("threads must be at least 1");
  });
  omp_set_num_threads(o.pipeline.threads);
}

void need_input(const Options& o) { require(!o.pipeline.input.empty(), "--input is required"); }
void need_out_dir(const Options& o) { require(!o.pipeline.out_dir.empty(), "--out-dir is required"); }

void make_out_dir(const Options& o) {
  stage(ct::Stage::output, [&] { fs::create_directories(o.pipeline.out_dir); });
}

void cmd_synth(Options& o) {
  need_out_dir(o);
  o.scenario.seed = o.pipeline.seed;
  stage(ct::Stage::config, [&] { o.scenario.validate(); });
  ct::Scenario sc;
  stage(ct::Stage::synth, [&] { sc = ct::generate_scenario(o.scenario); });
  make_out_dir(o);
  stage(ct::Stage::output, [&] {
    ct::write_transactions(o.pipeline.out_dir / "transactions.csv", sc.table);
    ct::write_ground_truth(o.pipeline.out_dir / "ground_truth.json", sc.truth, sc.table.registry);
  });
  std::printf("dealers %zu\ntransactions %zu\nrings %zu\nplanted_cycles %zu\n", sc.table.registry.size(),
              sc.table.transactions.size(), sc.truth.ring_count(), sc.truth.planted_cycles.size());
}

void cmd_ingest(Options& o) {
  need_input(o);
  need_out_dir(o);
  ct::TransactionTable table;
  stage(ct::Stage::ingest, [&] { table = ct::parse_transactions(o.pipeline.input); });
  make_out_dir(o);
  stage(ct::Stage::output, [&] {
    ct::write_transactions(o.pipeline.out_dir / "transactions.csv", table);
    ct::write_dealers(o.pipeline.out_dir / "dealers.csv", table.registry);
  });
  std::printf("dealers %zu\ntransactions %zu\n", table.registry.size(), table.transactions.size());
}

void cmd_graph(Options& o) {
  need_input(o);
  need_out_dir(o);
  ct::WeightedGraph g;
  stage(ct::Stage::ingest, [&] {
    const auto table = ct::parse_transactions(o.pipeline.input);
    g = ct::project_to_weighted(ct::build_sales_flow_graph(table.registry, table.transactions), o.pipeline.scale);
  });
  make_out_dir(o);
  stage(ct::Stage::output, [&] { ct::write_edge_list(o.pipeline.out_dir / "graph.txt", g); });
  const auto s = ct::degree_stats(g);
  std::printf("nodes %zu\nedges %zu\nmin_degree %zu\nmean_degree %.6f\nmax_degree %zu\ntotal_weight %.6f\n", s.nodes,
              s.edges, s.min_degree, s.mean_degree, s.max_degree, s.total_weight);
}

void cmd_walk(Options& o) {
  need_input(o);
  need_out_dir(o);
  ct::WeightedGraph g;
  ct::WalkCorpus corpus;
  stage(ct::Stage::graph, [&] { g = ct::read_edge_list(o.pipeline.input); });
  stage(ct::Stage::walk, [&] { corpus = ct::generate_walks(g, o.pipeline.walk); });
  make_out_dir(o);
  stage(ct::Stage::output, [&] { ct::write_walks(o.pipeline.out_dir / "walks.txt", corpus, g.node_count()); });
  std::printf("walks %zu\n", corpus.walks.size());
}

void cmd_embed(Options& o) {
  need_input(o);
  need_out_dir(o);
  ct::WalkFile wf;
  ct::EmbeddingMatrix emb;
  stage(ct::Stage::walk, [&] { wf = ct::read_walks(o.pipeline.input); });
  stage(ct::Stage::embed, [&] { emb = ct::train(wf.corpus, wf.node_count, o.pipeline.embed); });
  make_out_dir(o);
  stage(ct::Stage::output, [&] { ct::write_embeddings(o.pipeline.out_dir / "embeddings.csv", emb.input); });
  std::printf("nodes %zu\ndimensions %zu\n", emb.rows(), emb.dims());
}

void cmd_cluster(Options& o) {
  need_input(o);
  need_out_dir(o);
  ct::DenseMatrix points;
  ct::ClusterAssignment a;
  ct::DenseMatrix coords;
  stage(ct::Stage::embed, [&] { points = ct::read_embeddings(o.pipeline.input); });
  stage(ct::Stage::cluster, [&] {
    a = ct::dbscan(points, o.pipeline.dbscan);
    coords = points.cols() >= 2 ? ct::project_2d(points) : ct::DenseMatrix(points.rows(), 2);
  });
  make_out_dir(o);
  stage(ct::Stage::output, [&] {
    ct::write_clusters(o.pipeline.out_dir / "clusters.csv", a);
    ct::write_projection(o.pipeline.out_dir / "projection.csv", coords, a);
  });
  std::size_t noise = 0;
  for (int l : a.labels) noise += l == ct::ClusterAssignment::noise;
  std::printf("clusters %d\nnoise %zu\n", a.cluster_count, noise);
}

void cmd_detect(Options& o) {
  need_input(o);
  need_out_dir(o);
  require(!o.clusters.empty(), "--clusters is required");
  ct::TransactionTable table;
  ct::ClusterAssignment a;
  ct::CycleReport report;
  stage(ct::Stage::ingest, [&] { table = ct::parse_transactions(o.pipeline.input); });
  stage(ct::Stage::cluster, [&] { a = ct::read_clusters(o.clusters); });
  stage(ct::Stage::detect, [&] {
    const auto g = ct::build_sales_flow_graph(table.registry, table.transactions);
    report = ct::detect_cycles(ct::extract_communities(a, g), o.pipeline.cycles);
  });
  make_out_dir(o);
  stage(ct::Stage::output, [&] { ct::write_cycles(o.pipeline.out_dir / "cycles.jsonl", report); });
  std::size_t flagged = 0;
  for (const auto& c : report.cycles) flagged += c.flagged;
  std::printf("cycles %zu\nflagged %zu\ntruncated %s\n", report.cycles.size(), flagged,
              report.truncated ? "true" : "false");
}

void cmd_eval(Options& o) {
  require(!o.pred_dir.empty(), "--pred-dir is required");
  require(!o.truth.empty(), "--truth is required");
  const auto s = ct::run_eval(o.pred_dir, o.truth);
  std::printf("ari %.6f\nnmi %.6f\nari_ring_members %.6f\nring_precision %.6f\nring_recall %.6f\n", s.ari, s.nmi,
              s.ari_ring_members, s.ring_precision, s.ring_recall);
}

void cmd_pipeline(Options& o) {
  const auto r = ct::run_pipeline(o.pipeline);
  std::size_t noise = 0, flagged = 0;
  for (int l : r.clusters.labels) noise += l == ct::ClusterAssignment::noise;
  for (const auto& c : r.cycles.cycles) flagged += c.flagged;
  std::printf("dealers %zu\ntransactions %zu\nclusters %d\nnoise %zu\ncycles %zu\nflagged %zu\n",
              r.table.registry.size(), r.table.transactions.size(), r.clusters.cluster_count, noise,
              r.cycles.cycles.size(), flagged);
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  auto& pc = o.pipeline;
  CLI::App app{"Detect circular-trading communities in sales transaction data"};
  app.set_config("--config", "", "Flat key = value file; command-line flags override it");
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--input", pc.input, "Input file for the chosen stage");
  app.add_option("--out-dir", pc.out_dir, "Directory for output artifacts");
  app.add_option("--p", pc.walk.p, "Return parameter")->capture_default_str();
  app.add_option("--q", pc.walk.q, "In-out parameter")->capture_default_str();
  app.add_option("--walk-length", pc.walk.walk_length, "Nodes per walk")->capture_default_str();
  app.add_option("--walks-per-node", pc.walk.walks_per_node, "Walks started at each node")->capture_default_str();
  app.add_option("--dims", pc.embed.dimensions, "Embedding dimensions (0: floor(sqrt(nodes)))")->capture_default_str();
  app.add_option("--window", pc.embed.window, "Skip-gram context radius")->capture_default_str();
  app.add_option("--negatives", pc.embed.negatives, "Negative samples per positive pair")->capture_default_str();
  app.add_option("--epochs", pc.embed.epochs, "Training epochs")->capture_default_str();
  app.add_option("--lr", pc.embed.learning_rate, "Initial learning rate")->capture_default_str();
  app.add_option("--eps", pc.dbscan.eps, "DBSCAN cosine-distance radius")->capture_default_str();
  app.add_option("--min-pts", pc.dbscan.min_pts, "DBSCAN minimum neighbors, self included")->capture_default_str();
  app.add_option("--scale", o.scale, "Edge weight scale")->check(CLI::IsMember({"linear", "log1p"}))->capture_default_str();
  app.add_option("--max-cycle-len", pc.cycles.max_len, "Longest cycle to enumerate")->capture_default_str();
  app.add_option("--cycle-window-days", o.cycle_window_days, "Time window for a cycle's transactions")->capture_default_str();
  app.add_option("--tolerance", pc.cycles.tolerance, "Maximum relative amount spread of a flagged cycle")->capture_default_str();
  app.add_option("--seed", pc.seed, "Global seed")->capture_default_str();
  app.add_option("--threads", pc.threads, "Worker threads")->capture_default_str();
  app.add_flag("--deterministic", pc.deterministic, "Single-threaded, bit-reproducible embedding");
  app.add_option("--clusters", o.clusters, "clusters.csv for the detect stage");
  app.add_option("--truth", o.truth, "ground_truth.json for the eval stage");
  app.add_option("--pred-dir", o.pred_dir, "Directory holding clusters.csv and dealers.csv for eval");

  auto& sc = o.scenario;
  app.add_option("--dealers", sc.n_dealers, "synth: dealer count")->capture_default_str();
  app.add_option("--background-txs", sc.n_background_txs, "synth: genuine transactions")->capture_default_str();
  app.add_option("--rings", sc.n_rings, "synth: planted rings")->capture_default_str();
  app.add_option("--ring-min", sc.ring_size_min, "synth: smallest ring")->capture_default_str();
  app.add_option("--ring-max", sc.ring_size_max, "synth: largest ring")->capture_default_str();
  app.add_option("--fake-txs", sc.fake_txs_per_ring, "synth: fake transactions per ring")->capture_default_str();
  app.add_option("--jitter", sc.fake_amount_jitter, "synth: relative amount jitter of fake cycles")->capture_default_str();
  app.add_option("--tax-rate", sc.tax_rate, "synth: tax rate")->capture_default_str();
  app.add_option("--horizon-days", sc.time_horizon_days, "synth: time horizon")->capture_default_str();
  app.add_option("--layers", sc.supply_layers, "synth: supply-chain layers (3-5)")->capture_default_str();

  struct Sub {
    const char* name;
    const char* help;
    void (*run)(Options&);
  };
  const Sub subs[] = {
      {"synth", "Generate a synthetic dataset with planted rings", cmd_synth},
      {"ingest", "Validate transactions and write the canonical CSV", cmd_ingest},
      {"graph", "Project transactions to a weighted undirected edge list", cmd_graph},
      {"walk", "Generate node2vec walks from an edge list", cmd_walk},
      {"embed", "Train skip-gram embeddings from walks", cmd_embed},
      {"cluster", "Cluster embeddings with cosine DBSCAN", cmd_cluster},
      {"detect", "Report transaction cycles within clusters", cmd_detect},
      {"eval", "Score clusters against planted ground truth", cmd_eval},
      {"pipeline", "Run every stage from transactions to cycle report", cmd_pipeline},
  };
  for (const auto& s : subs) app.add_subcommand(s.name, s.help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    finalize(o);
    for (const auto& s : subs) {
      if (app.got_subcommand(s.name)) {
        s.run(o);
        break;
      }
    }
  } catch (const ct::StageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ct::exit_code(e.stage());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
