#pragma once

#include "circtrade/artifacts.hpp"
#include "circtrade/cluster.hpp"
#include "circtrade/detect.hpp"
#include "circtrade/embedder.hpp"
#include "circtrade/error.hpp"
#include "circtrade/graph.hpp"
#include "circtrade/ingest.hpp"
#include "circtrade/metrics.hpp"
#include "circtrade/walker.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace circtrade {

enum class Stage { config, ingest, graph, walk, embed, cluster, detect, output, eval, synth };

std::string_view to_string(Stage stage);
// Process exit status for a failure in this stage.
int exit_code(Stage stage);

class StageError : public Error {
public:
  StageError(Stage stage, const std::string& what)
      : Error(std::string(to_string(stage)) + ": " + what), stage_(stage) {}
  Stage stage() const noexcept { return stage_; }

private:
  Stage stage_;
};

struct PipelineConfig {
  std::filesystem::path input;
  std::filesystem::path out_dir;
  WeightScale scale = WeightScale::log1p;
  WalkConfig walk;
  EmbedConfig embed;
  DbscanConfig dbscan;
  CycleConfig cycles;
  std::uint64_t seed = 42;
  int threads = 1;
  bool deterministic = false;

  // Copies the global seed, thread count and determinism flag into the
  // stage configs. Stage seeds derive from the global seed by label.
  void propagate();
  // Throws StageError(Stage::config).
  void validate() const;
  // Flat "key = value" form; every key is a CLI flag name without dashes.
  std::string to_config_text() const;
};

struct PipelineResult {
  TransactionTable table;
  SalesFlowGraph graph;
  WeightedGraph weighted;
  WalkCorpus corpus;
  EmbeddingMatrix embedding;
  ClusterAssignment clusters;
  std::vector<Community> communities;
  CycleReport cycles;
  DenseMatrix projection;
  std::map<std::string, std::string> artifact_hashes;  // file name -> sha256
};

// ingest -> graph -> project -> walks -> embed -> dbscan -> communities ->
// cycles. Writes dealers.csv, embeddings.csv, clusters.csv, projection.csv,
// cycles.jsonl, run.conf and manifest.json into out_dir. Validates before
// creating any output. Errors surface as StageError.
PipelineResult run_pipeline(PipelineConfig cfg);

// Scores predicted clusters against planted rings. Noise dealers and dealers
// outside every ring count as singleton clusters.
EvalScores evaluate(const ClusterAssignment& predicted, const GroundTruth& truth);

// Reads clusters.csv and dealers.csv from pred_dir, matches dealers to the
// ground truth by name, scores, and writes eval.json into pred_dir.
EvalScores run_eval(const std::filesystem::path& pred_dir, const std::filesystem::path& truth_file);

}  // namespace circtrade
