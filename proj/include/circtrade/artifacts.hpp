#pragma once

#include "circtrade/cluster.hpp"
#include "circtrade/detect.hpp"
#include "circtrade/graph.hpp"
#include "circtrade/matrix.hpp"
#include "circtrade/synth.hpp"
#include "circtrade/walker.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace circtrade {

namespace fs = std::filesystem;

// All readers throw IoError for unreadable files and ParseError for malformed
// content; writers throw IoError.

// "# nodes N" then one "u v weight" line per undirected edge, u < v.
void write_edge_list(const fs::path& path, const WeightedGraph& g);
WeightedGraph read_edge_list(const fs::path& path);

// "# nodes N" then one walk per line, space-separated node ids.
void write_walks(const fs::path& path, const WalkCorpus& corpus, std::size_t node_count);
struct WalkFile {
  WalkCorpus corpus;
  std::size_t node_count = 0;
};
WalkFile read_walks(const fs::path& path);

// dealer_id,dim_0,...,dim_{d-1}; rows must cover ids 0..n-1.
void write_embeddings(const fs::path& path, const DenseMatrix& vectors);
DenseMatrix read_embeddings(const fs::path& path);

// dealer_id,cluster_label with -1 for noise.
void write_clusters(const fs::path& path, const ClusterAssignment& assignment);
ClusterAssignment read_clusters(const fs::path& path);

// dealer_id,x,y,cluster_label
void write_projection(const fs::path& path, const DenseMatrix& coords, const ClusterAssignment& assignment);

// dealer_id,name
void write_dealers(const fs::path& path, const DealerRegistry& registry);
std::vector<std::string> read_dealers(const fs::path& path);

// One JSON object per cycle: community, nodes, amounts, spread,
// window_minutes, flagged.
void write_cycles(const fs::path& path, const CycleReport& report);

// {"dealers": [...], "ring_membership": [id|null...], "planted_cycles": [...]}
void write_ground_truth(const fs::path& path, const GroundTruth& truth, const DealerRegistry& registry);
struct GroundTruthFile {
  std::vector<std::string> dealers;
  GroundTruth truth;
};
GroundTruthFile read_ground_truth(const fs::path& path);

// Lower-case hex SHA-256 of the file contents.
std::string sha256_file(const fs::path& path);

}  // namespace circtrade
