#pragma once

#include "circtrade/alias_table.hpp"
#include "circtrade/graph.hpp"

#include <cstdint>
#include <vector>

namespace circtrade {

struct WalkConfig {
  double p = 1.0;  // return parameter
  double q = 0.5;  // in-out parameter
  std::size_t walk_length = 80;
  std::size_t walks_per_node = 10;
  std::uint64_t seed = 0;
  // Second-order alias tables are precomputed only when their total entry
  // count (sum over half-edges (t,v) of deg(v)) stays within this budget.
  std::size_t precompute_budget = 1u << 25;

  // Throws ConfigError.
  void validate() const;
};

using Walk = std::vector<DealerId>;

struct WalkCorpus {
  std::vector<Walk> walks;

  friend bool operator==(const WalkCorpus&, const WalkCorpus&) = default;
};

// Unnormalized node2vec weights for stepping from curr (having arrived from
// prev), aligned with g.neighbors(curr): edge weight times 1/p for x == prev,
// 1 for x adjacent to prev, 1/q otherwise.
std::vector<double> transition_weights(const WeightedGraph& g, DealerId prev, DealerId curr, const WalkConfig& cfg);

// Biased second-order sampler over a fixed graph. The graph must outlive it.
class Node2VecSampler {
public:
  Node2VecSampler(const WeightedGraph& g, const WalkConfig& cfg);

  bool precomputed() const noexcept { return !edge_tables_.empty() || graph_->half_edge_count() == 0; }

  // First-order step by edge weight. Throws NoNeighbors.
  DealerId first_step(DealerId curr, Rng& rng) const;
  // Second-order step. prev must be adjacent to curr.
  DealerId step(DealerId prev, DealerId curr, Rng& rng) const;

  // One walk from start; empty if start is isolated.
  Walk walk(DealerId start, Rng& rng) const;

private:
  std::size_t step_index(std::size_t half_edge, DealerId prev, DealerId curr, Rng& rng) const;
  std::size_t half_edge_id(DealerId from, DealerId to) const;

  const WeightedGraph* graph_;
  WalkConfig cfg_;
  std::vector<AliasTable> node_tables_;
  std::vector<AliasTable> edge_tables_;  // indexed by half-edge id, when precomputed
};

// Walks ordered by (walk_index, start node); walk (r, u) draws from its own
// RNG stream derived from (seed, u, r). Isolated nodes start no walks.
// Runs on OpenMP threads; output equals generate_walks_serial.
WalkCorpus generate_walks(const WeightedGraph& g, const WalkConfig& cfg);

// Single-threaded reference.
WalkCorpus generate_walks_serial(const WeightedGraph& g, const WalkConfig& cfg);

}  // namespace circtrade
