#pragma once

#include "circtrade/cluster.hpp"
#include "circtrade/graph.hpp"

#include <cstddef>
#include <vector>

namespace circtrade {

// Dealers sharing one cluster label, with the transactions among them.
struct Community {
  int id = 0;
  std::vector<DealerId> members;        // ascending
  std::vector<Transaction> internal_txs;  // in graph edge order
  std::vector<EdgeIndex> edge_ids;        // graph edge index of each internal tx
};

// One community per non-noise cluster id, in id order. Throws LengthMismatch.
std::vector<Community> extract_communities(const ClusterAssignment& assignment, const SalesFlowGraph& g);

struct CycleConfig {
  std::size_t max_len = 6;
  Minutes window = 30 * 1440;
  double tolerance = 0.02;
  // Enumeration stops (and the report is marked truncated) past this many cycles.
  std::size_t max_cycles = 1'000'000;

  void validate() const;
};

// A simple directed cycle of transactions. nodes[0] is the smallest dealer id
// on the cycle; hop h is the transaction nodes[h] -> nodes[(h+1) % k].
struct Cycle {
  int community = 0;
  std::vector<DealerId> nodes;
  std::vector<EdgeIndex> edges;
  std::vector<Rupees> amounts;
  Rupees net_value_add = 0;  // max hop amount - min hop amount
  double spread = 0.0;       // net_value_add / max hop amount
  Minutes time_span = 0;     // latest minus earliest hop timestamp
  bool flagged = false;      // spread <= tolerance
};

struct CycleReport {
  std::vector<Cycle> cycles;
  bool truncated = false;
};

// Every simple directed cycle of 2..max_len dealers in the community whose
// transactions span at most `window` minutes. Parallel transactions give
// distinct cycles.
CycleReport detect_cycles(const Community& c, const CycleConfig& cfg);

// Runs detect_cycles per community on OpenMP threads; results are
// concatenated in community order.
CycleReport detect_cycles(const std::vector<Community>& communities, const CycleConfig& cfg);

}  // namespace circtrade
