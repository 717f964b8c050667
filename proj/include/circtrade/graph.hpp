#pragma once

#include "circtrade/ingest.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace circtrade {

using EdgeIndex = std::uint32_t;

// Directed sales flow multigraph. Edge i is transaction i; parallel edges are kept.
class SalesFlowGraph {
public:
  SalesFlowGraph() = default;
  // Throws IndexError if an endpoint is >= node_count.
  SalesFlowGraph(std::size_t node_count, std::vector<Transaction> edges);

  std::size_t node_count() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<Transaction>& edges() const noexcept { return edges_; }
  const Transaction& edge(EdgeIndex e) const { return edges_[e]; }

  // Indices of edges leaving / entering u, ascending.
  std::span<const EdgeIndex> out_edges(DealerId u) const;
  std::span<const EdgeIndex> in_edges(DealerId u) const;

private:
  std::size_t n_ = 0;
  std::vector<Transaction> edges_;
  std::vector<std::size_t> out_offsets_, in_offsets_;
  std::vector<EdgeIndex> out_index_, in_index_;
};

SalesFlowGraph build_sales_flow_graph(const DealerRegistry& registry, std::vector<Transaction> txs);

struct WeightedEdge {
  DealerId u = 0;
  DealerId v = 0;
  double weight = 0.0;
};

// Undirected, edge-weighted simple graph in CSR form. Each node's neighbor
// list is sorted ascending; every undirected edge is stored as two half-edges.
class WeightedGraph {
public:
  WeightedGraph() = default;
  // Duplicate pairs are summed. Throws Error on self-loops or out-of-range
  // endpoints, NonPositiveWeight on weights that are not finite and > 0.
  static WeightedGraph from_edges(std::size_t node_count, std::span<const WeightedEdge> edges);

  std::size_t node_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const noexcept { return neighbors_.size() / 2; }
  std::size_t half_edge_count() const noexcept { return neighbors_.size(); }
  std::size_t degree(DealerId u) const { return offsets_[u + 1] - offsets_[u]; }
  // Position of u's first half-edge in the flat arrays.
  std::size_t offset(DealerId u) const { return offsets_[u]; }

  std::span<const DealerId> neighbors(DealerId u) const {
    return {neighbors_.data() + offsets_[u], degree(u)};
  }
  std::span<const double> weights(DealerId u) const { return {weights_.data() + offsets_[u], degree(u)}; }

  bool has_edge(DealerId u, DealerId v) const;
  std::optional<double> weight(DealerId u, DealerId v) const;

  // Undirected edges with u < v, ordered by (u, v).
  std::vector<WeightedEdge> edges() const;

  friend bool operator==(const WeightedGraph&, const WeightedGraph&) = default;

private:
  std::vector<std::size_t> offsets_;
  std::vector<DealerId> neighbors_;
  std::vector<double> weights_;
};

enum class WeightScale { linear, log1p };

WeightScale parse_weight_scale(std::string_view text);
std::string_view to_string(WeightScale scale);

// Weight of {u,v} is f(total amount of u->v and v->u transactions).
WeightedGraph project_to_weighted(const SalesFlowGraph& g, WeightScale scale);

struct DegreeStats {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t min_degree = 0;
  double mean_degree = 0.0;
  std::size_t max_degree = 0;
  double total_weight = 0.0;
};

DegreeStats degree_stats(const WeightedGraph& g);

}  // namespace circtrade
