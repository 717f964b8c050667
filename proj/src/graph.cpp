#include "circtrade/graph.hpp"

#include "circtrade/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace circtrade {

namespace {

void build_csr(std::size_t n, const std::vector<Transaction>& edges, bool by_seller,
               std::vector<std::size_t>& offsets, std::vector<EdgeIndex>& index) {
  offsets.assign(n + 1, 0);
  for (const auto& e : edges) ++offsets[(by_seller ? e.seller : e.buyer) + 1];
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  index.resize(edges.size());
  std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto u = by_seller ? edges[i].seller : edges[i].buyer;
    index[cursor[u]++] = static_cast<EdgeIndex>(i);
  }
}

}  // namespace

SalesFlowGraph::SalesFlowGraph(std::size_t node_count, std::vector<Transaction> edges)
    : n_(node_count), edges_(std::move(edges)) {
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (edges_[i].seller >= n_ || edges_[i].buyer >= n_)
      throw IndexError("transaction " + std::to_string(i) + " references a dealer outside 0.." +
                       std::to_string(n_));
  }
  build_csr(n_, edges_, true, out_offsets_, out_index_);
  build_csr(n_, edges_, false, in_offsets_, in_index_);
}

std::span<const EdgeIndex> SalesFlowGraph::out_edges(DealerId u) const {
  return {out_index_.data() + out_offsets_[u], out_offsets_[u + 1] - out_offsets_[u]};
}

std::span<const EdgeIndex> SalesFlowGraph::in_edges(DealerId u) const {
  return {in_index_.data() + in_offsets_[u], in_offsets_[u + 1] - in_offsets_[u]};
}

SalesFlowGraph build_sales_flow_graph(const DealerRegistry& registry, std::vector<Transaction> txs) {
  return SalesFlowGraph(registry.size(), std::move(txs));
}

WeightedGraph WeightedGraph::from_edges(std::size_t node_count, std::span<const WeightedEdge> edges) {
  std::vector<WeightedEdge> half;
  half.reserve(edges.size() * 2);
  for (const auto& e : edges) {
    if (e.u >= node_count || e.v >= node_count) throw Error("weighted edge endpoint out of range");
    if (e.u == e.v) throw Error("weighted graph cannot contain self-loops");
    if (!(std::isfinite(e.weight) && e.weight > 0.0)) throw NonPositiveWeight("edge weight must be finite and positive");
    half.push_back(e);
    half.push_back({e.v, e.u, e.weight});
  }
  std::sort(half.begin(), half.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });

  WeightedGraph g;
  g.offsets_.assign(node_count + 1, 0);
  for (std::size_t i = 0; i < half.size();) {
    std::size_t j = i;
    double w = 0.0;
    while (j < half.size() && half[j].u == half[i].u && half[j].v == half[i].v) w += half[j++].weight;
    g.neighbors_.push_back(half[i].v);
    g.weights_.push_back(w);
    ++g.offsets_[half[i].u + 1];
    i = j;
  }
  std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
  return g;
}

bool WeightedGraph::has_edge(DealerId u, DealerId v) const {
  const auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::optional<double> WeightedGraph::weight(DealerId u, DealerId v) const {
  const auto nb = neighbors(u);
  const auto it = std::lower_bound(nb.begin(), nb.end(), v);
  if (it == nb.end() || *it != v) return std::nullopt;
  return weights(u)[static_cast<std::size_t>(it - nb.begin())];
}

std::vector<WeightedEdge> WeightedGraph::edges() const {
  std::vector<WeightedEdge> out;
  out.reserve(edge_count());
  for (DealerId u = 0; u < node_count(); ++u) {
    const auto nb = neighbors(u);
    const auto w = weights(u);
    for (std::size_t k = 0; k < nb.size(); ++k)
      if (u < nb[k]) out.push_back({u, nb[k], w[k]});
  }
  return out;
}

WeightScale parse_weight_scale(std::string_view text) {
  if (text == "linear") return WeightScale::linear;
  if (text == "log1p") return WeightScale::log1p;
  throw ConfigError("scale must be 'linear' or 'log1p', got '" + std::string(text) + "'");
}

std::string_view to_string(WeightScale scale) {
  return scale == WeightScale::linear ? "linear" : "log1p";
}

WeightedGraph project_to_weighted(const SalesFlowGraph& g, WeightScale scale) {
  struct PairAmount {
    DealerId lo, hi;
    Rupees amount;
  };
  std::vector<PairAmount> pairs;
  pairs.reserve(g.edge_count());
  for (const auto& e : g.edges()) pairs.push_back({std::min(e.seller, e.buyer), std::max(e.seller, e.buyer), e.amount});
  std::sort(pairs.begin(), pairs.end(),
            [](const PairAmount& a, const PairAmount& b) { return a.lo != b.lo ? a.lo < b.lo : a.hi < b.hi; });

  std::vector<WeightedEdge> edges;
  for (std::size_t i = 0; i < pairs.size();) {
    Rupees total = 0;
    std::size_t j = i;
    while (j < pairs.size() && pairs[j].lo == pairs[i].lo && pairs[j].hi == pairs[i].hi) total += pairs[j++].amount;
    if (total > 0) {
      const double x = static_cast<double>(total);
      edges.push_back({pairs[i].lo, pairs[i].hi, scale == WeightScale::linear ? x : std::log1p(x)});
    }
    i = j;
  }
  return WeightedGraph::from_edges(g.node_count(), edges);
}

DegreeStats degree_stats(const WeightedGraph& g) {
  DegreeStats s;
  s.nodes = g.node_count();
  s.edges = g.edge_count();
  if (s.nodes == 0) return s;
  s.min_degree = g.degree(0);
  for (DealerId u = 0; u < s.nodes; ++u) {
    s.min_degree = std::min(s.min_degree, g.degree(u));
    s.max_degree = std::max(s.max_degree, g.degree(u));
  }
  s.mean_degree = 2.0 * static_cast<double>(s.edges) / static_cast<double>(s.nodes);
  for (const auto& e : g.edges()) s.total_weight += e.weight;
  return s;
}

}  // namespace circtrade
