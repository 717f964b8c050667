#include "doctest.h"

#include "circtrade/error.hpp"
#include "circtrade/graph.hpp"

#include <cmath>
#include <random>

using namespace circtrade;

namespace {

// The four-dealer sample as ids A=0, B=1, C=2, D=3.
std::vector<Transaction> sample_txs() {
  return {{0, 1, 26912770, 14000}, {2, 3, 26912800, 17000}, {0, 3, 26922810, 12000}, {1, 2, 26923710, 15000}};
}

SalesFlowGraph random_multigraph(std::mt19937_64& rng, std::size_t n, std::size_t m) {
  std::vector<Transaction> txs;
  for (std::size_t i = 0; i < m; ++i) {
    const auto s = static_cast<DealerId>(rng() % n);
    auto b = static_cast<DealerId>(rng() % n);
    if (b == s) b = static_cast<DealerId>((b + 1) % n);
    txs.push_back({s, b, static_cast<Minutes>(rng() % 100000), static_cast<Rupees>(1 + rng() % 100000)});
  }
  return SalesFlowGraph(n, std::move(txs));
}

}  // namespace

TEST_SUITE("graph") {

TEST_CASE("four-dealer sample builds a 4-node, 4-edge multigraph") {
  DealerRegistry reg;
  for (const char* n : {"Dealer A", "Dealer B", "Dealer C", "Dealer D"}) reg.intern(n);
  const auto g = build_sales_flow_graph(reg, sample_txs());
  CHECK(g.node_count() == 4);
  CHECK(g.edge_count() == 4);
  CHECK(g.out_edges(0).size() == 2);
  CHECK(g.in_edges(3).size() == 2);
  CHECK(g.edge(3).amount == 15000);
}

TEST_CASE("parallel edges and isolated nodes are kept") {
  const SalesFlowGraph g(3, {{0, 1, 10, 5}, {0, 1, 20, 7}});
  CHECK(g.edge_count() == 2);
  CHECK(g.out_edges(0).size() == 2);
  CHECK(g.out_edges(2).empty());

  const SalesFlowGraph empty(3, {});
  CHECK(empty.node_count() == 3);
  CHECK(empty.edge_count() == 0);
}

TEST_CASE("out-of-range dealer ids raise IndexError") {
  CHECK_THROWS_AS(SalesFlowGraph(2, {{0, 2, 0, 1}}), IndexError);
}

TEST_CASE("adjacency lists index exactly the incident edges") {
  std::mt19937_64 rng(5);
  const auto g = random_multigraph(rng, 12, 80);
  std::size_t outs = 0, ins = 0;
  for (DealerId u = 0; u < g.node_count(); ++u) {
    for (auto e : g.out_edges(u)) CHECK(g.edge(e).seller == u);
    for (auto e : g.in_edges(u)) CHECK(g.edge(e).buyer == u);
    outs += g.out_edges(u).size();
    ins += g.in_edges(u).size();
  }
  CHECK(outs == g.edge_count());
  CHECK(ins == g.edge_count());
}

TEST_CASE("projection sums both directions") {
  const SalesFlowGraph g(2, {{0, 1, 0, 14000}, {1, 0, 5, 1000}});
  const auto w = project_to_weighted(g, WeightScale::linear);
  CHECK(w.edge_count() == 1);
  CHECK(w.weight(0, 1) == 15000.0);

  const SalesFlowGraph single(2, {{0, 1, 0, 14000}});
  CHECK(project_to_weighted(single, WeightScale::log1p).weight(1, 0) == doctest::Approx(std::log(14001.0)).epsilon(1e-15));
}

TEST_CASE("four-dealer sample projection and degree stats") {
  const auto w = project_to_weighted(SalesFlowGraph(4, sample_txs()), WeightScale::linear);
  CHECK(w.edge_count() == 4);
  CHECK(w.weight(0, 1) == 14000.0);
  CHECK(w.weight(2, 3) == 17000.0);
  CHECK(w.weight(0, 3) == 12000.0);
  CHECK(w.weight(1, 2) == 15000.0);
  CHECK_FALSE(w.weight(0, 2).has_value());
  const auto s = degree_stats(w);
  CHECK(s.nodes == 4);
  CHECK(s.edges == 4);
  CHECK(s.total_weight == 58000.0);
  CHECK(s.min_degree == 2);
  CHECK(s.max_degree == 2);
}

TEST_CASE("degree stats of empty and star graphs") {
  const auto s0 = degree_stats(WeightedGraph{});
  CHECK(s0.nodes == 0);
  CHECK(s0.edges == 0);
  CHECK(s0.total_weight == 0.0);

  const std::vector<WeightedEdge> star{{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}};
  const auto g = WeightedGraph::from_edges(4, star);
  CHECK(g.degree(0) == 3);
  CHECK(g.degree(1) == 1);
  const auto s = degree_stats(g);
  CHECK(s.max_degree == 3);
  CHECK(s.min_degree == 1);
  CHECK(s.mean_degree == 1.5);
  CHECK(s.total_weight == 3.0);
}

TEST_CASE("weighted graph rejects self-loops and non-positive weights") {
  const std::vector<WeightedEdge> loop{{1, 1, 1.0}};
  CHECK_THROWS_AS(WeightedGraph::from_edges(2, loop), Error);
  const std::vector<WeightedEdge> zero{{0, 1, 0.0}};
  CHECK_THROWS_AS(WeightedGraph::from_edges(2, zero), NonPositiveWeight);
}

TEST_CASE("projection invariants on random multigraphs") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const auto g = random_multigraph(rng, 2 + rng() % 15, rng() % 120);
    const auto w = project_to_weighted(g, WeightScale::linear);

    // Symmetry, simple graph, sorted neighbors.
    for (DealerId u = 0; u < w.node_count(); ++u) {
      const auto nb = w.neighbors(u);
      CHECK(std::is_sorted(nb.begin(), nb.end()));
      CHECK(std::adjacent_find(nb.begin(), nb.end()) == nb.end());
      for (std::size_t k = 0; k < nb.size(); ++k) {
        CHECK(nb[k] != u);
        CHECK(w.weights(u)[k] > 0.0);
        CHECK(w.weight(nb[k], u) == w.weights(u)[k]);
      }
    }

    // Conservation under linear scaling.
    Rupees total = 0;
    for (const auto& e : g.edges()) total += e.amount;
    CHECK(degree_stats(w).total_weight == static_cast<double>(total));

    // Idempotence: split each undirected weight into two opposite half-edges and re-project.
    std::vector<Transaction> halves;
    for (const auto& e : w.edges()) {
      const auto amount = static_cast<Rupees>(e.weight);
      halves.push_back({e.u, e.v, 0, amount / 2 > 0 ? amount / 2 : amount});
      if (amount / 2 > 0) halves.push_back({e.v, e.u, 0, amount - amount / 2});
    }
    CHECK(project_to_weighted(SalesFlowGraph(w.node_count(), halves), WeightScale::linear) == w);
  }
}

TEST_CASE("scale names parse") {
  CHECK(parse_weight_scale("linear") == WeightScale::linear);
  CHECK(parse_weight_scale("log1p") == WeightScale::log1p);
  CHECK_THROWS_AS(parse_weight_scale("log"), ConfigError);
}

}
