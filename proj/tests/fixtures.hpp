#pragma once

#include "circtrade/graph.hpp"

#include <vector>

namespace fixtures {

using circtrade::WeightedEdge;
using circtrade::WeightedGraph;

// Two 5-cliques {0..4} and {5..9} joined by the bridge 4-5; unit weights.
inline WeightedGraph barbell() {
  std::vector<WeightedEdge> e;
  for (circtrade::DealerId base : {0u, 5u})
    for (circtrade::DealerId i = 0; i < 5; ++i)
      for (circtrade::DealerId j = i + 1; j < 5; ++j) e.push_back({base + i, base + j, 1.0});
  e.push_back({4, 5, 1.0});
  return WeightedGraph::from_edges(10, e);
}

// t=0 - v=1 - w=2
inline WeightedGraph path3() {
  const std::vector<WeightedEdge> e{{0, 1, 1.0}, {1, 2, 1.0}};
  return WeightedGraph::from_edges(3, e);
}

inline WeightedGraph triangle() {
  const std::vector<WeightedEdge> e{{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}};
  return WeightedGraph::from_edges(3, e);
}

// `count` cliques of `size` nodes; the last node of each clique links to the
// first node of the next, closing a ring.
inline WeightedGraph ring_of_cliques(circtrade::DealerId count, circtrade::DealerId size) {
  std::vector<WeightedEdge> e;
  for (circtrade::DealerId c = 0; c < count; ++c) {
    for (circtrade::DealerId i = 0; i < size; ++i)
      for (circtrade::DealerId j = i + 1; j < size; ++j) e.push_back({c * size + i, c * size + j, 1.0});
    e.push_back({c * size + size - 1, ((c + 1) % count) * size, 1.0});
  }
  return WeightedGraph::from_edges(count * size, e);
}

// Fixed irregular 10-node graph with varied weights.
inline WeightedGraph ten_nodes() {
  const std::vector<WeightedEdge> e{{0, 1, 1.0}, {0, 2, 2.5}, {0, 3, 0.5}, {1, 2, 1.5}, {1, 4, 3.0}, {2, 5, 1.0},
                                    {3, 4, 2.0}, {3, 6, 1.0}, {4, 5, 0.7}, {4, 7, 1.2}, {5, 8, 2.2}, {6, 7, 1.0},
                                    {6, 9, 4.0}, {7, 8, 0.9}, {8, 9, 1.1}, {2, 9, 0.3}, {1, 7, 1.8}};
  return WeightedGraph::from_edges(10, e);
}

}  // namespace fixtures
