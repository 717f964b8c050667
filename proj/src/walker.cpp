#include "circtrade/walker.hpp"

#include "circtrade/error.hpp"

#include <algorithm>

namespace circtrade {

namespace {

// Weights over neighbors of curr, computed by merging the two sorted
// adjacency lists.
void fill_transition_weights(const WeightedGraph& g, DealerId prev, DealerId curr, double inv_p, double inv_q,
                             std::vector<double>& out) {
  const auto nb = g.neighbors(curr);
  const auto w = g.weights(curr);
  const auto prev_nb = g.neighbors(prev);
  out.resize(nb.size());
  std::size_t j = 0;
  for (std::size_t k = 0; k < nb.size(); ++k) {
    const DealerId x = nb[k];
    while (j < prev_nb.size() && prev_nb[j] < x) ++j;
    double alpha;
    if (x == prev)
      alpha = inv_p;
    else if (j < prev_nb.size() && prev_nb[j] == x)
      alpha = 1.0;
    else
      alpha = inv_q;
    out[k] = w[k] * alpha;
  }
}

struct WalkJob {
  DealerId start;
  std::size_t round;
};

std::vector<WalkJob> walk_jobs(const WeightedGraph& g, const WalkConfig& cfg) {
  std::vector<WalkJob> jobs;
  for (std::size_t r = 0; r < cfg.walks_per_node; ++r)
    for (DealerId u = 0; u < g.node_count(); ++u)
      if (g.degree(u) > 0) jobs.push_back({u, r});
  return jobs;
}

}  // namespace

void WalkConfig::validate() const {
  if (!(p > 0.0)) throw ConfigError("p must be positive");
  if (!(q > 0.0)) throw ConfigError("q must be positive");
  if (walk_length < 2) throw ConfigError("walk length must be at least 2");
  if (walks_per_node < 1) throw ConfigError("walks per node must be at least 1");
}

std::vector<double> transition_weights(const WeightedGraph& g, DealerId prev, DealerId curr, const WalkConfig& cfg) {
  if (curr >= g.node_count() || prev >= g.node_count()) throw IndexError("node id out of range");
  if (g.degree(curr) == 0) throw NoNeighbors("node " + std::to_string(curr) + " has no neighbors");
  if (!g.has_edge(curr, prev)) throw Error("previous node is not adjacent to the current node");
  std::vector<double> out;
  fill_transition_weights(g, prev, curr, 1.0 / cfg.p, 1.0 / cfg.q, out);
  return out;
}

Node2VecSampler::Node2VecSampler(const WeightedGraph& g, const WalkConfig& cfg) : graph_(&g), cfg_(cfg) {
  cfg_.validate();
  const std::size_t n = g.node_count();
  node_tables_.resize(n);
  for (DealerId u = 0; u < n; ++u)
    if (g.degree(u) > 0) node_tables_[u] = AliasTable(g.weights(u));

  std::size_t entries = 0;
  for (DealerId t = 0; t < n; ++t)
    for (DealerId v : g.neighbors(t)) entries += g.degree(v);
  if (entries == 0 || entries > cfg_.precompute_budget) return;

  edge_tables_.resize(g.half_edge_count());
  const double inv_p = 1.0 / cfg_.p, inv_q = 1.0 / cfg_.q;
  const auto node_count = static_cast<std::int64_t>(n);
#pragma omp parallel
  {
    std::vector<double> buf;
#pragma omp for schedule(dynamic, 16)
    for (std::int64_t t = 0; t < node_count; ++t) {
      const auto prev = static_cast<DealerId>(t);
      const auto nb = g.neighbors(prev);
      for (std::size_t k = 0; k < nb.size(); ++k) {
        fill_transition_weights(g, prev, nb[k], inv_p, inv_q, buf);
        edge_tables_[g.offset(prev) + k] = AliasTable(buf);
      }
    }
  }
}

std::size_t Node2VecSampler::half_edge_id(DealerId from, DealerId to) const {
  const auto nb = graph_->neighbors(from);
  const auto it = std::lower_bound(nb.begin(), nb.end(), to);
  if (it == nb.end() || *it != to) throw Error("previous node is not adjacent to the current node");
  return graph_->offset(from) + static_cast<std::size_t>(it - nb.begin());
}

DealerId Node2VecSampler::first_step(DealerId curr, Rng& rng) const {
  if (graph_->degree(curr) == 0) throw NoNeighbors("node " + std::to_string(curr) + " has no neighbors");
  return graph_->neighbors(curr)[node_tables_[curr].sample(rng)];
}

std::size_t Node2VecSampler::step_index(std::size_t half_edge, DealerId prev, DealerId curr, Rng& rng) const {
  if (!edge_tables_.empty()) return edge_tables_[half_edge].sample(rng);
  thread_local std::vector<double> buf;
  fill_transition_weights(*graph_, prev, curr, 1.0 / cfg_.p, 1.0 / cfg_.q, buf);
  double total = 0.0;
  for (double w : buf) total += w;
  double target = uniform01(rng) * total;
  for (std::size_t k = 0; k < buf.size(); ++k) {
    target -= buf[k];
    if (target < 0.0) return k;
  }
  return buf.size() - 1;
}

DealerId Node2VecSampler::step(DealerId prev, DealerId curr, Rng& rng) const {
  if (graph_->degree(curr) == 0) throw NoNeighbors("node " + std::to_string(curr) + " has no neighbors");
  const auto he = half_edge_id(prev, curr);
  return graph_->neighbors(curr)[step_index(he, prev, curr, rng)];
}

Walk Node2VecSampler::walk(DealerId start, Rng& rng) const {
  Walk w;
  if (graph_->degree(start) == 0) return w;
  w.reserve(cfg_.walk_length);
  w.push_back(start);
  const auto first = node_tables_[start].sample(rng);
  DealerId prev = start;
  DealerId curr = graph_->neighbors(start)[first];
  std::size_t he = graph_->offset(start) + first;  // half-edge prev -> curr
  w.push_back(curr);
  while (w.size() < cfg_.walk_length) {
    if (graph_->degree(curr) == 0) break;
    const auto k = step_index(he, prev, curr, rng);
    he = graph_->offset(curr) + k;
    prev = curr;
    curr = graph_->neighbors(curr)[k];
    w.push_back(curr);
  }
  return w;
}

WalkCorpus generate_walks(const WeightedGraph& g, const WalkConfig& cfg) {
  const Node2VecSampler sampler(g, cfg);
  const auto jobs = walk_jobs(g, cfg);
  WalkCorpus corpus;
  corpus.walks.resize(jobs.size());
  const auto job_count = static_cast<std::int64_t>(jobs.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t i = 0; i < job_count; ++i) {
    Rng rng(derive_seed(cfg.seed, jobs[i].start, jobs[i].round));
    corpus.walks[i] = sampler.walk(jobs[i].start, rng);
  }
  return corpus;
}

WalkCorpus generate_walks_serial(const WeightedGraph& g, const WalkConfig& cfg) {
  const Node2VecSampler sampler(g, cfg);
  WalkCorpus corpus;
  for (const auto& job : walk_jobs(g, cfg)) {
    Rng rng(derive_seed(cfg.seed, job.start, job.round));
    corpus.walks.push_back(sampler.walk(job.start, rng));
  }
  return corpus;
}

}  // namespace circtrade
