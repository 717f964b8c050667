#include "circtrade/detect.hpp"

#include "circtrade/error.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>

namespace circtrade {

std::vector<Community> extract_communities(const ClusterAssignment& assignment, const SalesFlowGraph& g) {
  if (assignment.labels.size() != g.node_count())
    throw LengthMismatch("cluster labels cover " + std::to_string(assignment.labels.size()) + " dealers, graph has " +
                         std::to_string(g.node_count()));
  std::vector<Community> out(static_cast<std::size_t>(assignment.cluster_count));
  for (std::size_t c = 0; c < out.size(); ++c) out[c].id = static_cast<int>(c);
  for (DealerId u = 0; u < g.node_count(); ++u) {
    const int label = assignment.labels[u];
    if (label >= 0) out[static_cast<std::size_t>(label)].members.push_back(u);
  }
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const auto& tx = g.edge(static_cast<EdgeIndex>(e));
    const int a = assignment.labels[tx.seller];
    if (a >= 0 && a == assignment.labels[tx.buyer]) {
      out[static_cast<std::size_t>(a)].internal_txs.push_back(tx);
      out[static_cast<std::size_t>(a)].edge_ids.push_back(static_cast<EdgeIndex>(e));
    }
  }
  std::erase_if(out, [](const Community& c) { return c.members.empty(); });
  return out;
}

void CycleConfig::validate() const {
  if (max_len < 2) throw ConfigError("max cycle length must be at least 2");
  if (window <= 0) throw ConfigError("cycle window must be positive");
  if (!(tolerance >= 0.0 && tolerance < 1.0)) throw ConfigError("tolerance must lie in [0, 1)");
}

namespace {

class CycleSearch {
public:
  CycleSearch(const Community& c, const CycleConfig& cfg) : c_(c), cfg_(cfg) {
    const std::size_t m = c.members.size();
    out_.resize(m);
    for (std::size_t i = 0; i < c.internal_txs.size(); ++i) {
      const auto& tx = c.internal_txs[i];
      out_[local(tx.seller)].push_back({local(tx.buyer), i});
    }
    for (auto& hops : out_)
      std::sort(hops.begin(), hops.end(), [](const Hop& a, const Hop& b) {
        return a.to != b.to ? a.to < b.to : a.tx < b.tx;
      });
    on_path_.assign(m, false);
  }

  CycleReport run() {
    for (std::size_t s = 0; s < out_.size() && !report_.truncated; ++s) {
      start_ = s;
      path_.assign(1, s);
      on_path_[s] = true;
      extend(std::numeric_limits<Minutes>::max(), std::numeric_limits<Minutes>::min());
      on_path_[s] = false;
    }
    return std::move(report_);
  }

private:
  struct Hop {
    std::size_t to;
    std::size_t tx;
  };

  std::size_t local(DealerId u) const {
    const auto it = std::lower_bound(c_.members.begin(), c_.members.end(), u);
    if (it == c_.members.end() || *it != u) throw Error("community transaction touches a non-member dealer");
    return static_cast<std::size_t>(it - c_.members.begin());
  }

  void extend(Minutes tmin, Minutes tmax) {
    const std::size_t u = path_.back();
    for (const Hop& hop : out_[u]) {
      if (report_.truncated) return;
      const Minutes t = c_.internal_txs[hop.tx].timestamp;
      const Minutes lo = std::min(tmin, t), hi = std::max(tmax, t);
      if (hi - lo > cfg_.window) continue;
      if (hop.to == start_) {
        if (path_.size() >= 2) {
          txs_.push_back(hop.tx);
          emit(hi - lo);
          txs_.pop_back();
        }
        continue;
      }
      if (hop.to < start_ || on_path_[hop.to] || path_.size() >= cfg_.max_len) continue;
      path_.push_back(hop.to);
      txs_.push_back(hop.tx);
      on_path_[hop.to] = true;
      extend(lo, hi);
      on_path_[hop.to] = false;
      txs_.pop_back();
      path_.pop_back();
    }
  }

  void emit(Minutes span) {
    if (report_.cycles.size() >= cfg_.max_cycles) {
      report_.truncated = true;
      return;
    }
    Cycle cyc;
    cyc.community = c_.id;
    for (auto v : path_) cyc.nodes.push_back(c_.members[v]);
    Rupees lo = std::numeric_limits<Rupees>::max(), hi = 0;
    for (auto i : txs_) {
      cyc.edges.push_back(c_.edge_ids.empty() ? static_cast<EdgeIndex>(i) : c_.edge_ids[i]);
      const Rupees a = c_.internal_txs[i].amount;
      cyc.amounts.push_back(a);
      lo = std::min(lo, a);
      hi = std::max(hi, a);
    }
    cyc.net_value_add = hi - lo;
    cyc.spread = static_cast<double>(hi - lo) / static_cast<double>(hi);
    cyc.time_span = span;
    cyc.flagged = cyc.spread <= cfg_.tolerance;
    report_.cycles.push_back(std::move(cyc));
  }

  const Community& c_;
  const CycleConfig& cfg_;
  std::vector<std::vector<Hop>> out_;
  std::vector<bool> on_path_;
  std::vector<std::size_t> path_;
  std::vector<std::size_t> txs_;
  std::size_t start_ = 0;
  CycleReport report_;
};

}  // namespace

CycleReport detect_cycles(const Community& c, const CycleConfig& cfg) {
  cfg.validate();
  return CycleSearch(c, cfg).run();
}

CycleReport detect_cycles(const std::vector<Community>& communities, const CycleConfig& cfg) {
  cfg.validate();
  std::vector<CycleReport> parts(communities.size());
  const auto count = static_cast<std::int64_t>(communities.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < count; ++i) parts[i] = CycleSearch(communities[i], cfg).run();
  CycleReport all;
  for (auto& p : parts) {
    all.truncated = all.truncated || p.truncated;
    for (auto& cyc : p.cycles) all.cycles.push_back(std::move(cyc));
  }
  return all;
}

}  // namespace circtrade
