#include "circtrade/embedder.hpp"

#include "circtrade/alias_table.hpp"
#include "circtrade/error.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <cmath>

namespace circtrade {

namespace {

constexpr double kClamp = 30.0;

// -ln s(x), clamped like logistic().
double neg_log_logistic(double x) {
  x = std::clamp(x, -kClamp, kClamp);
  return std::log1p(std::exp(-x));
}

double dot(const double* a, const double* b, std::size_t d) {
  double s = 0.0;
  for (std::size_t k = 0; k < d; ++k) s += a[k] * b[k];
  return s;
}

void check_dims(std::span<const double> center, std::span<const double> context, std::span<const Vec> negatives) {
  if (context.size() != center.size()) throw DimensionMismatch("context vector dimension differs from center");
  for (const auto& n : negatives)
    if (n.size() != center.size()) throw DimensionMismatch("negative vector dimension differs from center");
}

class SgnsKernel {
public:
  SgnsKernel(EmbeddingMatrix& emb, const AliasTable& neg_table, const std::vector<DealerId>& neg_nodes,
             std::size_t negatives)
      : emb_(emb), neg_table_(neg_table), neg_nodes_(neg_nodes), negatives_(negatives), neu1e_(emb.dims()) {}

  // One positive pair plus sampled negatives.
  void update(DealerId center, DealerId context, double lr, Rng& rng) {
    const std::size_t d = emb_.dims();
    double* in = emb_.input.row(center).data();
    std::fill(neu1e_.begin(), neu1e_.end(), 0.0);
    accumulate(in, context, 1.0, lr, d);
    for (std::size_t k = 0; k < negatives_; ++k) {
      const DealerId neg = neg_nodes_[neg_table_.sample(rng)];
      if (neg == context) continue;
      accumulate(in, neg, 0.0, lr, d);
    }
    for (std::size_t k = 0; k < d; ++k) in[k] -= lr * neu1e_[k];
  }

private:
  void accumulate(const double* in, DealerId target, double label, double lr, std::size_t d) {
    double* out = emb_.output.row(target).data();
    const double f = dot(in, out, d);
    const double g = logistic(f) - label;  // d loss / d f
    for (std::size_t k = 0; k < d; ++k) neu1e_[k] += g * out[k];
    for (std::size_t k = 0; k < d; ++k) out[k] -= lr * g * in[k];
  }

  EmbeddingMatrix& emb_;
  const AliasTable& neg_table_;
  const std::vector<DealerId>& neg_nodes_;
  std::size_t negatives_;
  std::vector<double> neu1e_;
};

double linear_lr(std::size_t processed, const EmbedConfig& cfg, std::size_t total) {
  const double progress = static_cast<double>(processed) / static_cast<double>(std::max<std::size_t>(total, 1));
  return std::max(cfg.min_learning_rate, cfg.learning_rate - (cfg.learning_rate - cfg.min_learning_rate) * progress);
}

// Processes every center of one walk; returns the number of pairs trained.
std::size_t train_walk(const Walk& walk, SgnsKernel& kernel, const EmbedConfig& cfg,
                       std::size_t& processed, std::size_t total, Rng& rng) {
  std::size_t pairs = 0;
  const auto len = static_cast<std::ptrdiff_t>(walk.size());
  for (std::ptrdiff_t i = 0; i < len; ++i) {
    const double lr = linear_lr(processed++, cfg, total);
    const auto b = static_cast<std::ptrdiff_t>(1 + uniform_index(rng, cfg.window));
    for (std::ptrdiff_t j = std::max<std::ptrdiff_t>(0, i - b); j <= std::min(len - 1, i + b); ++j) {
      if (j == i) continue;
      kernel.update(walk[i], walk[j], lr, rng);
      ++pairs;
    }
  }
  return pairs;
}

// Mean pair loss over the full window with a negative stream that restarts
// from the same seed on every call, so successive calls differ only through
// the parameters.
double probe_loss(const WalkCorpus& corpus, const EmbeddingMatrix& emb, const AliasTable& neg_table,
                  const std::vector<DealerId>& neg_nodes, const EmbedConfig& cfg) {
  Rng rng(derive_seed(cfg.seed, "probe"));
  const std::size_t d = emb.dims();
  double loss = 0.0;
  std::size_t pairs = 0;
  for (const auto& walk : corpus.walks) {
    const auto len = static_cast<std::ptrdiff_t>(walk.size());
    const auto w = static_cast<std::ptrdiff_t>(cfg.window);
    for (std::ptrdiff_t i = 0; i < len; ++i) {
      const double* in = emb.input.row(walk[i]).data();
      for (std::ptrdiff_t j = std::max<std::ptrdiff_t>(0, i - w); j <= std::min(len - 1, i + w); ++j) {
        if (j == i) continue;
        loss += neg_log_logistic(dot(in, emb.output.row(walk[j]).data(), d));
        for (std::size_t k = 0; k < cfg.negatives; ++k) {
          const DealerId neg = neg_nodes[neg_table.sample(rng)];
          if (neg == walk[j]) continue;
          loss += neg_log_logistic(-dot(in, emb.output.row(neg).data(), d));
        }
        ++pairs;
      }
    }
  }
  return pairs ? loss / static_cast<double>(pairs) : 0.0;
}

}  // namespace

void EmbedConfig::validate() const {
  if (window < 1) throw ConfigError("window must be at least 1");
  if (negatives < 1) throw ConfigError("negatives must be at least 1");
  if (!(learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
  if (!(min_learning_rate > 0.0) || min_learning_rate > learning_rate)
    throw ConfigError("minimum learning rate must be positive and not exceed the learning rate");
  if (threads < 1) throw ConfigError("threads must be at least 1");
}

std::size_t default_dimensions(std::size_t n) {
  auto d = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  while (d * d > n) --d;
  while ((d + 1) * (d + 1) <= n) ++d;
  return std::max<std::size_t>(d, 2);
}

double logistic(double x) {
  x = std::clamp(x, -kClamp, kClamp);
  return 1.0 / (1.0 + std::exp(-x));
}

double sgns_pair_loss(std::span<const double> center, std::span<const double> context, std::span<const Vec> negatives) {
  check_dims(center, context, negatives);
  const std::size_t d = center.size();
  double loss = neg_log_logistic(dot(center.data(), context.data(), d));
  for (const auto& n : negatives) loss += neg_log_logistic(-dot(center.data(), n.data(), d));
  return loss;
}

SgnsGradients sgns_gradients(std::span<const double> center, std::span<const double> context,
                             std::span<const Vec> negatives) {
  check_dims(center, context, negatives);
  const std::size_t d = center.size();
  SgnsGradients g;
  g.center.assign(d, 0.0);
  g.context.assign(d, 0.0);

  const double pos = logistic(dot(center.data(), context.data(), d)) - 1.0;
  for (std::size_t k = 0; k < d; ++k) {
    g.center[k] += pos * context[k];
    g.context[k] = pos * center[k];
  }
  for (const auto& n : negatives) {
    const double coef = logistic(dot(center.data(), n.data(), d));
    Vec gn(d);
    for (std::size_t k = 0; k < d; ++k) {
      g.center[k] += coef * n[k];
      gn[k] = coef * center[k];
    }
    g.negatives.push_back(std::move(gn));
  }
  return g;
}

EmbeddingMatrix initial_embedding(std::size_t n, std::size_t dims, std::uint64_t seed) {
  EmbeddingMatrix emb{DenseMatrix(n, dims), DenseMatrix(n, dims)};
  Rng rng(derive_seed(seed, "init"));
  const double half = 0.5 / static_cast<double>(dims);
  for (double& x : emb.input.values()) x = (uniform01(rng) * 2.0 - 1.0) * half;
  return emb;
}

EmbeddingMatrix train(const WalkCorpus& corpus, std::size_t n, const EmbedConfig& cfg, TrainStats* stats) {
  cfg.validate();
  std::vector<std::uint64_t> counts(n, 0);
  std::size_t positions = 0;
  for (const auto& walk : corpus.walks) {
    for (DealerId u : walk) {
      if (u >= n) throw NodeIdOutOfRange("walk contains node " + std::to_string(u) + " but n = " + std::to_string(n));
      ++counts[u];
    }
    positions += walk.size();
  }

  const std::size_t dims = cfg.dimensions == 0 ? default_dimensions(std::max<std::size_t>(n, 1)) : cfg.dimensions;
  EmbeddingMatrix emb = initial_embedding(n, dims, cfg.seed);
  if (stats) *stats = {};
  if (positions == 0) return emb;

  std::vector<DealerId> neg_nodes;
  std::vector<double> neg_weights;
  for (DealerId u = 0; u < n; ++u) {
    if (counts[u] == 0) continue;
    neg_nodes.push_back(u);
    neg_weights.push_back(std::pow(static_cast<double>(counts[u]), 0.75));
  }
  const AliasTable neg_table(neg_weights);
  const std::size_t total = positions * cfg.epochs;

  if (cfg.deterministic || cfg.threads == 1) {
    Rng rng(derive_seed(cfg.seed, "sgns"));
    SgnsKernel kernel(emb, neg_table, neg_nodes, cfg.negatives);
    std::size_t processed = 0;
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
      std::size_t pairs = 0;
      for (const auto& walk : corpus.walks) pairs += train_walk(walk, kernel, cfg, processed, total, rng);
      if (stats) {
        stats->epoch_loss.push_back(probe_loss(corpus, emb, neg_table, neg_nodes, cfg));
        stats->pairs_per_epoch = pairs;
      }
    }
    return emb;
  }

  // Lock-free parallel training: rows are shared across workers and
  // concurrent updates may be lost.
  std::atomic<std::size_t> progress{0};
  const auto walk_count = static_cast<std::int64_t>(corpus.walks.size());
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::size_t pairs = 0;
#pragma omp parallel num_threads(cfg.threads) reduction(+ : pairs)
    {
      Rng rng(derive_seed(cfg.seed, epoch, static_cast<std::uint64_t>(omp_get_thread_num())));
      SgnsKernel kernel(emb, neg_table, neg_nodes, cfg.negatives);
#pragma omp for schedule(dynamic, 4)
      for (std::int64_t w = 0; w < walk_count; ++w) {
        const auto& walk = corpus.walks[w];
        std::size_t processed = progress.fetch_add(walk.size(), std::memory_order_relaxed);
        pairs += train_walk(walk, kernel, cfg, processed, total, rng);
      }
    }
    if (stats) {
      stats->epoch_loss.push_back(probe_loss(corpus, emb, neg_table, neg_nodes, cfg));
      stats->pairs_per_epoch = pairs;
    }
  }
  return emb;
}

}  // namespace circtrade
