#pragma once

#include "circtrade/matrix.hpp"
#include "circtrade/walker.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace circtrade {

struct EmbedConfig {
  std::size_t dimensions = 0;  // 0 selects default_dimensions(node count)
  std::size_t window = 5;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  double learning_rate = 0.025;
  double min_learning_rate = 1e-4;
  std::uint64_t seed = 0;
  // Deterministic training is single-threaded and reproducible bit for bit.
  // Otherwise `threads` workers update the shared tables without locks.
  bool deterministic = true;
  int threads = 1;

  void validate() const;
};

// Skip-gram tables. `input` rows are the published embeddings; row i belongs to dealer i.
struct EmbeddingMatrix {
  DenseMatrix input;
  DenseMatrix output;

  std::size_t rows() const noexcept { return input.rows(); }
  std::size_t dims() const noexcept { return input.cols(); }
};

struct TrainStats {
  // Mean SGNS loss per positive pair after each epoch, measured over the full
  // window with a fixed negative stream so epochs are comparable.
  std::vector<double> epoch_loss;
  std::size_t pairs_per_epoch = 0;  // pairs trained in the last epoch
};

// floor(sqrt(n)), at least 2.
std::size_t default_dimensions(std::size_t n);

// Logistic function with its argument clamped to [-30, 30].
double logistic(double x);

using Vec = std::vector<double>;

// -ln s(c.x) - sum_i ln s(-c.n_i). Throws DimensionMismatch.
double sgns_pair_loss(std::span<const double> center, std::span<const double> context, std::span<const Vec> negatives);

struct SgnsGradients {
  Vec center;
  Vec context;
  std::vector<Vec> negatives;
};

SgnsGradients sgns_gradients(std::span<const double> center, std::span<const double> context,
                             std::span<const Vec> negatives);

// Initial tables: input uniform in [-0.5/d, 0.5/d], output zero.
EmbeddingMatrix initial_embedding(std::size_t n, std::size_t dims, std::uint64_t seed);

// Trains SGNS over the corpus: positives are pairs within a window shrunk
// uniformly in 1..window per center, negatives are drawn from corpus
// frequency^(3/4), and the step size decays linearly to min_learning_rate.
// Throws NodeIdOutOfRange.
EmbeddingMatrix train(const WalkCorpus& corpus, std::size_t n, const EmbedConfig& cfg, TrainStats* stats = nullptr);

}  // namespace circtrade
