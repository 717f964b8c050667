#pragma once

#include "circtrade/rng.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace circtrade {

// Vose alias method: O(k) construction, O(1) sampling from a discrete
// distribution proportional to the input weights.
class AliasTable {
public:
  AliasTable() = default;
  // Throws EmptyWeights if weights is empty, NonPositiveWeight if any weight
  // is not finite and strictly positive.
  explicit AliasTable(std::span<const double> weights);

  std::size_t size() const noexcept { return prob_.size(); }
  bool empty() const noexcept { return prob_.empty(); }

  std::size_t sample(Rng& rng) const {
    const auto i = static_cast<std::size_t>(uniform_index(rng, prob_.size()));
    return uniform01(rng) < prob_[i] ? i : alias_[i];
  }

  // Probability mass the table assigns to outcome i (reconstructed from the
  // alias columns; equals weights[i]/sum up to round-off).
  double probability(std::size_t i) const;

private:
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
};

}  // namespace circtrade
