#include "circtrade/alias_table.hpp"

#include "circtrade/error.hpp"

#include <cmath>
#include <numeric>

namespace circtrade {

AliasTable::AliasTable(std::span<const double> weights) {
  if (weights.empty()) throw EmptyWeights("alias table needs at least one weight");
  double sum = 0.0;
  for (double w : weights) {
    if (!(std::isfinite(w) && w > 0.0)) throw NonPositiveWeight("alias table weights must be finite and positive");
    sum += w;
  }
  const std::size_t k = weights.size();
  prob_.resize(k);
  alias_.resize(k);

  std::vector<double> scaled(k);
  std::vector<std::uint32_t> small, large;
  small.reserve(k);
  large.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    scaled[i] = weights[i] * static_cast<double>(k) / sum;
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
  }
  while (!small.empty() && !large.empty()) {
    const auto s = small.back();
    small.pop_back();
    const auto l = large.back();
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  // Leftovers are 1 up to round-off.
  for (auto i : large) {
    prob_[i] = 1.0;
    alias_[i] = i;
  }
  for (auto i : small) {
    prob_[i] = 1.0;
    alias_[i] = i;
  }
}

double AliasTable::probability(std::size_t i) const {
  const double k = static_cast<double>(prob_.size());
  double mass = prob_[i];
  for (std::size_t j = 0; j < prob_.size(); ++j)
    if (alias_[j] == i && j != i) mass += 1.0 - prob_[j];
  return mass / k;
}

}  // namespace circtrade
