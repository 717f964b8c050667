#include "circtrade/metrics.hpp"

#include "circtrade/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace circtrade {

namespace {

struct Contingency {
  std::map<std::pair<int, int>, double> cells;
  std::map<int, double> rows, cols;
  double n = 0.0;
};

Contingency contingency(std::span<const int> pred, std::span<const int> truth) {
  if (pred.size() != truth.size())
    throw LengthMismatch("labelings have different lengths (" + std::to_string(pred.size()) + " vs " +
                         std::to_string(truth.size()) + ")");
  Contingency t;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    t.cells[{pred[i], truth[i]}] += 1.0;
    t.rows[pred[i]] += 1.0;
    t.cols[truth[i]] += 1.0;
  }
  t.n = static_cast<double>(pred.size());
  return t;
}

double comb2(double x) { return x * (x - 1.0) / 2.0; }

double entropy(const std::map<int, double>& marginal, double n) {
  double h = 0.0;
  for (const auto& [label, count] : marginal) {
    const double p = count / n;
    h -= p * std::log(p);
  }
  return h;
}

std::vector<DealerId> sorted_unique(std::span<const DealerId> v) {
  std::vector<DealerId> s(v.begin(), v.end());
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

}  // namespace

double adjusted_rand_index(std::span<const int> pred, std::span<const int> truth) {
  const auto t = contingency(pred, truth);
  double index = 0.0, a = 0.0, b = 0.0;
  for (const auto& [key, c] : t.cells) index += comb2(c);
  for (const auto& [key, c] : t.rows) a += comb2(c);
  for (const auto& [key, c] : t.cols) b += comb2(c);
  const double total = comb2(t.n);
  if (total == 0.0) return 1.0;
  const double expected = a * b / total;
  const double max_index = 0.5 * (a + b);
  if (max_index == expected) return 1.0;
  return (index - expected) / (max_index - expected);
}

double normalized_mutual_information(std::span<const int> pred, std::span<const int> truth) {
  const auto t = contingency(pred, truth);
  if (t.n == 0.0) return 1.0;
  const double hp = entropy(t.rows, t.n), ht = entropy(t.cols, t.n);
  if (hp == 0.0 && ht == 0.0) return 1.0;
  double mi = 0.0;
  for (const auto& [key, c] : t.cells) {
    const double pr = t.rows.at(key.first), tr = t.cols.at(key.second);
    mi += (c / t.n) * std::log(c * t.n / (pr * tr));
  }
  return std::clamp(mi / (0.5 * (hp + ht)), 0.0, 1.0);
}

std::vector<int> noise_as_singletons(std::span<const int> labels) {
  int next = 0;
  for (int l : labels) next = std::max(next, l + 1);
  std::vector<int> out(labels.begin(), labels.end());
  for (int& l : out)
    if (l < 0) l = next++;
  return out;
}

double jaccard(std::span<const DealerId> a, std::span<const DealerId> b) {
  const auto sa = sorted_unique(a), sb = sorted_unique(b);
  if (sa.empty() && sb.empty()) return 1.0;
  std::vector<DealerId> common;
  std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(common));
  const double inter = static_cast<double>(common.size());
  return inter / (static_cast<double>(sa.size() + sb.size()) - inter);
}

RingRecovery ring_recovery(const std::vector<std::vector<DealerId>>& predicted,
                           const std::vector<std::vector<DealerId>>& planted, double threshold) {
  RingRecovery r;
  std::size_t recovered = 0;
  for (const auto& ring : planted)
    if (std::any_of(predicted.begin(), predicted.end(), [&](const auto& c) { return jaccard(c, ring) >= threshold; }))
      ++recovered;
  r.recall = planted.empty() ? 0.0 : static_cast<double>(recovered) / static_cast<double>(planted.size());

  std::size_t matching = 0;
  for (const auto& c : predicted)
    if (std::any_of(planted.begin(), planted.end(), [&](const auto& ring) { return jaccard(c, ring) >= threshold; }))
      ++matching;
  r.precision = predicted.empty() ? 1.0 : static_cast<double>(matching) / static_cast<double>(predicted.size());
  return r;
}

}  // namespace circtrade
