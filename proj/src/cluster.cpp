#include "circtrade/cluster.hpp"

#include "circtrade/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <string>

namespace circtrade {

namespace {

constexpr double kSnap = 1e-12;

double norm(std::span<const double> a) {
  double s = 0.0;
  for (double x : a) s += x * x;
  return std::sqrt(s);
}

double distance_from_parts(double dot, double na, double nb) {
  double d = 1.0 - dot / (na * nb);
  if (d < kSnap) return 0.0;
  if (d > 2.0 - kSnap) return 2.0;
  return d;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

std::vector<double> row_norms(const DenseMatrix& points) {
  std::vector<double> norms(points.rows());
  for (std::size_t i = 0; i < points.rows(); ++i) {
    norms[i] = norm(points.row(i));
    if (norms[i] == 0.0) throw ZeroVector("embedding row " + std::to_string(i) + " is all zero");
  }
  return norms;
}

std::vector<std::size_t> neighbors_of(const DenseMatrix& points, const std::vector<double>& norms, std::size_t i,
                                      double eps) {
  std::vector<std::size_t> out;
  const auto a = points.row(i);
  for (std::size_t j = 0; j < points.rows(); ++j)
    if (distance_from_parts(dot(a, points.row(j)), norms[i], norms[j]) <= eps) out.push_back(j);
  return out;
}

// Standard expansion; `neighbors(i)` yields the eps-neighborhood of i.
ClusterAssignment expand(std::size_t n, std::size_t min_pts,
                         const std::function<const std::vector<std::size_t>&(std::size_t)>& neighbors) {
  constexpr int unvisited = -2;
  ClusterAssignment out;
  out.labels.assign(n, unvisited);
  std::deque<std::size_t> frontier;
  for (std::size_t i = 0; i < n; ++i) {
    if (out.labels[i] != unvisited) continue;
    const auto& seeds = neighbors(i);
    if (seeds.size() < min_pts) {
      out.labels[i] = ClusterAssignment::noise;
      continue;
    }
    const int c = out.cluster_count++;
    out.labels[i] = c;
    frontier.assign(seeds.begin(), seeds.end());
    while (!frontier.empty()) {
      const auto j = frontier.front();
      frontier.pop_front();
      if (out.labels[j] == ClusterAssignment::noise) out.labels[j] = c;  // border
      if (out.labels[j] != unvisited) continue;
      out.labels[j] = c;
      const auto& nb = neighbors(j);
      if (nb.size() >= min_pts) frontier.insert(frontier.end(), nb.begin(), nb.end());
    }
  }
  return out;
}

}  // namespace

void DbscanConfig::validate() const {
  if (!(eps >= 0.0 && eps <= 2.0)) throw ConfigError("eps must lie in [0, 2]");
  if (min_pts < 1) throw ConfigError("min_pts must be at least 1");
}

double cosine_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionMismatch("cosine distance of vectors with different dimensions");
  const double na = norm(a), nb = norm(b);
  if (na == 0.0 || nb == 0.0) throw ZeroVector("cosine distance of a zero vector");
  return distance_from_parts(dot(a, b), na, nb);
}

std::vector<std::size_t> region_query(const DenseMatrix& points, std::size_t i, double eps) {
  if (i >= points.rows()) throw IndexError("region query index out of range");
  return neighbors_of(points, row_norms(points), i, eps);
}

ClusterAssignment dbscan(const DenseMatrix& points, const DbscanConfig& cfg) {
  cfg.validate();
  const auto norms = row_norms(points);
  const auto n = static_cast<std::int64_t>(points.rows());
  std::vector<std::vector<std::size_t>> neighborhoods(points.rows());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < n; ++i)
    neighborhoods[i] = neighbors_of(points, norms, static_cast<std::size_t>(i), cfg.eps);
  return expand(points.rows(), cfg.min_pts,
                [&](std::size_t i) -> const std::vector<std::size_t>& { return neighborhoods[i]; });
}

ClusterAssignment dbscan_serial(const DenseMatrix& points, const DbscanConfig& cfg) {
  cfg.validate();
  const auto norms = row_norms(points);
  std::vector<std::size_t> scratch;
  return expand(points.rows(), cfg.min_pts, [&](std::size_t i) -> const std::vector<std::size_t>& {
    scratch = neighbors_of(points, norms, i, cfg.eps);
    return scratch;
  });
}

std::vector<std::size_t> core_points(const DenseMatrix& points, const DbscanConfig& cfg) {
  cfg.validate();
  const auto norms = row_norms(points);
  std::vector<std::size_t> cores;
  for (std::size_t i = 0; i < points.rows(); ++i)
    if (neighbors_of(points, norms, i, cfg.eps).size() >= cfg.min_pts) cores.push_back(i);
  return cores;
}

}  // namespace circtrade
