#pragma once

#include "circtrade/matrix.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace circtrade {

struct DbscanConfig {
  double eps = 0.15;         // cosine-distance radius
  std::size_t min_pts = 5;   // neighbors within eps, the point itself included

  void validate() const;
};

struct ClusterAssignment {
  static constexpr int noise = -1;

  std::vector<int> labels;  // cluster id in 0..cluster_count-1, or noise
  int cluster_count = 0;

  friend bool operator==(const ClusterAssignment&, const ClusterAssignment&) = default;
};

// 1 - a.b / (|a||b|), clamped to [0, 2]; results within 1e-12 of an end
// snap to it. Throws ZeroVector, DimensionMismatch.
double cosine_distance(std::span<const double> a, std::span<const double> b);

// { j : cosine_distance(points[i], points[j]) <= eps }, ascending.
std::vector<std::size_t> region_query(const DenseMatrix& points, std::size_t i, double eps);

// DBSCAN over matrix rows. Points are scanned in row order; clusters take ids
// in order of their first core point; a border point joins the first cluster
// whose expansion reaches it. Neighborhoods are computed on OpenMP threads.
// Throws ZeroVector on an all-zero row.
ClusterAssignment dbscan(const DenseMatrix& points, const DbscanConfig& cfg);

// Single-threaded reference with on-demand region queries; same output as dbscan.
ClusterAssignment dbscan_serial(const DenseMatrix& points, const DbscanConfig& cfg);

// Indices of core points (>= min_pts neighbors within eps).
std::vector<std::size_t> core_points(const DenseMatrix& points, const DbscanConfig& cfg);

}  // namespace circtrade
