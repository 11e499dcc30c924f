#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "stc/common/matrix.hpp"

namespace stc::metrics {

struct KMeansConfig {
  std::size_t k = 2;
  int restarts = 10;
  int max_iters = 300;
  double tol = 1e-4;  // relative Frobenius centroid shift
  std::uint64_t seed = 0;
};

struct ClusterResult {
  std::vector<std::size_t> labels;
  MatrixD centroids;  // k x d
  double inertia = 0.0;
  std::uint64_t seed = 0;
  int iterations = 0;  // Lloyd iterations of the winning restart
  /// Assignment steps whose inertia exceeded the previous step's, summed
  /// over restarts. Lloyd's algorithm guarantees zero; kept as a monitor.
  std::size_t inertia_increases = 0;
};

/// k-means++ seeding and Lloyd iterations, best of `restarts` by inertia
/// (ties go to the earlier restart). Empty clusters are refilled with the
/// point farthest from its centroid. On return the centroids are the means
/// of the returned partition and inertia is its exact within-cluster sum of
/// squares.
ClusterResult kmeans(const MatrixD& x, const KMeansConfig& config);

/// Sum of squared distances from rows of x to their assigned centroid.
double inertia(const MatrixD& x, std::span<const std::size_t> labels, const MatrixD& centroids);

}  // namespace stc::metrics
