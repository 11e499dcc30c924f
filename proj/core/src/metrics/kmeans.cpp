#include "stc/metrics/kmeans.hpp"

#include <limits>
#include <string>

#include "stc/common/error.hpp"
#include "stc/common/rng.hpp"

namespace stc::metrics {
namespace {

double squared_distance(const MatrixD& a, Eigen::Index i, const MatrixD& b, Eigen::Index j) {
  return (a.row(i) - b.row(j)).squaredNorm();
}

MatrixD plus_plus_seeding(const MatrixD& x, std::size_t k, Rng& rng) {
  const Eigen::Index n = x.rows();
  MatrixD centers(static_cast<Eigen::Index>(k), x.cols());
  centers.row(0) = x.row(static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(n))));
  std::vector<double> closest(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) closest[static_cast<std::size_t>(i)] = squared_distance(x, i, centers, 0);

  for (std::size_t c = 1; c < k; ++c) {
    double total = 0.0;
    for (double d : closest) total += d;
    Eigen::Index pick = 0;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double running = 0.0;
      pick = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        running += closest[static_cast<std::size_t>(i)];
        if (running > target && closest[static_cast<std::size_t>(i)] > 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(n)));
    }
    centers.row(static_cast<Eigen::Index>(c)) = x.row(pick);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double d = squared_distance(x, i, centers, static_cast<Eigen::Index>(c));
      if (d < closest[static_cast<std::size_t>(i)]) closest[static_cast<std::size_t>(i)] = d;
    }
  }
  return centers;
}

/// Nearest centroid per row (lowest index on ties); returns the inertia.
double assign(const MatrixD& x, const MatrixD& centers, std::vector<std::size_t>& labels,
              std::vector<double>& distances) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_c = 0;
    for (Eigen::Index c = 0; c < centers.rows(); ++c) {
      const double d = squared_distance(x, i, centers, c);
      if (d < best) {
        best = d;
        best_c = static_cast<std::size_t>(c);
      }
    }
    labels[static_cast<std::size_t>(i)] = best_c;
    distances[static_cast<std::size_t>(i)] = best;
    total += best;
  }
  return total;
}

/// Moves the farthest point of a multi-member cluster into each empty
/// cluster. Returns true if anything changed.
bool repair_empty(const MatrixD& x, MatrixD& centers, std::vector<std::size_t>& labels,
                  std::vector<double>& distances) {
  const auto k = static_cast<std::size_t>(centers.rows());
  std::vector<std::size_t> sizes(k, 0);
  for (std::size_t l : labels) ++sizes[l];
  bool changed = false;
  for (std::size_t c = 0; c < k; ++c) {
    if (sizes[c] != 0) continue;
    std::size_t far = labels.size();
    double far_d = -1.0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (sizes[labels[i]] > 1 && distances[i] > far_d) {
        far_d = distances[i];
        far = i;
      }
    }
    if (far == labels.size()) break;  // every cluster is a singleton
    --sizes[labels[far]];
    labels[far] = c;
    sizes[c] = 1;
    distances[far] = 0.0;
    centers.row(static_cast<Eigen::Index>(c)) = x.row(static_cast<Eigen::Index>(far));
    changed = true;
  }
  return changed;
}

void update_means(const MatrixD& x, std::span<const std::size_t> labels, MatrixD& centers) {
  const Eigen::Index k = centers.rows();
  MatrixD sums = MatrixD::Zero(k, x.cols());
  std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    sums.row(static_cast<Eigen::Index>(labels[i])) += x.row(static_cast<Eigen::Index>(i));
    ++counts[labels[i]];
  }
  for (Eigen::Index c = 0; c < k; ++c)
    if (counts[static_cast<std::size_t>(c)] > 0)
      centers.row(c) = sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
}

ClusterResult single_run(const MatrixD& x, const KMeansConfig& config, Rng& rng) {
  const auto n = static_cast<std::size_t>(x.rows());
  ClusterResult result;
  result.centroids = plus_plus_seeding(x, config.k, rng);
  result.labels.assign(n, 0);
  std::vector<double> distances(n);
  std::vector<std::size_t> previous;
  double previous_inertia = std::numeric_limits<double>::infinity();

  for (int iter = 0; iter < config.max_iters; ++iter) {
    double current = assign(x, result.centroids, result.labels, distances);
    if (repair_empty(x, result.centroids, result.labels, distances)) {
      current = 0.0;
      for (double d : distances) current += d;
    }
    if (current > previous_inertia * (1.0 + 1e-12) + 1e-300) ++result.inertia_increases;
    previous_inertia = current;
    result.iterations = iter + 1;

    const MatrixD old = result.centroids;
    update_means(x, result.labels, result.centroids);
    if (result.labels == previous) break;
    previous = result.labels;
    const double scale = old.norm();
    const double shift = (result.centroids - old).norm();
    if (shift <= config.tol * (scale > 0.0 ? scale : 1.0)) break;
  }

  const double last = assign(x, result.centroids, result.labels, distances);
  if (last > previous_inertia * (1.0 + 1e-12) + 1e-300) ++result.inertia_increases;
  update_means(x, result.labels, result.centroids);
  result.inertia = inertia(x, result.labels, result.centroids);
  return result;
}

}  // namespace

double inertia(const MatrixD& x, std::span<const std::size_t> labels, const MatrixD& centroids) {
  require(labels.size() == static_cast<std::size_t>(x.rows()), ErrorKind::shape_mismatch,
          "label count does not match sample count");
  double total = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    require(labels[i] < static_cast<std::size_t>(centroids.rows()), ErrorKind::invalid_argument,
            "label out of range");
    total += squared_distance(x, static_cast<Eigen::Index>(i), centroids, static_cast<Eigen::Index>(labels[i]));
  }
  return total;
}

ClusterResult kmeans(const MatrixD& x, const KMeansConfig& config) {
  require(config.k >= 1, ErrorKind::invalid_argument, "k must be positive");
  require(x.rows() >= 1, ErrorKind::empty_input, "k-means on an empty matrix");
  require(config.k <= static_cast<std::size_t>(x.rows()), ErrorKind::invalid_argument,
          "k=" + std::to_string(config.k) + " exceeds n=" + std::to_string(x.rows()));
  require(config.restarts >= 1 && config.max_iters >= 1, ErrorKind::invalid_argument,
          "restarts and max_iters must be positive");
  require(x.allFinite(), ErrorKind::non_finite, "k-means input contains non-finite values");

  ClusterResult best;
  std::size_t increases = 0;
  for (int r = 0; r < config.restarts; ++r) {
    Rng rng(derive_seed(config.seed, "kmeans") + static_cast<std::uint64_t>(r));
    ClusterResult run = single_run(x, config, rng);
    increases += run.inertia_increases;
    if (r == 0 || run.inertia < best.inertia) best = std::move(run);
  }
  best.seed = config.seed;
  best.inertia_increases = increases;
  return best;
}

}  // namespace stc::metrics
