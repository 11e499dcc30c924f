#pragma once

// Reference implementations used only by tests. Each one takes a different
// route from the library code it checks: plain loops instead of Eigen
// products, enumeration instead of optimization, dense instead of sparse.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <utility>
#include <vector>

namespace stc::testing {

using DenseMatrix = std::vector<std::vector<double>>;

/// Central differences of f with respect to every entry of params.
inline std::vector<double> central_differences(const std::function<double()>& f, std::vector<double*> params,
                                               double h = 1e-6) {
  std::vector<double> grad;
  grad.reserve(params.size());
  for (double* p : params) {
    const double saved = *p;
    *p = saved + h;
    const double up = f();
    *p = saved - h;
    const double down = f();
    *p = saved;
    grad.push_back((up - down) / (2.0 * h));
  }
  return grad;
}

/// |a - b| / max(|a|, |b|, floor). The floor keeps entries that are zero up
/// to finite-difference noise from dominating.
inline double relative_error(double a, double b, double floor = 1e-6) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

inline double max_relative_error(const std::vector<double>& a, const std::vector<double>& b, double floor = 1e-6) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, relative_error(a[i], b[i], floor));
  return worst;
}

inline DenseMatrix dense_matmul(const DenseMatrix& a, const DenseMatrix& b) {
  const std::size_t n = a.size(), m = b.size(), p = b.empty() ? 0 : b[0].size();
  DenseMatrix out(n, std::vector<double>(p, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t j = 0; j < p; ++j) out[i][j] += a[i][k] * b[k][j];
  return out;
}

/// D^-1/2 (A + I) D^-1/2 from an undirected edge list, computed densely.
inline DenseMatrix dense_normalized_adjacency(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  DenseMatrix a(n, std::vector<double>(n, 0.0));
  for (auto [u, v] : edges) a[u][v] = a[v][u] = 1.0;
  for (std::size_t i = 0; i < n; ++i) a[i][i] = 1.0;
  std::vector<double> degree(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) degree[i] += a[i][j];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] /= std::sqrt(degree[i] * degree[j]);
  return a;
}

/// relu(A H W) with relu optional, dense loops.
inline DenseMatrix dense_gcn_layer(const DenseMatrix& a, const DenseMatrix& h, const DenseMatrix& w, bool relu) {
  DenseMatrix out = dense_matmul(dense_matmul(a, h), w);
  if (relu)
    for (auto& row : out)
      for (auto& v : row) v = std::max(v, 0.0);
  return out;
}

/// Max matched count over every injective relabeling of pred into truth,
/// by enumerating permutations of max(k_true, k_pred) symbols.
inline double brute_force_accuracy(const std::vector<std::size_t>& truth, const std::vector<std::size_t>& pred) {
  const std::size_t kt = *std::max_element(truth.begin(), truth.end()) + 1;
  const std::size_t kp = *std::max_element(pred.begin(), pred.end()) + 1;
  const std::size_t m = std::max(kt, kp);
  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::size_t best = 0;
  do {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) hits += perm[pred[i]] == truth[i] ? 1 : 0;
    best = std::max(best, hits);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(best) / static_cast<double>(truth.size());
}

/// NMI with geometric normalization from joint and marginal counts
/// accumulated in maps.
inline double entropy_nmi(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  const double n = static_cast<double>(a.size());
  std::map<std::size_t, std::size_t> ca, cb;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> cab;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++ca[a[i]];
    ++cb[b[i]];
    ++cab[{a[i], b[i]}];
  }
  if (ca.size() == 1 && cb.size() == 1) return 1.0;
  if (ca.size() == 1 || cb.size() == 1) return 0.0;
  double ha = 0.0, hb = 0.0, mi = 0.0;
  for (auto [k, c] : ca) ha -= (c / n) * std::log(c / n);
  for (auto [k, c] : cb) hb -= (c / n) * std::log(c / n);
  for (auto [key, c] : cab) {
    const double pa = ca[key.first] / n, pb = cb[key.second] / n, p = c / n;
    mi += p * std::log(p / (pa * pb));
  }
  return mi / std::sqrt(ha * hb);
}

/// Minimum within-cluster sum of squares over all k^n labelings.
inline double exhaustive_kmeans_inertia(const std::vector<std::vector<double>>& points, std::size_t k) {
  const std::size_t n = points.size();
  const std::size_t d = points[0].size();
  std::vector<std::size_t> labels(n, 0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    double total = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      std::vector<double> mean(d, 0.0);
      std::size_t count = 0;
      for (std::size_t i = 0; i < n; ++i)
        if (labels[i] == c) {
          ++count;
          for (std::size_t j = 0; j < d; ++j) mean[j] += points[i][j];
        }
      if (count == 0) continue;
      for (auto& m : mean) m /= static_cast<double>(count);
      for (std::size_t i = 0; i < n; ++i)
        if (labels[i] == c)
          for (std::size_t j = 0; j < d; ++j) total += (points[i][j] - mean[j]) * (points[i][j] - mean[j]);
    }
    best = std::min(best, total);
    std::size_t pos = 0;
    while (pos < n && ++labels[pos] == k) labels[pos++] = 0;
    if (pos == n) break;
  }
  return best;
}

/// Minimum assignment cost over all permutations (square input).
inline double brute_force_assignment(const DenseMatrix& cost) {
  std::vector<std::size_t> perm(cost.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double best = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (std::size_t i = 0; i < perm.size(); ++i) total += cost[i][perm[i]];
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace stc::testing
