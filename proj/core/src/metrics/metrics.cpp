#include "stc/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "stc/common/error.hpp"
#include "stc/metrics/hungarian.hpp"

namespace stc::metrics {
namespace {

double entropy(const Eigen::VectorXd& counts, double n) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < counts.size(); ++i)
    if (counts(i) > 0.0) h -= (counts(i) / n) * std::log(counts(i) / n);
  return h;
}

}  // namespace

MatrixD contingency(const LabelVector& truth, const LabelVector& pred) {
  require(truth.size() == pred.size(), ErrorKind::shape_mismatch,
          "label vectors differ in length (" + std::to_string(truth.size()) + " vs " +
              std::to_string(pred.size()) + ")");
  require(truth.size() > 0, ErrorKind::empty_input, "no labels to compare");
  MatrixD table = MatrixD::Zero(static_cast<Eigen::Index>(truth.k()), static_cast<Eigen::Index>(pred.k()));
  for (std::size_t i = 0; i < truth.size(); ++i)
    table(static_cast<Eigen::Index>(truth[i]), static_cast<Eigen::Index>(pred[i])) += 1.0;
  return table;
}

double clustering_accuracy(const LabelVector& truth, const LabelVector& pred) {
  const MatrixD table = contingency(truth, pred);
  // Rows: predicted clusters, columns: true clusters; maximize matches.
  const MatrixD cost = -table.transpose();
  const Assignment a = solve_assignment(cost);
  return -a.cost / static_cast<double>(truth.size());
}

double nmi(const LabelVector& truth, const LabelVector& pred, NmiNormalization normalization) {
  const MatrixD table = contingency(truth, pred);
  const double n = static_cast<double>(truth.size());
  const Eigen::VectorXd row_sums = table.rowwise().sum();
  const Eigen::VectorXd col_sums = table.colwise().sum().transpose();
  const double hu = entropy(row_sums, n);
  const double hv = entropy(col_sums, n);
  if (hu == 0.0 && hv == 0.0) return 1.0;
  if (hu == 0.0 || hv == 0.0) return 0.0;

  double mutual = 0.0;
  for (Eigen::Index i = 0; i < table.rows(); ++i)
    for (Eigen::Index j = 0; j < table.cols(); ++j) {
      const double nij = table(i, j);
      if (nij > 0.0) mutual += (nij / n) * std::log(n * nij / (row_sums(i) * col_sums(j)));
    }
  double norm = 0.0;
  switch (normalization) {
    case NmiNormalization::geometric: norm = std::sqrt(hu * hv); break;
    case NmiNormalization::arithmetic: norm = 0.5 * (hu + hv); break;
    case NmiNormalization::min: norm = std::min(hu, hv); break;
    case NmiNormalization::max: norm = std::max(hu, hv); break;
  }
  return std::clamp(mutual / norm, 0.0, 1.0);
}

MetricSummary summarize(std::vector<double> acc, std::vector<double> nmi_values, std::vector<std::uint64_t> seeds) {
  require(!acc.empty() && acc.size() == nmi_values.size(), ErrorKind::invalid_argument,
          "need matching, non-empty metric lists");
  auto stats = [](const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    return std::pair{mean, std::sqrt(var / static_cast<double>(v.size()))};
  };
  MetricSummary s;
  std::tie(s.acc_mean, s.acc_std) = stats(acc);
  std::tie(s.nmi_mean, s.nmi_std) = stats(nmi_values);
  s.acc = std::move(acc);
  s.nmi = std::move(nmi_values);
  s.seeds = std::move(seeds);
  return s;
}

MetricSummary evaluate_pipeline(const MatrixD& z, const LabelVector& truth, std::size_t k, int runs,
                                std::uint64_t base_seed, KMeansConfig base, NmiNormalization normalization) {
  require(runs >= 1, ErrorKind::invalid_argument, "runs must be >= 1");
  std::vector<double> acc, nmi_values;
  std::vector<std::uint64_t> seeds;
  for (int r = 0; r < runs; ++r) {
    KMeansConfig config = base;
    config.k = k;
    config.seed = base_seed + static_cast<std::uint64_t>(r);
    const ClusterResult result = kmeans(z, config);
    const LabelVector pred{std::span<const std::size_t>(result.labels)};
    acc.push_back(clustering_accuracy(truth, pred));
    nmi_values.push_back(nmi(truth, pred, normalization));
    seeds.push_back(config.seed);
  }
  return summarize(std::move(acc), std::move(nmi_values), std::move(seeds));
}

}  // namespace stc::metrics
