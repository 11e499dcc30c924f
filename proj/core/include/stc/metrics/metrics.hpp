#pragma once

#include <cstdint>
#include <vector>

#include "stc/common/matrix.hpp"
#include "stc/corpus/labels.hpp"
#include "stc/metrics/kmeans.hpp"

namespace stc::metrics {

using corpus::LabelVector;

/// Best matched fraction over one-to-one maps from predicted to true
/// clusters, solved as an assignment problem on the contingency table.
double clustering_accuracy(const LabelVector& truth, const LabelVector& pred);

enum class NmiNormalization { geometric, arithmetic, min, max };

/// I(U;V) normalized by the chosen mean of H(U), H(V) (natural log).
/// Two single-cluster partitions score 1; otherwise a zero entropy scores 0.
double nmi(const LabelVector& truth, const LabelVector& pred,
           NmiNormalization normalization = NmiNormalization::geometric);

/// Counts n_ij with i over truth clusters and j over predicted clusters.
MatrixD contingency(const LabelVector& truth, const LabelVector& pred);

struct MetricSummary {
  double acc_mean = 0.0;
  double acc_std = 0.0;
  double nmi_mean = 0.0;
  double nmi_std = 0.0;
  std::vector<double> acc;
  std::vector<double> nmi;
  std::vector<std::uint64_t> seeds;

  std::size_t runs() const noexcept { return acc.size(); }
};

/// Mean and population standard deviation over runs.
MetricSummary summarize(std::vector<double> acc, std::vector<double> nmi, std::vector<std::uint64_t> seeds);

/// K-means on z with seeds base_seed .. base_seed + runs - 1, scored
/// against truth. Other k-means settings come from base.
MetricSummary evaluate_pipeline(const MatrixD& z, const LabelVector& truth, std::size_t k, int runs,
                                std::uint64_t base_seed, KMeansConfig base = {},
                                NmiNormalization normalization = NmiNormalization::geometric);

}  // namespace stc::metrics
