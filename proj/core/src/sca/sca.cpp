#include "stc/sca/sca.hpp"

#include <numeric>

#include "stc/common/rng.hpp"
#include "stc/metrics/kmeans.hpp"
#include "stc/metrics/metrics.hpp"
#include "stc/nn/optimizer.hpp"

namespace stc::sca {

std::vector<std::size_t> argmax_rows(const MatrixD& q) {
  std::vector<std::size_t> labels(static_cast<std::size_t>(q.rows()));
  for (Eigen::Index i = 0; i < q.rows(); ++i) {
    Eigen::Index best = 0;
    q.row(i).maxCoeff(&best);
    labels[static_cast<std::size_t>(i)] = static_cast<std::size_t>(best);
  }
  return labels;
}

FinetuneResult finetune_sca(ae::AutoencoderModel model, const MatrixF& x, const FinetuneConfig& config,
                            const corpus::LabelVector* truth) {
  require(config.k >= 2, ErrorKind::invalid_argument, "SCA fine-tuning needs k >= 2");
  require(config.batch_size >= 1 && config.max_epochs >= 1, ErrorKind::invalid_argument,
          "batch size and max_epochs must be positive");
  require(config.tol >= 0.0, ErrorKind::invalid_argument, "tol must be non-negative");
  require(x.rows() >= static_cast<Eigen::Index>(config.k), ErrorKind::invalid_argument,
          "fewer samples than clusters");
  require(truth == nullptr || truth->size() == static_cast<std::size_t>(x.rows()), ErrorKind::shape_mismatch,
          "ground-truth labels do not match sample count");

  const auto n = static_cast<std::size_t>(x.rows());
  FinetuneResult result{std::move(model), {}, {}, {}, {}, false, 0};
  auto& encoder = result.model.encoder;

  metrics::KMeansConfig km;
  km.k = config.k;
  km.restarts = config.kmeans_restarts;
  km.seed = derive_seed(config.seed, "sca.kmeans");
  const auto init = metrics::kmeans(ae::encode(result.model, x).cast<double>(), km);
  MatrixF centers = init.centroids.cast<float>();
  std::vector<std::size_t> previous = init.labels;

  nn::Optimizer<float> optimizer(nn::OptimizerConfig::sgd(config.learning_rate, config.momentum));
  Rng shuffle_rng(config.seed, "sca.shuffle");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto batch = static_cast<std::size_t>(config.batch_size);

  MatrixD p_full;
  for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
    const MatrixD z_full = ae::encode(result.model, x).cast<double>();
    const MatrixD q_full = soft_assign<double>(z_full, centers.cast<double>());
    p_full = target_distribution(q_full);
    if ((q_full.colwise().sum().array() < 1.0).any()) ++result.empty_cluster_warnings;

    const auto labels = argmax_rows(q_full);
    std::size_t changed = 0;
    for (std::size_t i = 0; i < n; ++i) changed += labels[i] != previous[i] ? 1 : 0;
    EpochLog log;
    log.epoch = epoch;
    log.kl_loss = kl_loss(p_full, q_full).loss / static_cast<double>(n);
    if (!std::isfinite(log.kl_loss))
      fail(ErrorKind::diverged, "KL loss became non-finite at epoch " + std::to_string(epoch));
    log.label_change_fraction = static_cast<double>(changed) / static_cast<double>(n);
    if (truth != nullptr) {
      const corpus::LabelVector pred{std::span<const std::size_t>(labels)};
      log.acc = metrics::clustering_accuracy(*truth, pred);
      log.nmi = metrics::nmi(*truth, pred);
    }
    result.history.push_back(log);
    previous = labels;
    if (epoch > 0 && log.label_change_fraction < config.tol) {
      result.converged = true;
      break;
    }

    shuffle_rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t stop = std::min(n, start + batch);
      const auto rows = std::span<const std::size_t>(order).subspan(start, stop - start);
      const MatrixF xb = ae::gather_rows(x, rows);
      MatrixD pb(static_cast<Eigen::Index>(rows.size()), p_full.cols());
      for (std::size_t r = 0; r < rows.size(); ++r)
        pb.row(static_cast<Eigen::Index>(r)) = p_full.row(static_cast<Eigen::Index>(rows[r]));

      const auto pass = nn::forward(encoder, xb);
      const MatrixD zb = pass.output().cast<double>();
      const MatrixD ud = centers.cast<double>();
      const MatrixD qb = soft_assign(zb, ud);
      auto [loss, dq] = kl_loss(pb, qb);
      dq /= static_cast<double>(rows.size());
      const auto g = soft_assign_backward(zb, ud, qb, dq);

      const MatrixF dz = g.z.cast<float>();
      const MatrixF du = g.centers.cast<float>();
      const auto grads = nn::backward(encoder, pass, dz);
      std::vector<nn::ParameterSlot<float>> slots;
      nn::collect_parameters(encoder, grads, slots);
      slots.push_back({std::span<float>(centers.data(), static_cast<std::size_t>(centers.size())),
                       std::span<const float>(du.data(), static_cast<std::size_t>(du.size()))});
      if (!std::isfinite(loss) || !optimizer.step(slots))
        fail(ErrorKind::diverged, "non-finite KL gradient at epoch " + std::to_string(epoch));
    }
  }

  result.latent = ae::encode(result.model, x);
  result.labels = argmax_rows(soft_assign<double>(result.latent.cast<double>(), centers.cast<double>()));
  result.centers = std::move(centers);
  return result;
}

}  // namespace stc::sca
