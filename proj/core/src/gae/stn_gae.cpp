#include "stc/gae/stn_gae.hpp"

#include <algorithm>
#include <set>

#include "stc/nn/optimizer.hpp"

namespace stc::gae {

std::vector<NodePair> sample_negatives(const TextGraph& graph, double neg_ratio, Rng& rng) {
  require(neg_ratio >= 0.0 && std::isfinite(neg_ratio), ErrorKind::invalid_argument,
          "neg_ratio must be a non-negative number");
  const std::size_t n = graph.nodes();
  const std::size_t all_pairs = n * (n - 1) / 2;
  const std::size_t available = all_pairs - graph.edge_count();
  const auto wanted = std::min<std::size_t>(
      available, static_cast<std::size_t>(std::llround(neg_ratio * static_cast<double>(graph.edge_count()))));
  std::vector<NodePair> out;
  if (wanted == 0) return out;
  out.reserve(wanted);

  if (available <= 4 * wanted) {
    // Dense graph: enumerate non-edges and take a random subset.
    std::vector<NodePair> pool;
    pool.reserve(available);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (!graph.has_edge(i, j)) pool.emplace_back(i, j);
    for (std::size_t s = 0; s < wanted; ++s) {
      const std::size_t pick = s + rng.index(pool.size() - s);
      std::swap(pool[s], pool[pick]);
      out.push_back(pool[s]);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  std::set<NodePair> chosen;
  while (chosen.size() < wanted) {
    std::size_t i = rng.index(n);
    std::size_t j = rng.index(n);
    if (i == j) continue;
    if (i > j) std::swap(i, j);
    if (graph.has_edge(i, j)) continue;
    chosen.emplace(i, j);
  }
  out.assign(chosen.begin(), chosen.end());
  return out;
}

GaeModel GaeModel::initialize(const nn::NetworkSpec& spec, std::uint64_t seed) {
  Rng rng(seed, "gae.init");
  return {nn::Network<float>::glorot(spec, rng, /*with_bias=*/false)};
}

nn::Checkpoint GaeModel::to_checkpoint() const {
  nn::Checkpoint checkpoint;
  checkpoint.networks.emplace_back("gcn_encoder", encoder);
  return checkpoint;
}

GaeModel GaeModel::from_checkpoint(const nn::Checkpoint& checkpoint) {
  return {checkpoint.network("gcn_encoder")};
}

MatrixF gae_encode(const GaeModel& model, const CsrMatrix& normalized, const MatrixF& x) {
  return gcn_forward(normalized, x, model.encoder).output();
}

GaeTrainResult train_stn_gae(const MatrixF& x, const TextGraph& graph, const nn::NetworkSpec& spec,
                             const GaeTrainConfig& config) {
  require(config.epochs >= 0, ErrorKind::invalid_argument, "epochs must be >= 0");
  require(x.allFinite(), ErrorKind::non_finite, "features contain non-finite values");
  require(static_cast<std::size_t>(x.rows()) == graph.nodes(), ErrorKind::shape_mismatch,
          "feature rows do not match graph nodes");
  require(graph.edge_count() > 0, ErrorKind::invalid_argument, "graph has no edges");

  GaeTrainResult result{GaeModel::initialize(spec, config.seed), {}, {}};
  auto& encoder = result.model.encoder;
  const CsrMatrix normalized = normalize_adjacency(graph);
  nn::Optimizer<float> optimizer(nn::OptimizerConfig::adam(config.learning_rate));
  Rng neg_rng(config.seed, "negsample");

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const auto pass = gcn_forward(normalized, x, encoder);
    const auto negatives = sample_negatives(graph, config.neg_ratio, neg_rng);
    const auto [loss, grad] = gae_loss<float>(pass.output(), graph.edges(), negatives);
    if (!std::isfinite(loss))
      fail(ErrorKind::diverged, "graph autoencoder loss became non-finite at epoch " + std::to_string(epoch));
    result.loss_history.push_back(static_cast<double>(loss));
    const auto grads = gcn_backward(normalized, encoder, pass, grad);
    std::vector<nn::ParameterSlot<float>> slots;
    nn::collect_parameters(encoder, grads, slots);
    if (!optimizer.step(slots))
      fail(ErrorKind::diverged, "non-finite gradient at epoch " + std::to_string(epoch));
  }
  result.latent = gae_encode(result.model, normalized, x);
  return result;
}

}  // namespace stc::gae
