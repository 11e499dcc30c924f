#include "stc/ae/autoencoder.hpp"

#include <cmath>
#include <numeric>

#include "stc/common/error.hpp"
#include "stc/common/rng.hpp"
#include "stc/nn/loss.hpp"
#include "stc/nn/optimizer.hpp"

namespace stc::ae {
namespace {

nn::NetworkSpec mirrored(const nn::NetworkSpec& spec) {
  std::vector<std::size_t> sizes(spec.layer_sizes.rbegin(), spec.layer_sizes.rend());
  return nn::NetworkSpec::with_default_activations(std::move(sizes));
}

}  // namespace

AutoencoderModel AutoencoderModel::initialize(const nn::NetworkSpec& spec, std::uint64_t seed) {
  spec.validate();
  require(spec.layer_sizes.back() < spec.layer_sizes.front(), ErrorKind::invalid_argument,
          "latent dimension must be smaller than the input dimension");
  Rng rng(seed, "ae.init");
  AutoencoderModel model;
  model.encoder = nn::Network<float>::glorot(spec, rng);
  model.decoder = nn::Network<float>::glorot(mirrored(spec), rng);
  model.tied = spec.tied_decoder;
  if (model.tied) model.sync_tied_weights();
  return model;
}

void AutoencoderModel::sync_tied_weights() {
  if (!tied) return;
  const std::size_t depth = encoder.size();
  for (std::size_t l = 0; l < depth; ++l)
    decoder.mutable_layer(l).weights = encoder.layer(depth - 1 - l).weights.transpose();
}

nn::Checkpoint AutoencoderModel::to_checkpoint() const {
  nn::Checkpoint checkpoint;
  checkpoint.networks.emplace_back("encoder", encoder);
  checkpoint.networks.emplace_back("decoder", decoder);
  MatrixF flags(1, 1);
  flags(0, 0) = tied ? 1.0f : 0.0f;
  checkpoint.tensors.emplace_back("tied", flags);
  return checkpoint;
}

AutoencoderModel AutoencoderModel::from_checkpoint(const nn::Checkpoint& checkpoint) {
  AutoencoderModel model;
  model.encoder = checkpoint.network("encoder");
  model.decoder = checkpoint.network("decoder");
  model.tied = checkpoint.tensor("tied")(0, 0) != 0.0f;
  require(model.encoder.input_size() == model.decoder.output_size() &&
              model.encoder.output_size() == model.decoder.input_size(),
          ErrorKind::shape_mismatch, "encoder and decoder shapes do not mirror");
  return model;
}

MatrixF gather_rows(const MatrixF& x, std::span<const std::size_t> rows) {
  MatrixF out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = x.row(static_cast<Eigen::Index>(rows[r]));
  return out;
}

TrainResult train_autoencoder(const MatrixF& x, const nn::NetworkSpec& spec, const TrainConfig& config) {
  require(config.epochs >= 1, ErrorKind::invalid_argument, "epochs must be >= 1");
  require(config.batch_size >= 1, ErrorKind::invalid_argument, "batch size must be >= 1");
  require(x.rows() >= 1, ErrorKind::empty_input, "no training samples");
  require(x.allFinite(), ErrorKind::non_finite, "training data contains non-finite values");
  require(static_cast<std::size_t>(x.cols()) == spec.layer_sizes.front(), ErrorKind::shape_mismatch,
          "data dimension does not match the network input size");

  TrainResult result{AutoencoderModel::initialize(spec, config.seed), {}};
  auto& model = result.model;
  nn::Optimizer<float> optimizer(nn::OptimizerConfig::adam(config.learning_rate));
  Rng shuffle_rng(config.seed, "ae.shuffle");

  const auto n = static_cast<std::size_t>(x.rows());
  const auto batch = static_cast<std::size_t>(config.batch_size);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t depth = model.encoder.size();

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle_rng.shuffle(std::span<std::size_t>(order));
    double weighted_loss = 0.0;
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t stop = std::min(n, start + batch);
      const MatrixF xb = gather_rows(x, std::span<const std::size_t>(order).subspan(start, stop - start));

      const auto enc = nn::forward(model.encoder, xb);
      const auto dec = nn::forward(model.decoder, enc.output());
      const auto [loss, grad] = nn::mse_loss<float>(xb, dec.output());
      if (!std::isfinite(loss))
        fail(ErrorKind::diverged, "autoencoder loss became non-finite at epoch " + std::to_string(epoch));
      weighted_loss += static_cast<double>(loss) * static_cast<double>(stop - start);

      auto dec_grads = nn::backward(model.decoder, dec, grad);
      auto enc_grads = nn::backward(model.encoder, enc, dec_grads.input);

      std::vector<nn::ParameterSlot<float>> slots;
      if (model.tied) {
        for (std::size_t l = 0; l < depth; ++l)
          enc_grads.layers[l].weights += dec_grads.layers[depth - 1 - l].weights.transpose();
        nn::collect_parameters(model.encoder, enc_grads, slots);
        for (std::size_t l = 0; l < depth; ++l) {
          auto& bias = model.decoder.mutable_layer(l).bias;
          const auto& g = dec_grads.layers[l].bias;
          slots.push_back({std::span<float>(bias.data(), static_cast<std::size_t>(bias.size())),
                           std::span<const float>(g.data(), static_cast<std::size_t>(g.size()))});
        }
      } else {
        nn::collect_parameters(model.encoder, enc_grads, slots);
        nn::collect_parameters(model.decoder, dec_grads, slots);
      }
      if (!optimizer.step(slots))
        fail(ErrorKind::diverged, "non-finite gradient at epoch " + std::to_string(epoch));
      model.sync_tied_weights();
    }
    result.loss_history.push_back(weighted_loss / static_cast<double>(n));
  }
  return result;
}

MatrixF encode(const AutoencoderModel& model, const MatrixF& x) {
  require(x.rows() >= 1, ErrorKind::empty_input, "encode called with no rows");
  return nn::forward(model.encoder, x).output();
}

MatrixF reconstruct(const AutoencoderModel& model, const MatrixF& x) {
  return nn::forward(model.decoder, encode(model, x)).output();
}

double reconstruction_loss(const AutoencoderModel& model, const MatrixF& x) {
  return static_cast<double>(nn::mse_loss<float>(x, reconstruct(model, x)).loss);
}

MatrixF standardize_columns(const MatrixF& x) {
  MatrixF out = x;
  const double n = static_cast<double>(x.rows());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double mean = x.col(j).cast<double>().sum() / n;
    const double var = (x.col(j).cast<double>().array() - mean).square().sum() / n;
    const double scale = var > 0.0 ? 1.0 / std::sqrt(var) : 1.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      out(i, j) = static_cast<float>((static_cast<double>(x(i, j)) - mean) * scale);
  }
  return out;
}

}  // namespace stc::ae
