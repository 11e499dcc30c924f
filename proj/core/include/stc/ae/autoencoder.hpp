#pragma once

#include <cstdint>
#include <vector>

#include "stc/common/matrix.hpp"
#include "stc/nn/checkpoint.hpp"
#include "stc/nn/network.hpp"

namespace stc::ae {

/// Stacked autoencoder: the encoder realizes spec.layer_sizes (d:...:z) and
/// the decoder the reversed sizes (z:...:d). Hidden layers are ReLU; the
/// bottleneck and the reconstruction are linear.
///
/// With a tied decoder, decoder weights are the transposed encoder weights
/// and only the decoder biases are separate parameters.
struct AutoencoderModel {
  nn::Network<float> encoder;
  nn::Network<float> decoder;
  bool tied = false;

  static AutoencoderModel initialize(const nn::NetworkSpec& spec, std::uint64_t seed);

  Eigen::Index input_dim() const { return encoder.input_size(); }
  Eigen::Index latent_dim() const { return encoder.output_size(); }

  /// Copies transposed encoder weights into the decoder (tied mode only).
  void sync_tied_weights();

  nn::Checkpoint to_checkpoint() const;
  static AutoencoderModel from_checkpoint(const nn::Checkpoint& checkpoint);
};

struct TrainConfig {
  int epochs = 15;
  int batch_size = 64;
  double learning_rate = 0.001;
  std::uint64_t seed = 0;
};

struct TrainResult {
  AutoencoderModel model;
  std::vector<double> loss_history;  // per-epoch mean reconstruction loss
};

/// Minibatch Adam on the mean squared reconstruction error. Batches are
/// reshuffled every epoch from the seed; the final short batch is kept.
TrainResult train_autoencoder(const MatrixF& x, const nn::NetworkSpec& spec, const TrainConfig& config);

MatrixF encode(const AutoencoderModel& model, const MatrixF& x);
MatrixF reconstruct(const AutoencoderModel& model, const MatrixF& x);
double reconstruction_loss(const AutoencoderModel& model, const MatrixF& x);

/// Per-column zero mean and unit variance; constant columns are only centered.
MatrixF standardize_columns(const MatrixF& x);

/// Rows of x selected by index, in order.
MatrixF gather_rows(const MatrixF& x, std::span<const std::size_t> rows);

}  // namespace stc::ae
