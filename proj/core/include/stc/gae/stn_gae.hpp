#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "stc/common/error.hpp"
#include "stc/common/matrix.hpp"
#include "stc/common/rng.hpp"
#include "stc/graph/text_graph.hpp"
#include "stc/nn/checkpoint.hpp"
#include "stc/nn/loss.hpp"
#include "stc/nn/network.hpp"

namespace stc::gae {

using graph::CsrMatrix;
using graph::TextGraph;
using NodePair = TextGraph::Edge;

/// a * h, accumulated row by row in a fixed order.
template <typename T>
Matrix<T> propagate(const CsrMatrix& a, const Matrix<T>& h) {
  require(static_cast<Eigen::Index>(a.cols) == h.rows(), ErrorKind::shape_mismatch,
          "adjacency has " + std::to_string(a.cols) + " columns but features have " +
              std::to_string(h.rows()) + " rows");
  Matrix<T> out = Matrix<T>::Zero(static_cast<Eigen::Index>(a.rows), h.cols());
  for (std::size_t i = 0; i < a.rows; ++i) {
    auto row = out.row(static_cast<Eigen::Index>(i));
    for (std::size_t p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p)
      row += static_cast<T>(a.values[p]) * h.row(static_cast<Eigen::Index>(a.col_idx[p]));
  }
  return out;
}

/// transpose(a) * h.
template <typename T>
Matrix<T> propagate_transposed(const CsrMatrix& a, const Matrix<T>& h) {
  require(static_cast<Eigen::Index>(a.rows) == h.rows(), ErrorKind::shape_mismatch,
          "adjacency rows do not match gradient rows");
  Matrix<T> out = Matrix<T>::Zero(static_cast<Eigen::Index>(a.cols), h.cols());
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p)
      out.row(static_cast<Eigen::Index>(a.col_idx[p])) += static_cast<T>(a.values[p]) * h.row(static_cast<Eigen::Index>(i));
  return out;
}

/// Cached intermediates of act(A H W) per layer: inputs[l] = H^l,
/// propagated[l] = A H^l, inputs.back() = output.
template <typename T>
struct GcnPass {
  std::vector<Matrix<T>> inputs;
  std::vector<Matrix<T>> propagated;
  const void* network = nullptr;
  std::uint64_t version = 0;

  const Matrix<T>& output() const { return inputs.back(); }
};

/// H^{l+1} = act(A H^l W^l), H^0 = x. Layer biases, if any, are ignored by
/// convention: GCN layers are created without them.
template <typename T>
GcnPass<T> gcn_forward(const CsrMatrix& a, const Matrix<T>& x, const nn::Network<T>& layers) {
  require(!layers.empty(), ErrorKind::invalid_argument, "GCN needs at least one layer");
  require(static_cast<Eigen::Index>(a.rows) == x.rows(), ErrorKind::shape_mismatch,
          "feature rows do not match graph nodes");
  require(x.cols() == layers.input_size(), ErrorKind::shape_mismatch,
          "feature dimension does not match the first GCN layer");
  GcnPass<T> pass;
  pass.network = &layers;
  pass.version = layers.version();
  pass.inputs.push_back(x);
  for (const auto& layer : layers.layers()) {
    require(!layer.has_bias(), ErrorKind::invalid_argument, "GCN layers carry no bias");
    pass.propagated.push_back(propagate(a, pass.inputs.back()));
    Matrix<T> h = pass.propagated.back() * layer.weights;
    nn::apply_activation(layer.activation, h);
    pass.inputs.push_back(std::move(h));
  }
  return pass;
}

template <typename T>
nn::Gradients<T> gcn_backward(const CsrMatrix& a, const nn::Network<T>& layers, const GcnPass<T>& pass,
                              const Matrix<T>& out_grad) {
  require(pass.network == &layers && pass.version == layers.version() &&
              pass.inputs.size() == layers.size() + 1,
          ErrorKind::stale_cache, "GCN pass does not belong to the current parameters");
  require(out_grad.rows() == pass.output().rows() && out_grad.cols() == pass.output().cols(),
          ErrorKind::shape_mismatch, "output gradient shape does not match GCN output");
  nn::Gradients<T> grads;
  grads.layers.resize(layers.size());
  Matrix<T> delta = out_grad;
  for (std::size_t l = layers.size(); l-- > 0;) {
    const auto& layer = layers.layer(l);
    nn::activation_backward(layer.activation, pass.inputs[l + 1], delta);
    grads.layers[l].weights = pass.propagated[l].transpose() * delta;
    delta = propagate_transposed(a, Matrix<T>(delta * layer.weights.transpose()));
  }
  grads.input = std::move(delta);
  return grads;
}

/// Up to round(neg_ratio * edges) distinct unordered non-adjacent pairs
/// (fewer if the graph has fewer non-edges), each as (i, j) with i < j.
std::vector<NodePair> sample_negatives(const TextGraph& graph, double neg_ratio, Rng& rng);

namespace detail {
template <typename T>
T softplus(T x) {
  return x > T(0) ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}
template <typename T>
T sigmoid(T x) {
  if (x >= T(0)) return T(1) / (T(1) + std::exp(-x));
  const T e = std::exp(x);
  return e / (T(1) + e);
}
}  // namespace detail

/// Mean binary cross-entropy of sigmoid(z_i . z_j): target 1 on positives,
/// 0 on negatives. grad is with respect to z.
template <typename T>
nn::LossAndGradient<T> gae_loss(const Matrix<T>& z, std::span<const NodePair> positives,
                                std::span<const NodePair> negatives) {
  require(!positives.empty(), ErrorKind::invalid_argument, "graph has no edges");
  require(z.allFinite(), ErrorKind::non_finite, "latent contains non-finite values");
  const T count = static_cast<T>(positives.size() + negatives.size());
  nn::LossAndGradient<T> out{T(0), Matrix<T>::Zero(z.rows(), z.cols())};
  auto accumulate = [&](std::span<const NodePair> pairs, bool positive) {
    for (auto [i, j] : pairs) {
      const auto ri = static_cast<Eigen::Index>(i);
      const auto rj = static_cast<Eigen::Index>(j);
      require(ri < z.rows() && rj < z.rows(), ErrorKind::invalid_argument, "pair index out of range");
      const T logit = z.row(ri).dot(z.row(rj));
      // -log sigmoid(s) = softplus(-s); -log(1 - sigmoid(s)) = softplus(s)
      out.loss += positive ? detail::softplus(-logit) : detail::softplus(logit);
      const T dlogit = (detail::sigmoid(logit) - (positive ? T(1) : T(0))) / count;
      out.grad.row(ri) += dlogit * z.row(rj);
      out.grad.row(rj) += dlogit * z.row(ri);
    }
  };
  accumulate(positives, true);
  accumulate(negatives, false);
  out.loss /= count;
  return out;
}

/// Samples negatives from the seed, then evaluates the loss.
template <typename T>
nn::LossAndGradient<T> gae_loss(const Matrix<T>& z, const TextGraph& graph, double neg_ratio,
                                std::uint64_t seed) {
  require(graph.edge_count() > 0, ErrorKind::invalid_argument, "graph has no edges");
  Rng rng(seed, "negsample");
  const auto negatives = sample_negatives(graph, neg_ratio, rng);
  return gae_loss<T>(z, graph.edges(), negatives);
}

struct GaeModel {
  nn::Network<float> encoder;  // GCN layers, no biases

  static GaeModel initialize(const nn::NetworkSpec& spec, std::uint64_t seed);
  nn::Checkpoint to_checkpoint() const;
  static GaeModel from_checkpoint(const nn::Checkpoint& checkpoint);
};

struct GaeTrainConfig {
  int epochs = 300;
  double learning_rate = 0.002;
  double neg_ratio = 1.0;
  std::uint64_t seed = 0;
};

struct GaeTrainResult {
  GaeModel model;
  MatrixF latent;
  std::vector<double> loss_history;
};

/// Full-batch Adam on the reconstruction loss; fresh negatives each epoch.
GaeTrainResult train_stn_gae(const MatrixF& x, const TextGraph& graph, const nn::NetworkSpec& spec,
                             const GaeTrainConfig& config);

MatrixF gae_encode(const GaeModel& model, const CsrMatrix& normalized, const MatrixF& x);

}  // namespace stc::gae
