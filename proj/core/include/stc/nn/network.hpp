#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "stc/common/error.hpp"
#include "stc/common/matrix.hpp"
#include "stc/common/rng.hpp"

namespace stc::nn {

enum class Activation : std::uint8_t { linear = 0, relu = 1 };

std::string to_string(Activation a);
Activation parse_activation(const std::string& name);

/// Fully connected layer computing act(x W + b) for row-vector samples.
template <typename T>
struct DenseLayer {
  Matrix<T> weights;  // in x out
  RowVector<T> bias;  // out; empty when the layer has no bias
  Activation activation = Activation::linear;

  Eigen::Index in() const { return weights.rows(); }
  Eigen::Index out() const { return weights.cols(); }
  bool has_bias() const { return bias.size() != 0; }
};

/// Layer-size list plus per-layer activations. Sizes d:500:500:2000:10
/// describe four layers; by default hidden layers use ReLU and the last
/// layer is linear.
struct NetworkSpec {
  std::vector<std::size_t> layer_sizes;
  std::vector<Activation> activations;
  bool tied_decoder = false;

  std::size_t layer_count() const { return layer_sizes.empty() ? 0 : layer_sizes.size() - 1; }
  void validate() const;

  /// Parses "d:500:500:2000:10" (the literal "d" becomes input_dim) or
  /// "784:500:10". Activations are filled with the default pattern.
  static NetworkSpec parse(const std::string& text, std::size_t input_dim);
  static NetworkSpec with_default_activations(std::vector<std::size_t> sizes);
  /// Same text form, with the input size rendered as "d".
  std::string to_string() const;

  friend bool operator==(const NetworkSpec&, const NetworkSpec&) = default;
};

template <typename T>
class Network {
 public:
  Network() = default;
  explicit Network(std::vector<DenseLayer<T>> layers) : layers_(std::move(layers)) { validate(); }

  /// Glorot-uniform weights, zero biases.
  static Network glorot(const NetworkSpec& spec, Rng& rng, bool with_bias = true) {
    spec.validate();
    std::vector<DenseLayer<T>> layers;
    for (std::size_t l = 0; l < spec.layer_count(); ++l) {
      const auto in = static_cast<Eigen::Index>(spec.layer_sizes[l]);
      const auto out = static_cast<Eigen::Index>(spec.layer_sizes[l + 1]);
      const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
      DenseLayer<T> layer;
      layer.weights.resize(in, out);
      for (Eigen::Index k = 0; k < layer.weights.size(); ++k)
        layer.weights.data()[k] = static_cast<T>(rng.uniform(-limit, limit));
      if (with_bias) layer.bias = RowVector<T>::Zero(out);
      layer.activation = spec.activations[l];
      layers.push_back(std::move(layer));
    }
    return Network(std::move(layers));
  }

  const std::vector<DenseLayer<T>>& layers() const noexcept { return layers_; }
  const DenseLayer<T>& layer(std::size_t i) const { return layers_.at(i); }
  /// Mutable access invalidates every outstanding forward pass.
  DenseLayer<T>& mutable_layer(std::size_t i) {
    ++version_;
    return layers_.at(i);
  }
  void touch() noexcept { ++version_; }
  std::uint64_t version() const noexcept { return version_; }

  std::size_t size() const noexcept { return layers_.size(); }
  bool empty() const noexcept { return layers_.empty(); }
  Eigen::Index input_size() const { return layers_.front().in(); }
  Eigen::Index output_size() const { return layers_.back().out(); }

  NetworkSpec spec() const {
    NetworkSpec s;
    if (layers_.empty()) return s;
    s.layer_sizes.push_back(static_cast<std::size_t>(input_size()));
    for (const auto& l : layers_) {
      s.layer_sizes.push_back(static_cast<std::size_t>(l.out()));
      s.activations.push_back(l.activation);
    }
    return s;
  }

  template <typename U>
  Network<U> cast() const {
    std::vector<DenseLayer<U>> out;
    for (const auto& l : layers_)
      out.push_back({l.weights.template cast<U>(), l.bias.template cast<U>(), l.activation});
    return Network<U>(std::move(out));
  }

  bool all_finite() const {
    for (const auto& l : layers_)
      if (!l.weights.allFinite() || !l.bias.allFinite()) return false;
    return true;
  }

 private:
  void validate() const {
    for (std::size_t l = 0; l < layers_.size(); ++l) {
      const auto& layer = layers_[l];
      require(layer.in() > 0 && layer.out() > 0, ErrorKind::shape_mismatch, "empty layer");
      require(!layer.has_bias() || layer.bias.size() == layer.out(), ErrorKind::shape_mismatch,
              "bias size does not match layer output");
      if (l > 0)
        require(layers_[l - 1].out() == layer.in(), ErrorKind::shape_mismatch,
                "layer " + std::to_string(l) + " input does not match previous output");
    }
  }

  std::vector<DenseLayer<T>> layers_;
  std::uint64_t version_ = 0;
};

/// activations[0] is the input, activations[l + 1] the output of layer l.
template <typename T>
struct ForwardPass {
  std::vector<Matrix<T>> activations;
  const void* network = nullptr;
  std::uint64_t version = 0;

  const Matrix<T>& output() const { return activations.back(); }
};

template <typename T>
struct LayerGradient {
  Matrix<T> weights;
  RowVector<T> bias;
};

template <typename T>
struct Gradients {
  std::vector<LayerGradient<T>> layers;
  Matrix<T> input;
};

template <typename T>
void apply_activation(Activation a, Matrix<T>& m) {
  if (a == Activation::relu) m = m.cwiseMax(T(0));
}

/// Multiplies grad in place by the activation derivative, evaluated from
/// the post-activation output (for ReLU, output > 0 iff pre-activation > 0).
template <typename T>
void activation_backward(Activation a, const Matrix<T>& output, Matrix<T>& grad) {
  if (a == Activation::relu) grad = (output.array() > T(0)).select(grad, T(0));
}

template <typename T>
ForwardPass<T> forward(const Network<T>& net, const Matrix<T>& x) {
  require(!net.empty(), ErrorKind::invalid_argument, "forward through an empty network");
  require(x.cols() == net.input_size(), ErrorKind::shape_mismatch,
          "input has " + std::to_string(x.cols()) + " columns, network expects " +
              std::to_string(net.input_size()));
  ForwardPass<T> pass;
  pass.network = &net;
  pass.version = net.version();
  pass.activations.reserve(net.size() + 1);
  pass.activations.push_back(x);
  for (const auto& layer : net.layers()) {
    Matrix<T> h = pass.activations.back() * layer.weights;
    if (layer.has_bias()) h.rowwise() += layer.bias;
    apply_activation(layer.activation, h);
    pass.activations.push_back(std::move(h));
  }
  return pass;
}

template <typename T>
Gradients<T> backward(const Network<T>& net, const ForwardPass<T>& pass, const Matrix<T>& out_grad) {
  require(pass.network == &net && pass.version == net.version() &&
              pass.activations.size() == net.size() + 1,
          ErrorKind::stale_cache, "forward pass does not belong to the current network parameters");
  require(out_grad.rows() == pass.output().rows() && out_grad.cols() == pass.output().cols(),
          ErrorKind::shape_mismatch, "output gradient shape does not match network output");
  Gradients<T> grads;
  grads.layers.resize(net.size());
  Matrix<T> delta = out_grad;
  for (std::size_t l = net.size(); l-- > 0;) {
    const auto& layer = net.layer(l);
    activation_backward(layer.activation, pass.activations[l + 1], delta);
    grads.layers[l].weights = pass.activations[l].transpose() * delta;
    if (layer.has_bias()) grads.layers[l].bias = delta.colwise().sum();
    delta = delta * layer.weights.transpose();
  }
  grads.input = std::move(delta);
  return grads;
}

}  // namespace stc::nn
