#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "stc/common/error.hpp"
#include "stc/nn/network.hpp"

namespace stc::nn {

enum class OptimizerKind { sgd_momentum, adam };

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::adam;
  double learning_rate = 0.001;
  double momentum = 0.9;  // sgd_momentum only
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  static OptimizerConfig sgd(double lr, double momentum) {
    return {OptimizerKind::sgd_momentum, lr, momentum};
  }
  static OptimizerConfig adam(double lr) { return {OptimizerKind::adam, lr}; }

  void validate() const {
    require(learning_rate > 0.0 && std::isfinite(learning_rate), ErrorKind::invalid_argument,
            "learning rate must be positive");
    require(momentum >= 0.0 && momentum < 1.0, ErrorKind::invalid_argument, "momentum must be in [0, 1)");
    require(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0, ErrorKind::invalid_argument,
            "adam betas must be in [0, 1)");
    require(epsilon > 0.0, ErrorKind::invalid_argument, "adam epsilon must be positive");
  }
};

/// One trainable tensor and its gradient, flattened.
template <typename T>
struct ParameterSlot {
  std::span<T> values;
  std::span<const T> grads;
};

/// Slot buffers are allocated on the first step and bound to the order and
/// sizes of the slots passed then; later steps must pass the same layout.
template <typename T>
class Optimizer {
 public:
  explicit Optimizer(OptimizerConfig config) : config_(config) { config_.validate(); }

  const OptimizerConfig& config() const noexcept { return config_; }
  std::size_t steps() const noexcept { return steps_; }

  /// Returns false, leaving every parameter and buffer untouched, when any
  /// gradient is non-finite.
  [[nodiscard]] bool step(std::span<const ParameterSlot<T>> slots) {
    for (const auto& slot : slots) {
      require(slot.values.size() == slot.grads.size(), ErrorKind::shape_mismatch,
              "parameter and gradient sizes differ");
      for (T g : slot.grads)
        if (!std::isfinite(g)) return false;
    }
    if (first_.empty()) {
      for (const auto& slot : slots) {
        first_.emplace_back(slot.values.size(), T(0));
        if (config_.kind == OptimizerKind::adam) second_.emplace_back(slot.values.size(), T(0));
      }
    }
    require(first_.size() == slots.size(), ErrorKind::shape_mismatch,
            "optimizer called with a different parameter layout");
    for (std::size_t s = 0; s < slots.size(); ++s)
      require(first_[s].size() == slots[s].values.size(), ErrorKind::shape_mismatch,
              "optimizer slot " + std::to_string(s) + " changed size");

    ++steps_;
    if (config_.kind == OptimizerKind::sgd_momentum) {
      const T mu = static_cast<T>(config_.momentum);
      const T lr = static_cast<T>(config_.learning_rate);
      for (std::size_t s = 0; s < slots.size(); ++s) {
        auto& v = first_[s];
        for (std::size_t i = 0; i < v.size(); ++i) {
          v[i] = mu * v[i] - lr * slots[s].grads[i];
          slots[s].values[i] += v[i];
        }
      }
      return true;
    }

    const double t = static_cast<double>(steps_);
    const T b1 = static_cast<T>(config_.beta1);
    const T b2 = static_cast<T>(config_.beta2);
    const T step_size = static_cast<T>(config_.learning_rate / (1.0 - std::pow(config_.beta1, t)));
    const T second_correction = static_cast<T>(1.0 / (1.0 - std::pow(config_.beta2, t)));
    const T eps = static_cast<T>(config_.epsilon);
    for (std::size_t s = 0; s < slots.size(); ++s) {
      auto& m = first_[s];
      auto& v = second_[s];
      for (std::size_t i = 0; i < m.size(); ++i) {
        const T g = slots[s].grads[i];
        m[i] = b1 * m[i] + (T(1) - b1) * g;
        v[i] = b2 * v[i] + (T(1) - b2) * g * g;
        slots[s].values[i] -= step_size * m[i] / (std::sqrt(v[i] * second_correction) + eps);
      }
    }
    return true;
  }

 private:
  OptimizerConfig config_;
  std::size_t steps_ = 0;
  std::vector<std::vector<T>> first_;
  std::vector<std::vector<T>> second_;
};

/// Appends one slot per weight matrix and bias of net, paired with grads.
template <typename T>
void collect_parameters(Network<T>& net, const Gradients<T>& grads, std::vector<ParameterSlot<T>>& out) {
  require(grads.layers.size() == net.size(), ErrorKind::shape_mismatch,
          "gradient list does not match network depth");
  for (std::size_t l = 0; l < net.size(); ++l) {
    auto& layer = net.mutable_layer(l);
    const auto& g = grads.layers[l];
    require(g.weights.rows() == layer.weights.rows() && g.weights.cols() == layer.weights.cols(),
            ErrorKind::shape_mismatch, "weight gradient shape mismatch");
    out.push_back({std::span<T>(layer.weights.data(), static_cast<std::size_t>(layer.weights.size())),
                   std::span<const T>(g.weights.data(), static_cast<std::size_t>(g.weights.size()))});
    if (layer.has_bias()) {
      require(g.bias.size() == layer.bias.size(), ErrorKind::shape_mismatch, "bias gradient shape mismatch");
      out.push_back({std::span<T>(layer.bias.data(), static_cast<std::size_t>(layer.bias.size())),
                     std::span<const T>(g.bias.data(), static_cast<std::size_t>(g.bias.size()))});
    }
  }
}

}  // namespace stc::nn
