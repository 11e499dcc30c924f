#include "stc/nn/network.hpp"

#include <charconv>
#include <sstream>

namespace stc::nn {

std::string to_string(Activation a) { return a == Activation::relu ? "relu" : "linear"; }

Activation parse_activation(const std::string& name) {
  if (name == "relu") return Activation::relu;
  if (name == "linear") return Activation::linear;
  fail(ErrorKind::parse, "unknown activation '" + name + "'");
}

void NetworkSpec::validate() const {
  require(layer_sizes.size() >= 2, ErrorKind::invalid_argument,
          "a network needs at least an input and an output size");
  for (std::size_t s : layer_sizes)
    require(s > 0, ErrorKind::invalid_argument, "layer sizes must be positive");
  require(activations.size() == layer_count(), ErrorKind::invalid_argument,
          "need one activation per layer");
}

NetworkSpec NetworkSpec::with_default_activations(std::vector<std::size_t> sizes) {
  NetworkSpec spec;
  spec.layer_sizes = std::move(sizes);
  const std::size_t layers = spec.layer_count();
  for (std::size_t l = 0; l < layers; ++l)
    spec.activations.push_back(l + 1 == layers ? Activation::linear : Activation::relu);
  spec.validate();
  return spec;
}

NetworkSpec NetworkSpec::parse(const std::string& text, std::size_t input_dim) {
  std::vector<std::size_t> sizes;
  std::stringstream stream(text);
  std::string field;
  while (std::getline(stream, field, ':')) {
    if (field == "d") {
      sizes.push_back(input_dim);
      continue;
    }
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    require(ec == std::errc() && ptr == field.data() + field.size() && !field.empty(),
            ErrorKind::parse, "bad layer size '" + field + "' in '" + text + "'");
    sizes.push_back(v);
  }
  return with_default_activations(std::move(sizes));
}

std::string NetworkSpec::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < layer_sizes.size(); ++i) {
    if (i > 0) out += ':';
    out += i == 0 ? std::string("d") : std::to_string(layer_sizes[i]);
  }
  return out;
}

}  // namespace stc::nn
