#include "stc/nn/checkpoint.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "stc/common/error.hpp"

namespace stc::nn {
namespace {

constexpr char kMagic[4] = {'S', 'T', 'C', 'K'};
constexpr std::uint32_t kVersion = 1;

template <typename U>
void put(std::ostream& out, U value) {
  std::array<char, sizeof(U)> bytes{};
  for (std::size_t i = 0; i < sizeof(U); ++i) bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFFu);
  out.write(bytes.data(), bytes.size());
}

template <typename U>
U get(std::istream& in) {
  std::array<unsigned char, sizeof(U)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  require(in.gcount() == static_cast<std::streamsize>(bytes.size()), ErrorKind::truncated,
          "checkpoint ends unexpectedly");
  U value = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) value |= static_cast<U>(bytes[i]) << (8 * i);
  return value;
}

void put_name(std::ostream& out, const std::string& name) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(name.size()));
  out.write(name.data(), static_cast<std::streamsize>(name.size()));
}

std::string get_name(std::istream& in) {
  const auto len = get<std::uint32_t>(in);
  require(len < (1u << 16), ErrorKind::parse, "implausible name length in checkpoint");
  std::string name(len, '\0');
  in.read(name.data(), len);
  require(in.gcount() == static_cast<std::streamsize>(len), ErrorKind::truncated, "checkpoint ends inside a name");
  return name;
}

void put_floats(std::ostream& out, const float* data, Eigen::Index count) {
  for (Eigen::Index i = 0; i < count; ++i) put<std::uint32_t>(out, std::bit_cast<std::uint32_t>(data[i]));
}

void get_floats(std::istream& in, float* data, Eigen::Index count) {
  for (Eigen::Index i = 0; i < count; ++i) {
    data[i] = std::bit_cast<float>(get<std::uint32_t>(in));
    require(std::isfinite(data[i]), ErrorKind::non_finite, "non-finite parameter in checkpoint");
  }
}

Eigen::Index get_dim(std::istream& in) {
  const auto v = get<std::uint64_t>(in);
  require(v < (std::uint64_t{1} << 32), ErrorKind::parse, "implausible tensor dimension in checkpoint");
  return static_cast<Eigen::Index>(v);
}

}  // namespace

const Network<float>& Checkpoint::network(const std::string& name) const {
  for (const auto& [key, net] : networks)
    if (key == name) return net;
  fail(ErrorKind::invalid_argument, "checkpoint has no network '" + name + "'");
}

const MatrixF& Checkpoint::tensor(const std::string& name) const {
  for (const auto& [key, t] : tensors)
    if (key == name) return t;
  fail(ErrorKind::invalid_argument, "checkpoint has no tensor '" + name + "'");
}

void write_checkpoint(const Checkpoint& checkpoint, std::ostream& out) {
  out.write(kMagic, 4);
  put<std::uint32_t>(out, kVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(checkpoint.networks.size()));
  for (const auto& [name, net] : checkpoint.networks) {
    require(net.all_finite(), ErrorKind::non_finite, "network '" + name + "' has non-finite parameters");
    put_name(out, name);
    put<std::uint64_t>(out, net.size());
    for (const auto& layer : net.layers()) {
      put<std::uint64_t>(out, static_cast<std::uint64_t>(layer.in()));
      put<std::uint64_t>(out, static_cast<std::uint64_t>(layer.out()));
      put<std::uint8_t>(out, static_cast<std::uint8_t>(layer.activation));
      put<std::uint8_t>(out, layer.has_bias() ? 1 : 0);
      put_floats(out, layer.weights.data(), layer.weights.size());
      if (layer.has_bias()) put_floats(out, layer.bias.data(), layer.bias.size());
    }
  }
  put<std::uint32_t>(out, static_cast<std::uint32_t>(checkpoint.tensors.size()));
  for (const auto& [name, t] : checkpoint.tensors) {
    require(t.allFinite(), ErrorKind::non_finite, "tensor '" + name + "' has non-finite values");
    put_name(out, name);
    put<std::uint64_t>(out, static_cast<std::uint64_t>(t.rows()));
    put<std::uint64_t>(out, static_cast<std::uint64_t>(t.cols()));
    put_floats(out, t.data(), t.size());
  }
  require(static_cast<bool>(out), ErrorKind::io, "checkpoint write failed");
}

void write_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorKind::io, "cannot open " + path.string() + " for writing");
  write_checkpoint(checkpoint, out);
}

Checkpoint read_checkpoint(std::istream& in) {
  char magic[4] = {};
  in.read(magic, 4);
  require(in.gcount() == 4, ErrorKind::truncated, "file shorter than the checkpoint magic");
  require(std::memcmp(magic, kMagic, 4) == 0, ErrorKind::bad_magic, "not a checkpoint file");
  const auto version = get<std::uint32_t>(in);
  require(version == kVersion, ErrorKind::parse, "unsupported checkpoint version " + std::to_string(version));

  Checkpoint checkpoint;
  const auto network_count = get<std::uint32_t>(in);
  for (std::uint32_t k = 0; k < network_count; ++k) {
    std::string name = get_name(in);
    const auto layer_count = get<std::uint64_t>(in);
    require(layer_count < 4096, ErrorKind::parse, "implausible layer count in checkpoint");
    std::vector<DenseLayer<float>> layers;
    for (std::uint64_t l = 0; l < layer_count; ++l) {
      const auto rows = get_dim(in);
      const auto cols = get_dim(in);
      const auto act = get<std::uint8_t>(in);
      require(act <= 1, ErrorKind::parse, "unknown activation code in checkpoint");
      const auto has_bias = get<std::uint8_t>(in);
      DenseLayer<float> layer;
      layer.activation = static_cast<Activation>(act);
      layer.weights.resize(rows, cols);
      get_floats(in, layer.weights.data(), layer.weights.size());
      if (has_bias) {
        layer.bias.resize(cols);
        get_floats(in, layer.bias.data(), cols);
      }
      layers.push_back(std::move(layer));
    }
    checkpoint.networks.emplace_back(std::move(name), Network<float>(std::move(layers)));
  }
  const auto tensor_count = get<std::uint32_t>(in);
  for (std::uint32_t k = 0; k < tensor_count; ++k) {
    std::string name = get_name(in);
    const auto rows = get_dim(in);
    const auto cols = get_dim(in);
    MatrixF t(rows, cols);
    get_floats(in, t.data(), t.size());
    checkpoint.tensors.emplace_back(std::move(name), std::move(t));
  }
  return checkpoint;
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::io, "cannot open " + path.string());
  return read_checkpoint(in);
}

}  // namespace stc::nn
