#include "stc/pipeline/synthetic.hpp"

#include "stc/common/error.hpp"
#include "stc/common/rng.hpp"

namespace stc::pipeline {

LabeledData gaussian_blobs(const BlobSpec& spec) {
  require(spec.n >= spec.clusters && spec.clusters >= 1, ErrorKind::invalid_argument,
          "need at least one sample per cluster");
  require(spec.signal_dim >= 1 && spec.signal_dim <= spec.dim, ErrorKind::invalid_argument,
          "signal_dim must be in [1, dim]");
  Rng rng(spec.seed, "blobs");
  const auto n = static_cast<Eigen::Index>(spec.n);
  const auto d = static_cast<Eigen::Index>(spec.dim);
  const auto s = static_cast<Eigen::Index>(spec.signal_dim);
  const auto k = static_cast<Eigen::Index>(spec.clusters);

  // Random embedding of the signal space, orthonormalized by Gram-Schmidt.
  MatrixD basis(s, d);
  for (Eigen::Index r = 0; r < s; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) basis(r, c) = rng.normal();
    for (Eigen::Index q = 0; q < r; ++q) basis.row(r) -= basis.row(r).dot(basis.row(q)) * basis.row(q);
    basis.row(r).normalize();
  }
  MatrixD centers(k, s);
  for (Eigen::Index j = 0; j < k; ++j)
    for (Eigen::Index c = 0; c < s; ++c) centers(j, c) = spec.center_scale * rng.normal();

  MatrixF x(n, d);
  std::vector<std::size_t> labels(spec.n);
  RowVector<double> latent(s);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index j = i % k;
    labels[static_cast<std::size_t>(i)] = static_cast<std::size_t>(j);
    for (Eigen::Index c = 0; c < s; ++c) latent(c) = centers(j, c) + spec.signal_noise * rng.normal();
    RowVector<double> row = latent * basis;
    for (Eigen::Index c = 0; c < d; ++c) row(c) += spec.ambient_noise * rng.normal();
    x.row(i) = row.cast<float>();
  }
  return {std::move(x), corpus::LabelVector(std::span<const std::size_t>(labels))};
}

std::vector<std::string> toy_texts(std::size_t n, std::uint64_t seed) {
  static const char* const kTopics[2][8] = {
      {"goal", "match", "striker", "league", "coach", "penalty", "stadium", "keeper"},
      {"cpu", "compiler", "kernel", "memory", "thread", "cache", "linker", "debugger"}};
  Rng rng(seed, "toy_texts");
  std::vector<std::string> texts;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& words = kTopics[i % 2];
    std::string text;
    const std::size_t length = 3 + rng.index(4);
    for (std::size_t w = 0; w < length; ++w) {
      if (w > 0) text += ' ';
      text += words[rng.index(8)];
    }
    texts.push_back(std::move(text));
  }
  return texts;
}

}  // namespace stc::pipeline
