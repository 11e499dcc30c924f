#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stc/common/matrix.hpp"
#include "stc/corpus/labels.hpp"

namespace stc::pipeline {

struct BlobSpec {
  std::size_t n = 800;            // split as evenly as possible across clusters
  std::size_t dim = 256;
  std::size_t clusters = 4;
  std::size_t signal_dim = 8;     // cluster structure lives in this many directions
  double center_scale = 1.0;      // centers ~ center_scale * N(0, I) in the signal space
  double signal_noise = 0.35;     // within-cluster spread along the signal directions
  double ambient_noise = 0.05;    // isotropic noise in all dim coordinates
  std::uint64_t seed = 0;
};

struct LabeledData {
  MatrixF x;
  corpus::LabelVector labels;
};

/// Gaussian clusters in a random signal_dim-dimensional subspace of R^dim,
/// plus isotropic ambient noise. Rows are interleaved by cluster.
LabeledData gaussian_blobs(const BlobSpec& spec);

/// Two-topic toy corpus over disjoint vocabularies; text i has label i % 2.
std::vector<std::string> toy_texts(std::size_t n, std::uint64_t seed);

}  // namespace stc::pipeline
