#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "stc/corpus/corpus.hpp"
#include "stc/corpus/embedding_matrix.hpp"

namespace stc::corpus {

class WordVectorTable {
 public:
  WordVectorTable(std::vector<std::string> words, std::size_t dim, std::vector<float> values);

  std::size_t size() const noexcept { return words_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  std::optional<std::span<const float>> find(const std::string& word) const;

 private:
  std::vector<std::string> words_;
  std::size_t dim_;
  std::vector<float> values_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Text format: header "m d", then m lines "word v1 ... vd".
WordVectorTable read_word_vectors(const std::filesystem::path& path);

/// Deterministic stand-in for an out-of-vocabulary token, uniform in
/// [-0.25, 0.25]^dim and keyed by (seed, token).
std::vector<float> oov_vector(std::uint64_t seed, const std::string& token, std::size_t dim);

struct WordAverageResult {
  EmbeddingMatrix features;
  std::size_t empty_texts = 0;  // rows emitted as zero vectors
  std::size_t oov_tokens = 0;
};

WordAverageResult average_word_vectors(const Corpus& corpus, const WordVectorTable& table,
                                       std::uint64_t oov_seed);

}  // namespace stc::corpus
