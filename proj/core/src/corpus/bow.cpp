#include "stc/corpus/bow.hpp"

#include <cmath>
#include <unordered_map>

#include "stc/common/error.hpp"

namespace stc::corpus {

BowFeatures bow_features(const Corpus& corpus, BowWeighting weighting) {
  const std::size_t n = corpus.size();
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::string> vocabulary;
  // Sparse counts per text: (column, count).
  std::vector<std::vector<std::pair<std::size_t, double>>> counts(n);

  for (std::size_t i = 0; i < n; ++i) {
    std::unordered_map<std::size_t, std::size_t> local;
    std::vector<std::size_t> order;
    for (auto& token : corpus.tokens(i)) {
      auto [it, inserted] = index.try_emplace(token, vocabulary.size());
      if (inserted) vocabulary.push_back(token);
      if (local[it->second]++ == 0) order.push_back(it->second);
    }
    for (std::size_t col : order) counts[i].emplace_back(col, static_cast<double>(local[col]));
  }
  require(!vocabulary.empty(), ErrorKind::empty_input, "corpus contains no tokens");

  const std::size_t d = vocabulary.size();
  std::vector<double> idf(d, 1.0);
  if (weighting == BowWeighting::tfidf) {
    std::vector<std::size_t> df(d, 0);
    for (const auto& row : counts)
      for (const auto& [col, c] : row) ++df[col];
    for (std::size_t j = 0; j < d; ++j)
      idf[j] = std::log((1.0 + static_cast<double>(n)) / (1.0 + static_cast<double>(df[j]))) + 1.0;
  }

  std::vector<float> values(n * d, 0.0f);
  for (std::size_t i = 0; i < n; ++i) {
    if (weighting == BowWeighting::binary) {
      for (const auto& [col, c] : counts[i]) values[i * d + col] = 1.0f;
      continue;
    }
    double norm_sq = 0.0;
    for (const auto& [col, c] : counts[i]) norm_sq += (c * idf[col]) * (c * idf[col]);
    if (norm_sq == 0.0) continue;
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (const auto& [col, c] : counts[i]) values[i * d + col] = static_cast<float>(c * idf[col] * inv);
  }
  return {EmbeddingMatrix(n, d, std::move(values)), std::move(vocabulary)};
}

}  // namespace stc::corpus
