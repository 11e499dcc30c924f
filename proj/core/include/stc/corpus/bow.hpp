#pragma once

#include <string>
#include <vector>

#include "stc/corpus/corpus.hpp"
#include "stc/corpus/embedding_matrix.hpp"

namespace stc::corpus {

enum class BowWeighting { binary, tfidf };

struct BowFeatures {
  EmbeddingMatrix features;
  /// Column order: terms by first occurrence across the corpus.
  std::vector<std::string> vocabulary;
};

/// binary: 1 if the term occurs in the text.
/// tfidf:  raw count * (ln((1 + n) / (1 + df)) + 1), each row scaled to unit
///         L2 norm; texts with no tokens stay all-zero.
BowFeatures bow_features(const Corpus& corpus, BowWeighting weighting);

}  // namespace stc::corpus
