#include "stc/corpus/word_vectors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "stc/common/error.hpp"
#include "stc/common/rng.hpp"

namespace stc::corpus {

WordVectorTable::WordVectorTable(std::vector<std::string> words, std::size_t dim,
                                 std::vector<float> values)
    : words_(std::move(words)), dim_(dim), values_(std::move(values)) {
  require(dim_ >= 1, ErrorKind::invalid_argument, "word vector dimension must be positive");
  require(values_.size() == words_.size() * dim_, ErrorKind::shape_mismatch,
          "word vector payload does not match m * d");
  for (std::size_t k = 0; k < values_.size(); ++k)
    require(std::isfinite(values_[k]), ErrorKind::non_finite,
            "non-finite component in vector for '" + words_[k / dim_] + "'");
  index_.reserve(words_.size());
  // First occurrence wins on duplicate words.
  for (std::size_t i = 0; i < words_.size(); ++i) index_.try_emplace(words_[i], i);
}

std::optional<std::span<const float>> WordVectorTable::find(const std::string& word) const {
  auto it = index_.find(word);
  if (it == index_.end()) return std::nullopt;
  return std::span<const float>(values_).subspan(it->second * dim_, dim_);
}

WordVectorTable read_word_vectors(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::io, "cannot open " + path.string());
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorKind::parse, path.string() + ": missing header");
  std::size_t m = 0;
  std::size_t dim = 0;
  {
    std::istringstream header(line);
    require(static_cast<bool>(header >> m >> dim) && dim > 0, ErrorKind::parse,
            path.string() + ": header must be 'm d'");
  }
  std::vector<std::string> words;
  std::vector<float> values;
  words.reserve(m);
  values.reserve(m * dim);
  std::size_t line_no = 1;
  while (words.size() < m && std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string word;
    if (!(fields >> word)) continue;
    for (std::size_t j = 0; j < dim; ++j) {
      float v = 0.0f;
      require(static_cast<bool>(fields >> v), ErrorKind::parse,
              path.string() + ":" + std::to_string(line_no) + ": expected " + std::to_string(dim) +
                  " components");
      values.push_back(v);
    }
    words.push_back(std::move(word));
  }
  require(words.size() == m, ErrorKind::truncated,
          path.string() + ": header declares " + std::to_string(m) + " words, found " +
              std::to_string(words.size()));
  return WordVectorTable(std::move(words), dim, std::move(values));
}

std::vector<float> oov_vector(std::uint64_t seed, const std::string& token, std::size_t dim) {
  Rng rng(splitmix64(seed) ^ fnv1a64(token));
  std::vector<float> v(dim);
  for (auto& x : v) x = static_cast<float>(rng.uniform(-0.25, 0.25));
  return v;
}

WordAverageResult average_word_vectors(const Corpus& corpus, const WordVectorTable& table,
                                       std::uint64_t oov_seed) {
  const std::size_t n = corpus.size();
  const std::size_t dim = table.dim();
  std::vector<float> values(n * dim, 0.0f);
  std::size_t empty = 0;
  std::size_t oov = 0;
  std::vector<double> sum(dim);
  for (std::size_t i = 0; i < n; ++i) {
    auto tokens = corpus.tokens(i);
    // Fixed summation order makes the row a function of the token multiset.
    std::sort(tokens.begin(), tokens.end());
    if (tokens.empty()) {
      ++empty;
      continue;
    }
    std::fill(sum.begin(), sum.end(), 0.0);
    for (const auto& token : tokens) {
      if (auto vec = table.find(token)) {
        for (std::size_t j = 0; j < dim; ++j) sum[j] += (*vec)[j];
      } else {
        ++oov;
        const auto random = oov_vector(oov_seed, token, dim);
        for (std::size_t j = 0; j < dim; ++j) sum[j] += random[j];
      }
    }
    const double inv = 1.0 / static_cast<double>(tokens.size());
    for (std::size_t j = 0; j < dim; ++j) values[i * dim + j] = static_cast<float>(sum[j] * inv);
  }
  return {EmbeddingMatrix(n, dim, std::move(values)), empty, oov};
}

}  // namespace stc::corpus
