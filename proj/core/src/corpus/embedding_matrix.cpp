#include "stc/corpus/embedding_matrix.hpp"

#include <cmath>
#include <unordered_set>

#include "stc/common/error.hpp"

namespace stc::corpus {

EmbeddingMatrix::EmbeddingMatrix(std::size_t rows, std::size_t cols, std::vector<float> values,
                                 std::vector<std::string> ids)
    : rows_(rows), cols_(cols), values_(std::move(values)), ids_(std::move(ids)) {
  require(rows_ >= 1 && cols_ >= 1, ErrorKind::empty_input,
          "embedding matrix needs n >= 1 and d >= 1");
  require(values_.size() == rows_ * cols_, ErrorKind::shape_mismatch,
          "embedding payload has " + std::to_string(values_.size()) + " values, expected " +
              std::to_string(rows_ * cols_));
  if (!ids_.empty()) {
    require(ids_.size() == rows_, ErrorKind::shape_mismatch, "id count does not match row count");
    std::unordered_set<std::string> seen;
    for (const auto& id : ids_)
      require(seen.insert(id).second, ErrorKind::invalid_argument, "duplicate text id '" + id + "'");
  }
  check_finite();
}

std::span<const float> EmbeddingMatrix::row(std::size_t i) const {
  require(i < rows_, ErrorKind::invalid_argument, "row index out of range");
  return std::span<const float>(values_).subspan(i * cols_, cols_);
}

void EmbeddingMatrix::check_finite() const {
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!std::isfinite(values_[k]))
      fail(ErrorKind::non_finite, "non-finite value at row " + std::to_string(k / cols_) +
                                      ", column " + std::to_string(k % cols_));
  }
}

}  // namespace stc::corpus
