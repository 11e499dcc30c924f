#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "stc/common/matrix.hpp"

namespace stc::corpus {

/// n x d matrix of binary32 values, row-major, with optional per-row text ids.
///
/// The constructor enforces shape, id uniqueness and finiteness. Values can
/// be mutated in place through data(); read and write re-validate, so a
/// matrix poisoned after construction never reaches disk.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix(std::size_t rows, std::size_t cols, std::vector<float> values,
                  std::vector<std::string> ids = {});

  template <typename Derived>
  static EmbeddingMatrix from_eigen(const Eigen::MatrixBase<Derived>& m,
                                    std::vector<std::string> ids = {}) {
    std::vector<float> values(static_cast<std::size_t>(m.rows() * m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        values[static_cast<std::size_t>(i * m.cols() + j)] = static_cast<float>(m(i, j));
    return EmbeddingMatrix(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()),
                           std::move(values), std::move(ids));
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  std::span<const float> data() const noexcept { return values_; }
  std::span<float> data() noexcept { return values_; }

  std::span<const float> row(std::size_t i) const;

  bool has_ids() const noexcept { return !ids_.empty(); }
  const std::vector<std::string>& ids() const noexcept { return ids_; }

  /// Throws non_finite naming the first offending entry.
  void check_finite() const;

  template <typename T>
  Matrix<T> to_matrix() const {
    Matrix<T> m(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
    for (std::size_t i = 0; i < values_.size(); ++i) m.data()[i] = static_cast<T>(values_[i]);
    return m;
  }

  friend bool operator==(const EmbeddingMatrix&, const EmbeddingMatrix&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<float> values_;
  std::vector<std::string> ids_;
};

}  // namespace stc::corpus
