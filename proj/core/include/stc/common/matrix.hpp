#pragma once

#include <Eigen/Core>

namespace stc {

// Row-major throughout so that a row is one sample and maps directly onto
// the on-disk layout.
template <typename T>
using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename T>
using RowVector = Eigen::Matrix<T, 1, Eigen::Dynamic>;

using MatrixF = Matrix<float>;
using MatrixD = Matrix<double>;

template <typename T>
bool all_finite(const Eigen::MatrixBase<T>& m) {
  return m.allFinite();
}

}  // namespace stc
