#pragma once

#include "stc/common/error.hpp"
#include "stc/common/matrix.hpp"

namespace stc::nn {

template <typename T>
struct LossAndGradient {
  T loss;
  Matrix<T> grad;
};

/// Mean squared error over all n*d entries; grad is with respect to xhat.
template <typename T>
LossAndGradient<T> mse_loss(const Matrix<T>& x, const Matrix<T>& xhat) {
  require(x.rows() == xhat.rows() && x.cols() == xhat.cols(), ErrorKind::shape_mismatch,
          "mse_loss operands differ in shape");
  require(x.size() > 0, ErrorKind::empty_input, "mse_loss on an empty matrix");
  const T scale = T(1) / static_cast<T>(x.size());
  Matrix<T> diff = xhat - x;
  const T loss = diff.squaredNorm() * scale;
  return {loss, (T(2) * scale) * diff};
}

}  // namespace stc::nn
