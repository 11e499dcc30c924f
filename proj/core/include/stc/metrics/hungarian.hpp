#pragma once

#include <vector>

#include "stc/common/matrix.hpp"

namespace stc::metrics {

struct Assignment {
  std::vector<std::size_t> row_to_col;  // one entry per row of the input
  double cost = 0.0;
};

/// Minimum-cost assignment (Hungarian method, O(n^3)). Rectangular inputs
/// are padded with zeros to square; every row gets a distinct column when
/// rows <= cols, otherwise rows matched to padding report cols as column.
Assignment solve_assignment(const MatrixD& cost);

}  // namespace stc::metrics
