#include "stc/metrics/hungarian.hpp"

#include <algorithm>
#include <limits>

#include "stc/common/error.hpp"

namespace stc::metrics {

Assignment solve_assignment(const MatrixD& cost) {
  require(cost.allFinite(), ErrorKind::non_finite, "assignment costs must be finite");
  const auto rows = static_cast<std::size_t>(cost.rows());
  const auto cols = static_cast<std::size_t>(cost.cols());
  const std::size_t n = std::max(rows, cols);
  Assignment out;
  if (n == 0) return out;

  auto c = [&](std::size_t i, std::size_t j) {
    return (i < rows && j < cols) ? cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) : 0.0;
  };

  // Potentials formulation; index 0 is a sentinel, rows/columns are 1-based.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = match[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double reduced = c(i0 - 1, j - 1) - u[i0] - v[j];
        if (reduced < minv[j]) {
          minv[j] = reduced;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  out.row_to_col.assign(rows, cols);
  for (std::size_t j = 1; j <= n; ++j) {
    const std::size_t i = match[j];
    if (i >= 1 && i <= rows) {
      out.row_to_col[i - 1] = j - 1 < cols ? j - 1 : cols;
      out.cost += c(i - 1, j - 1);
    }
  }
  return out;
}

}  // namespace stc::metrics
