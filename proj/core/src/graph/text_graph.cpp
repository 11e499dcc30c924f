#include "stc/graph/text_graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>

#include "stc/common/error.hpp"

namespace stc::graph {
namespace {

// Similarities are always produced in blocks of this many rows so that the
// dense and the blocked KNN paths see bit-identical values.
constexpr Eigen::Index kSimilarityBlock = 256;

MatrixF unit_rows(const MatrixF& x) {
  require(x.rows() >= 1 && x.cols() >= 1, ErrorKind::empty_input, "similarity of an empty matrix");
  MatrixF out = x;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double norm = x.row(i).cast<double>().norm();
    require(norm > 0.0 && std::isfinite(norm), ErrorKind::invalid_argument,
            "row " + std::to_string(i) + " has zero norm; cosine similarity is undefined");
    out.row(i) = (x.row(i).cast<double>() / norm).cast<float>();
  }
  return out;
}

MatrixF similarity_block(const MatrixF& unit, Eigen::Index begin, Eigen::Index count) {
  MatrixF block = unit.middleRows(begin, count) * unit.transpose();
  block = block.cwiseMax(-1.0f).cwiseMin(1.0f);
  for (Eigen::Index r = 0; r < count; ++r) block(r, begin + r) = 1.0f;
  return block;
}

template <typename Row>
std::vector<std::size_t> top_k(const Row& row, std::size_t self, std::size_t k) {
  std::vector<std::size_t> candidates;
  candidates.reserve(static_cast<std::size_t>(row.size()));
  for (Eigen::Index j = 0; j < row.size(); ++j)
    if (static_cast<std::size_t>(j) != self) candidates.push_back(static_cast<std::size_t>(j));
  auto more_similar = [&](std::size_t a, std::size_t b) {
    const float sa = row(static_cast<Eigen::Index>(a));
    const float sb = row(static_cast<Eigen::Index>(b));
    return sa != sb ? sa > sb : a < b;
  };
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(k),
                    candidates.end(), more_similar);
  candidates.resize(k);
  return candidates;
}

}  // namespace

TextGraph::TextGraph(std::size_t nodes, std::span<const Edge> edges, std::size_t k)
    : neighbors_(nodes), k_(k) {
  require(nodes >= 1, ErrorKind::empty_input, "graph needs at least one node");
  edges_.reserve(edges.size());
  for (auto [u, v] : edges) {
    require(u < nodes && v < nodes, ErrorKind::invalid_argument, "edge endpoint out of range");
    require(u != v, ErrorKind::invalid_argument, "self-loops are not stored in a text graph");
    edges_.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  for (auto [u, v] : edges_) {
    neighbors_[u].push_back(v);
    neighbors_[v].push_back(u);
  }
  for (auto& list : neighbors_) std::sort(list.begin(), list.end());
}

bool TextGraph::has_edge(std::size_t i, std::size_t j) const {
  const auto& list = neighbors_.at(i);
  return std::binary_search(list.begin(), list.end(), j);
}

double CsrMatrix::at(std::size_t i, std::size_t j) const {
  require(i < rows && j < cols, ErrorKind::invalid_argument, "sparse index out of range");
  const auto begin = col_idx.begin() + static_cast<std::ptrdiff_t>(row_ptr[i]);
  const auto end = col_idx.begin() + static_cast<std::ptrdiff_t>(row_ptr[i + 1]);
  const auto it = std::lower_bound(begin, end, j);
  return (it != end && *it == j) ? values[static_cast<std::size_t>(it - col_idx.begin())] : 0.0;
}

MatrixD CsrMatrix::to_dense() const {
  MatrixD out = MatrixD::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t p = row_ptr[i]; p < row_ptr[i + 1]; ++p)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(col_idx[p])) = values[p];
  return out;
}

CsrMatrix CsrMatrix::identity(std::size_t n) {
  CsrMatrix m;
  m.rows = m.cols = n;
  m.row_ptr.resize(n + 1);
  std::iota(m.row_ptr.begin(), m.row_ptr.end(), std::size_t{0});
  m.col_idx.resize(n);
  std::iota(m.col_idx.begin(), m.col_idx.end(), std::size_t{0});
  m.values.assign(n, 1.0);
  return m;
}

MatrixF cosine_similarity_matrix(const MatrixF& x) {
  const MatrixF unit = unit_rows(x);
  const Eigen::Index n = unit.rows();
  MatrixF s(n, n);
  for (Eigen::Index begin = 0; begin < n; begin += kSimilarityBlock) {
    const Eigen::Index count = std::min(kSimilarityBlock, n - begin);
    s.middleRows(begin, count) = similarity_block(unit, begin, count);
  }
  return s;
}

TextGraph build_knn_graph(const MatrixF& similarity, std::size_t k) {
  const auto n = static_cast<std::size_t>(similarity.rows());
  require(similarity.rows() == similarity.cols(), ErrorKind::shape_mismatch,
          "similarity matrix must be square");
  require(k >= 1 && k < n, ErrorKind::invalid_argument,
          "K must satisfy 1 <= K < n (K=" + std::to_string(k) + ", n=" + std::to_string(n) + ")");
  std::vector<TextGraph::Edge> edges;
  edges.reserve(n * k);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j : top_k(similarity.row(static_cast<Eigen::Index>(i)), i, k)) edges.emplace_back(i, j);
  return TextGraph(n, edges, k);
}

TextGraph build_knn_graph_blocked(const MatrixF& x, std::size_t k) {
  const auto n = static_cast<std::size_t>(x.rows());
  require(k >= 1 && k < n, ErrorKind::invalid_argument,
          "K must satisfy 1 <= K < n (K=" + std::to_string(k) + ", n=" + std::to_string(n) + ")");
  const MatrixF unit = unit_rows(x);
  std::vector<TextGraph::Edge> edges;
  edges.reserve(n * k);
  for (Eigen::Index begin = 0; begin < unit.rows(); begin += kSimilarityBlock) {
    const Eigen::Index count = std::min(kSimilarityBlock, unit.rows() - begin);
    const MatrixF block = similarity_block(unit, begin, count);
    for (Eigen::Index r = 0; r < count; ++r) {
      const auto i = static_cast<std::size_t>(begin + r);
      for (std::size_t j : top_k(block.row(r), i, k)) edges.emplace_back(i, j);
    }
  }
  return TextGraph(n, edges, k);
}

CsrMatrix normalize_adjacency(const TextGraph& graph) {
  const std::size_t n = graph.nodes();
  std::vector<double> inv_sqrt(n);
  for (std::size_t i = 0; i < n; ++i) inv_sqrt[i] = 1.0 / std::sqrt(1.0 + static_cast<double>(graph.degree(i)));

  CsrMatrix m;
  m.rows = m.cols = n;
  m.row_ptr.reserve(n + 1);
  m.row_ptr.push_back(0);
  m.col_idx.reserve(n + 2 * graph.edge_count());
  m.values.reserve(n + 2 * graph.edge_count());
  for (std::size_t i = 0; i < n; ++i) {
    bool diagonal_done = false;
    for (std::size_t j : graph.neighbors(i)) {
      if (!diagonal_done && j > i) {
        m.col_idx.push_back(i);
        m.values.push_back(inv_sqrt[i] * inv_sqrt[i]);
        diagonal_done = true;
      }
      m.col_idx.push_back(j);
      m.values.push_back(inv_sqrt[i] * inv_sqrt[j]);
    }
    if (!diagonal_done) {
      m.col_idx.push_back(i);
      m.values.push_back(inv_sqrt[i] * inv_sqrt[i]);
    }
    m.row_ptr.push_back(m.col_idx.size());
  }
  return m;
}

void write_edge_list(const TextGraph& graph, std::ostream& out) {
  for (auto [u, v] : graph.edges()) out << u << ' ' << v << '\n';
}

void write_edge_list(const TextGraph& graph, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  require(static_cast<bool>(out), ErrorKind::io, "cannot open " + path.string() + " for writing");
  write_edge_list(graph, out);
  require(static_cast<bool>(out), ErrorKind::io, "write to " + path.string() + " failed");
}

}  // namespace stc::graph
