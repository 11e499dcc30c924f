#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "stc/common/matrix.hpp"

namespace stc::graph {

/// Undirected simple graph over text nodes. Self-loops are never stored;
/// they are added only by normalize_adjacency.
class TextGraph {
 public:
  using Edge = std::pair<std::size_t, std::size_t>;

  /// Accepts each undirected edge in either orientation; duplicates merge.
  TextGraph(std::size_t nodes, std::span<const Edge> edges, std::size_t k = 0);

  std::size_t nodes() const noexcept { return neighbors_.size(); }
  /// Neighbours requested per node when the graph came from KNN selection.
  std::size_t k() const noexcept { return k_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  /// Each edge once as (i, j) with i < j, sorted lexicographically.
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  /// Sorted neighbour list of node i.
  const std::vector<std::size_t>& neighbors(std::size_t i) const { return neighbors_.at(i); }
  std::size_t degree(std::size_t i) const { return neighbors_.at(i).size(); }
  bool has_edge(std::size_t i, std::size_t j) const;

 private:
  std::vector<std::vector<std::size_t>> neighbors_;
  std::vector<Edge> edges_;
  std::size_t k_;
};

/// Compressed sparse row matrix with double values.
struct CsrMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> row_ptr;  // rows + 1 entries
  std::vector<std::size_t> col_idx;  // sorted within each row
  std::vector<double> values;

  std::size_t nnz() const noexcept { return values.size(); }
  double at(std::size_t i, std::size_t j) const;
  MatrixD to_dense() const;
  static CsrMatrix identity(std::size_t n);
};

/// Pairwise cosine similarity. Diagonal is exactly 1 and entries are
/// clamped to [-1, 1]. A zero-norm row is an error naming the row.
MatrixF cosine_similarity_matrix(const MatrixF& x);

/// For every node the k most similar other nodes (ties: lower index first),
/// OR-symmetrized. Requires 1 <= k < n.
TextGraph build_knn_graph(const MatrixF& similarity, std::size_t k);

/// Same edge set as build_knn_graph(cosine_similarity_matrix(x), k) without
/// materializing the n x n matrix.
TextGraph build_knn_graph_blocked(const MatrixF& x, std::size_t k);

/// D^-1/2 (A + I) D^-1/2 with D the degree of A + I.
CsrMatrix normalize_adjacency(const TextGraph& graph);

/// "i j" per line, i < j, sorted.
void write_edge_list(const TextGraph& graph, std::ostream& out);
void write_edge_list(const TextGraph& graph, const std::filesystem::path& path);

}  // namespace stc::graph
