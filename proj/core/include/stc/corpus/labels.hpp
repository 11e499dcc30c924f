#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace stc::corpus {

/// Ground-truth or predicted cluster ids, densely relabeled to 0..k-1 in
/// order of first appearance.
class LabelVector {
 public:
  LabelVector() = default;
  /// Canonicalizes: any non-negative ids, any order of first appearance.
  explicit LabelVector(std::span<const long long> raw);
  explicit LabelVector(std::span<const int> raw);
  explicit LabelVector(std::span<const std::size_t> raw);

  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t k() const noexcept { return k_; }
  const std::vector<std::size_t>& labels() const noexcept { return labels_; }
  std::size_t operator[](std::size_t i) const { return labels_[i]; }

  friend bool operator==(const LabelVector&, const LabelVector&) = default;

 private:
  std::vector<std::size_t> labels_;
  std::size_t k_ = 0;
};

/// One non-negative integer per line.
LabelVector read_labels(const std::filesystem::path& path);
void write_labels(const LabelVector& labels, const std::filesystem::path& path);

}  // namespace stc::corpus
