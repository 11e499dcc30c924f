#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace stc::corpus {

/// Lowercases ASCII letters and splits on runs of characters that are not
/// ASCII alphanumerics. Bytes >= 0x80 are kept as word characters so UTF-8
/// words survive intact.
std::vector<std::string> tokenize(std::string_view text);

class Corpus {
 public:
  explicit Corpus(std::vector<std::string> texts);

  std::size_t size() const noexcept { return texts_.size(); }
  const std::vector<std::string>& texts() const noexcept { return texts_; }
  std::vector<std::string> tokens(std::size_t i) const { return tokenize(texts_.at(i)); }

 private:
  std::vector<std::string> texts_;
};

/// One text per line; empty lines are kept as empty texts.
Corpus read_corpus(const std::filesystem::path& path);

}  // namespace stc::corpus
