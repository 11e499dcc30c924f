#include "stc/corpus/labels.hpp"

#include <charconv>
#include <fstream>
#include <string>
#include <unordered_map>

#include "stc/common/error.hpp"

namespace stc::corpus {
namespace {

template <typename Int>
std::pair<std::vector<std::size_t>, std::size_t> canonicalize(std::span<const Int> raw) {
  std::unordered_map<long long, std::size_t> remap;
  std::vector<std::size_t> out;
  out.reserve(raw.size());
  for (Int v : raw) {
    const auto key = static_cast<long long>(v);
    require(key >= 0, ErrorKind::invalid_argument, "labels must be non-negative");
    auto [it, inserted] = remap.try_emplace(key, remap.size());
    out.push_back(it->second);
  }
  return {std::move(out), remap.size()};
}

}  // namespace

LabelVector::LabelVector(std::span<const long long> raw) {
  std::tie(labels_, k_) = canonicalize(raw);
}
LabelVector::LabelVector(std::span<const int> raw) { std::tie(labels_, k_) = canonicalize(raw); }
LabelVector::LabelVector(std::span<const std::size_t> raw) {
  std::tie(labels_, k_) = canonicalize(raw);
}

LabelVector read_labels(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::io, "cannot open " + path.string());
  std::vector<long long> raw;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    long long v = 0;
    const char* begin = line.data() + first;
    const char* end = line.data() + last + 1;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    require(ec == std::errc() && ptr == end, ErrorKind::parse,
            path.string() + ":" + std::to_string(line_no) + ": not an integer label");
    raw.push_back(v);
  }
  require(!raw.empty(), ErrorKind::empty_input, path.string() + " has no labels");
  return LabelVector(std::span<const long long>(raw));
}

void write_labels(const LabelVector& labels, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  require(static_cast<bool>(out), ErrorKind::io, "cannot open " + path.string() + " for writing");
  for (std::size_t v : labels.labels()) out << v << '\n';
  require(static_cast<bool>(out), ErrorKind::io, "write to " + path.string() + " failed");
}

}  // namespace stc::corpus
