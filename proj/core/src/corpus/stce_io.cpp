#include "stc/corpus/stce_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "stc/common/error.hpp"

namespace stc::corpus {
namespace {

template <typename U>
void put_le(std::ostream& out, U value) {
  std::array<char, sizeof(U)> bytes{};
  for (std::size_t i = 0; i < sizeof(U); ++i) bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFFu);
  out.write(bytes.data(), bytes.size());
}

template <typename U>
U get_le(std::istream& in, const char* what) {
  std::array<unsigned char, sizeof(U)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  require(in.gcount() == static_cast<std::streamsize>(bytes.size()), ErrorKind::truncated,
          std::string("file ends inside ") + what);
  U value = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) value |= static_cast<U>(bytes[i]) << (8 * i);
  return value;
}

}  // namespace

EmbeddingMatrix read_embeddings(std::istream& in) {
  char magic[4] = {};
  in.read(magic, 4);
  require(in.gcount() == 4, ErrorKind::truncated, "file shorter than the STCE magic");
  require(std::memcmp(magic, kStceMagic, 4) == 0, ErrorKind::bad_magic, "not an STCE file");
  const auto version = get_le<std::uint32_t>(in, "version");
  require(version == kStceVersion, ErrorKind::parse,
          "unsupported STCE version " + std::to_string(version));
  const auto n = get_le<std::uint64_t>(in, "header");
  const auto d = get_le<std::uint64_t>(in, "header");
  require(n >= 1 && d >= 1, ErrorKind::empty_input, "STCE header declares an empty matrix");

  std::vector<float> values;
  // Grow incrementally so a corrupt header cannot trigger a huge allocation.
  values.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(n * d, 1u << 20)));
  for (std::uint64_t k = 0; k < n * d; ++k) {
    const auto bits = get_le<std::uint32_t>(in, "payload");
    const float v = std::bit_cast<float>(bits);
    if (!std::isfinite(v))
      fail(ErrorKind::non_finite, "non-finite value at row " + std::to_string(k / d) + ", column " +
                                      std::to_string(k % d));
    values.push_back(v);
  }

  const auto has_ids = get_le<std::uint8_t>(in, "id flag");
  require(has_ids <= 1, ErrorKind::parse, "id flag must be 0 or 1");
  std::vector<std::string> ids;
  if (has_ids == 1) {
    ids.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(n, 1u << 20)));
    for (std::uint64_t i = 0; i < n; ++i) {
      const auto len = get_le<std::uint32_t>(in, "id length");
      std::string id(len, '\0');
      in.read(id.data(), len);
      require(in.gcount() == static_cast<std::streamsize>(len), ErrorKind::truncated,
              "file ends inside text id " + std::to_string(i));
      ids.push_back(std::move(id));
    }
  }
  return EmbeddingMatrix(static_cast<std::size_t>(n), static_cast<std::size_t>(d), std::move(values),
                         std::move(ids));
}

EmbeddingMatrix read_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::io, "cannot open " + path.string());
  return read_embeddings(in);
}

void write_embeddings(const EmbeddingMatrix& m, std::ostream& out) {
  m.check_finite();
  out.write(kStceMagic, 4);
  put_le<std::uint32_t>(out, kStceVersion);
  put_le<std::uint64_t>(out, m.rows());
  put_le<std::uint64_t>(out, m.cols());
  for (float v : m.data()) put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(v));
  put_le<std::uint8_t>(out, m.has_ids() ? 1 : 0);
  for (const auto& id : m.ids()) {
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(id.size()));
    out.write(id.data(), static_cast<std::streamsize>(id.size()));
  }
  require(static_cast<bool>(out), ErrorKind::io, "write failed");
}

void write_embeddings(const EmbeddingMatrix& m, const std::filesystem::path& path) {
  m.check_finite();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorKind::io, "cannot open " + path.string() + " for writing");
  write_embeddings(m, out);
  out.flush();
  require(static_cast<bool>(out), ErrorKind::io, "write to " + path.string() + " failed");
}

EmbeddingMatrix read_embeddings_tsv(const std::filesystem::path& path, bool has_id_column) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::io, "cannot open " + path.string());
  std::vector<float> values;
  std::vector<std::string> ids;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::istringstream fields(line);
    if (has_id_column) {
      std::string id;
      fields >> id;
      ids.push_back(std::move(id));
    }
    std::size_t count = 0;
    std::string token;
    while (fields >> token) {
      char* end = nullptr;
      const float v = std::strtof(token.c_str(), &end);
      require(end != token.c_str() && *end == '\0', ErrorKind::parse,
              path.string() + ":" + std::to_string(line_no) + ": bad number '" + token + "'");
      values.push_back(v);
      ++count;
    }
    if (rows == 0) cols = count;
    require(count == cols && count > 0, ErrorKind::shape_mismatch,
            path.string() + ":" + std::to_string(line_no) + ": expected " + std::to_string(cols) +
                " values, got " + std::to_string(count));
    ++rows;
  }
  require(rows > 0, ErrorKind::empty_input, path.string() + " has no rows");
  return EmbeddingMatrix(rows, cols, std::move(values), std::move(ids));
}

}  // namespace stc::corpus
