#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "stc/corpus/embedding_matrix.hpp"

namespace stc::corpus {

// STCE container, little-endian:
//   "STCE" | u32 version=1 | u64 n | u64 d | n*d binary32 row-major
//   | u8 has_ids | (if 1) n x (u32 byte length, UTF-8 bytes)
inline constexpr char kStceMagic[4] = {'S', 'T', 'C', 'E'};
inline constexpr std::uint32_t kStceVersion = 1;

EmbeddingMatrix read_embeddings(const std::filesystem::path& path);
EmbeddingMatrix read_embeddings(std::istream& in);

void write_embeddings(const EmbeddingMatrix& m, const std::filesystem::path& path);
void write_embeddings(const EmbeddingMatrix& m, std::ostream& out);

/// Plain-text fallback: one row per line, fields separated by tabs or
/// spaces. With has_id_column the first field of every line is the text id.
EmbeddingMatrix read_embeddings_tsv(const std::filesystem::path& path, bool has_id_column = false);

}  // namespace stc::corpus
