#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "stc/common/matrix.hpp"
#include "stc/nn/network.hpp"

namespace stc::nn {

// Little-endian container in the style of STCE:
//   "STCK" | u32 version=1
//   | u32 network count | per network: name, u64 layer count,
//       per layer: u64 in, u64 out, u8 activation, u8 has_bias,
//                  in*out binary32 weights (row-major), out binary32 biases
//   | u32 tensor count | per tensor: name, u64 rows, u64 cols, binary32 data
// Names are u32 byte length + UTF-8 bytes.
struct Checkpoint {
  std::vector<std::pair<std::string, Network<float>>> networks;
  std::vector<std::pair<std::string, MatrixF>> tensors;

  const Network<float>& network(const std::string& name) const;
  const MatrixF& tensor(const std::string& name) const;
};

void write_checkpoint(const Checkpoint& checkpoint, std::ostream& out);
void write_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path);
Checkpoint read_checkpoint(std::istream& in);
Checkpoint read_checkpoint(const std::filesystem::path& path);

}  // namespace stc::nn
