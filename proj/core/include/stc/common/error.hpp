#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stc {

enum class ErrorKind {
  invalid_argument,
  shape_mismatch,
  bad_magic,
  truncated,
  non_finite,
  io,
  parse,
  empty_input,
  diverged,
  stale_cache,
  config,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for the library. Callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) fail(kind, message);
}

}  // namespace stc
