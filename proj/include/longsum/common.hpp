#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace longsum {

// Error taxonomy mirrored by the CLI exit codes:
// ConfigError -> 1 (usage), DataError -> 2, BackendError -> 3, anything else -> 4.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BackendError : public std::runtime_error {
 public:
  BackendError(const std::string& message, std::string document_id, int attempts)
      : std::runtime_error(message),
        document_id_(std::move(document_id)),
        attempts_(attempts) {}

  const std::string& document_id() const noexcept { return document_id_; }
  int attempts() const noexcept { return attempts_; }

 private:
  std::string document_id_;
  int attempts_;
};

inline constexpr std::uint64_t kFnvOffsetBasis = 1469598103934665603ull;
inline constexpr std::uint64_t kFnvPrime = 1099511628211ull;

// 64-bit FNV-1a; used for stopword-list and configuration fingerprints.
inline std::uint64_t fnv1a64(std::string_view data,
                             std::uint64_t state = kFnvOffsetBasis) {
  for (unsigned char c : data) {
    state ^= c;
    state *= kFnvPrime;
  }
  return state;
}

inline std::string hex64(std::uint64_t value) {
  constexpr const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[value & 0xf];
    value >>= 4;
  }
  return out;
}

}  // namespace longsum
