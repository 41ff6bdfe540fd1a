#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace grain {

/// Builds order-preserving binary keys: big-endian integers and fixed-width
/// zero-padded strings, concatenated. Byte-wise comparison of two keys built
/// from the same component sequence matches component-wise comparison.
class KeyBuilder {
 public:
  KeyBuilder& u8(std::uint8_t v) {
    key_.push_back(static_cast<char>(v));
    return *this;
  }
  KeyBuilder& u16(std::uint16_t v) { return be(v, 2); }
  KeyBuilder& u32(std::uint32_t v) { return be(v, 4); }
  KeyBuilder& u64(std::uint64_t v) { return be(v, 8); }
  KeyBuilder& str(std::string_view s, std::size_t width) {
    const auto n = s.size() < width ? s.size() : width;
    key_.append(s.data(), n);
    key_.append(width - n, '\0');
    return *this;
  }

  [[nodiscard]] const std::string& view() const noexcept { return key_; }
  [[nodiscard]] std::string build() && { return std::move(key_); }
  [[nodiscard]] std::string build() const& { return key_; }

 private:
  KeyBuilder& be(std::uint64_t v, int bytes) {
    for (int i = bytes - 1; i >= 0; --i) {
      key_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
    return *this;
  }

  std::string key_;
};

/// Smallest key greater than every key that starts with `prefix`; empty if
/// no such key exists (prefix is all 0xFF).
[[nodiscard]] inline std::string prefix_successor(std::string prefix) {
  while (!prefix.empty()) {
    auto& last = reinterpret_cast<unsigned char&>(prefix.back());
    if (last != 0xFF) {
      ++last;
      return prefix;
    }
    prefix.pop_back();
  }
  return prefix;
}

[[nodiscard]] inline std::uint64_t decode_u64(std::string_view key,
                                              std::size_t offset) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < 8; ++i) {
    v = (v << 8) | static_cast<unsigned char>(key[offset + i]);
  }
  return v;
}

[[nodiscard]] inline std::uint32_t decode_u32(std::string_view key,
                                              std::size_t offset) {
  std::uint32_t v = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    v = (v << 8) | static_cast<unsigned char>(key[offset + i]);
  }
  return v;
}

}  // namespace grain
