#pragma once

#include <cassert>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <span>
#include <string_view>
#include <vector>

#include "grain/storage/schema.hpp"

namespace grain {

/// Local copy of one row in storage layout. Columns are fixed-width byte
/// strings; integer columns are 8-byte native-endian int64.
class RowBuffer {
 public:
  RowBuffer() = default;
  explicit RowBuffer(const RowFormat& format)
      : format_(&format), words_(format.total_words(), 0) {}

  [[nodiscard]] const RowFormat& format() const noexcept { return *format_; }
  [[nodiscard]] bool valid() const noexcept { return format_ != nullptr; }

  [[nodiscard]] std::span<std::uint64_t> words() noexcept { return words_; }
  [[nodiscard]] std::span<const std::uint64_t> words() const noexcept {
    return words_;
  }
  [[nodiscard]] std::span<std::uint64_t> group_words(std::size_t g) noexcept {
    return std::span(words_).subspan(format_->group_word_begin(g),
                                     format_->group_word_count(g));
  }
  [[nodiscard]] std::span<const std::uint64_t> group_words(
      std::size_t g) const noexcept {
    return std::span(words_).subspan(format_->group_word_begin(g),
                                     format_->group_word_count(g));
  }

  [[nodiscard]] std::span<const std::byte> column(std::size_t c) const {
    return {bytes() + format_->byte_offset(c), format_->width(c)};
  }
  void set_bytes(std::size_t c, std::span<const std::byte> src) {
    const auto w = format_->width(c);
    auto* dst = bytes() + format_->byte_offset(c);
    const auto n = src.size() < w ? src.size() : w;
    std::memcpy(dst, src.data(), n);
    std::memset(dst + n, 0, w - n);
  }

  [[nodiscard]] std::int64_t get_i64(std::size_t c) const {
    assert(format_->width(c) == sizeof(std::int64_t));
    std::int64_t v;
    std::memcpy(&v, bytes() + format_->byte_offset(c), sizeof v);
    return v;
  }
  void set_i64(std::size_t c, std::int64_t v) {
    assert(format_->width(c) == sizeof(std::int64_t));
    std::memcpy(bytes() + format_->byte_offset(c), &v, sizeof v);
  }

  /// Column contents up to the first NUL.
  [[nodiscard]] std::string_view get_str(std::size_t c) const {
    const auto* p = reinterpret_cast<const char*>(bytes()) +
                    format_->byte_offset(c);
    const auto w = format_->width(c);
    std::size_t n = 0;
    while (n < w && p[n] != '\0') ++n;
    return {p, n};
  }
  void set_str(std::size_t c, std::string_view s) {
    set_bytes(c, std::as_bytes(std::span(s.data(), s.size())));
  }

  /// Copies the columns in `cols` from `other` (same format).
  void copy_columns(const RowBuffer& other, ColumnSet cols) {
    cols.for_each([&](std::size_t c) {
      std::memcpy(bytes() + format_->byte_offset(c),
                  other.bytes() + format_->byte_offset(c), format_->width(c));
    });
  }

  friend bool operator==(const RowBuffer& a, const RowBuffer& b) {
    return a.words_ == b.words_;
  }

 private:
  [[nodiscard]] std::byte* bytes() noexcept {
    return reinterpret_cast<std::byte*>(words_.data());
  }
  [[nodiscard]] const std::byte* bytes() const noexcept {
    return reinterpret_cast<const std::byte*>(words_.data());
  }

  const RowFormat* format_ = nullptr;
  std::vector<std::uint64_t> words_;
};

/// Copies the bytes of `cols` between two word arrays laid out by `format`.
void merge_columns(const RowFormat& format, ColumnSet cols,
                   std::span<const std::uint64_t> src,
                   std::span<std::uint64_t> dst);

}  // namespace grain
