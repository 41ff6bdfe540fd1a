#pragma once

#include <bit>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <initializer_list>

namespace grain {

inline constexpr std::size_t kMaxColumns = 64;

/// Set of column indices of one table (at most 64 columns).
class ColumnSet {
 public:
  constexpr ColumnSet() noexcept = default;
  constexpr ColumnSet(std::initializer_list<std::size_t> cols) noexcept {
    for (const auto c : cols) insert(c);
  }

  [[nodiscard]] static constexpr ColumnSet from_mask(std::uint64_t m) noexcept {
    ColumnSet s;
    s.mask_ = m;
    return s;
  }
  [[nodiscard]] static constexpr ColumnSet all(std::size_t n) noexcept {
    assert(n <= kMaxColumns);
    return from_mask(n == kMaxColumns ? ~std::uint64_t{0}
                                      : (std::uint64_t{1} << n) - 1);
  }

  constexpr void insert(std::size_t c) noexcept {
    assert(c < kMaxColumns);
    mask_ |= std::uint64_t{1} << c;
  }
  [[nodiscard]] constexpr bool contains(std::size_t c) const noexcept {
    return c < kMaxColumns && ((mask_ >> c) & 1U) != 0;
  }
  [[nodiscard]] constexpr bool empty() const noexcept { return mask_ == 0; }
  [[nodiscard]] constexpr std::size_t size() const noexcept {
    return static_cast<std::size_t>(std::popcount(mask_));
  }
  [[nodiscard]] constexpr std::uint64_t mask() const noexcept { return mask_; }
  [[nodiscard]] constexpr bool intersects(ColumnSet o) const noexcept {
    return (mask_ & o.mask_) != 0;
  }
  [[nodiscard]] constexpr bool subset_of(ColumnSet o) const noexcept {
    return (mask_ & ~o.mask_) == 0;
  }

  constexpr ColumnSet& operator|=(ColumnSet o) noexcept {
    mask_ |= o.mask_;
    return *this;
  }
  friend constexpr ColumnSet operator&(ColumnSet a, ColumnSet b) noexcept {
    return from_mask(a.mask_ & b.mask_);
  }
  friend constexpr ColumnSet operator|(ColumnSet a, ColumnSet b) noexcept {
    return from_mask(a.mask_ | b.mask_);
  }
  friend constexpr bool operator==(ColumnSet, ColumnSet) noexcept = default;

  /// Calls fn(column) in ascending order.
  template <class Fn>
  constexpr void for_each(Fn&& fn) const {
    auto m = mask_;
    while (m != 0) {
      fn(static_cast<std::size_t>(std::countr_zero(m)));
      m &= m - 1;
    }
  }

 private:
  std::uint64_t mask_ = 0;
};

}  // namespace grain
