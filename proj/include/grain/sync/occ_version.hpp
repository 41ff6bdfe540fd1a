#pragma once

#include <atomic>
#include <cassert>
#include <cstdint>

#include "grain/sync/spin.hpp"

namespace grain {

/// Per-group OCC version word.
///
/// Bit 63 is an exclusive lock; bits 0..62 hold a counter that only the lock
/// holder may change. Readers never write the word, so a read-only
/// transaction leaves no trace in shared memory.
class OccVersion {
 public:
  static constexpr std::uint64_t kLockBit = std::uint64_t{1} << 63;
  static constexpr std::uint64_t kCounterMask = kLockBit - 1;

  constexpr OccVersion() noexcept = default;
  explicit constexpr OccVersion(std::uint64_t raw) noexcept : word_{raw} {}

  OccVersion(const OccVersion&) = delete;
  OccVersion& operator=(const OccVersion&) = delete;

  [[nodiscard]] static constexpr bool is_locked(std::uint64_t raw) noexcept {
    return (raw & kLockBit) != 0;
  }
  [[nodiscard]] static constexpr std::uint64_t counter_of(
      std::uint64_t raw) noexcept {
    return raw & kCounterMask;
  }

  [[nodiscard]] std::uint64_t load(
      std::memory_order order = std::memory_order_acquire) const noexcept {
    return word_.load(order);
  }

  /// Counter observed at an instant when the lock bit was clear. Spins while
  /// the word is locked.
  [[nodiscard]] std::uint64_t stable_read() const noexcept {
    SpinWait spin;
    for (;;) {
      const auto raw = word_.load(std::memory_order_acquire);
      if (!is_locked(raw)) return raw;
      spin.pause();
    }
  }

  /// No-wait acquisition.
  [[nodiscard]] bool try_lock() noexcept {
    if (is_locked(word_.load(std::memory_order_relaxed))) return false;
    return !is_locked(word_.fetch_or(kLockBit, std::memory_order_acquire));
  }

  /// Publishes counter + 1 and clears the lock in one store.
  std::uint64_t unlock_bump() noexcept {
    const auto raw = word_.load(std::memory_order_relaxed);
    assert(is_locked(raw) && "unlock_bump without holding the lock");
    const auto next = (counter_of(raw) + 1) & kCounterMask;
    word_.store(next, std::memory_order_release);
    return next;
  }

  /// Releases without changing the counter (abort path).
  void unlock() noexcept {
    const auto raw = word_.load(std::memory_order_relaxed);
    assert(is_locked(raw) && "unlock without holding the lock");
    word_.store(counter_of(raw), std::memory_order_release);
  }

 private:
  std::atomic<std::uint64_t> word_{0};
};

}  // namespace grain
