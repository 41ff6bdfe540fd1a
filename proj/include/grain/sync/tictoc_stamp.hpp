#pragma once

#include <atomic>
#include <cassert>
#include <cstdint>

#include "grain/sync/spin.hpp"

namespace grain {

struct TicTocPair {
  std::uint64_t wts = 0;
  std::uint64_t rts = 0;

  friend bool operator==(const TicTocPair&, const TicTocPair&) = default;
};

/// Uncompressed TicToc timestamp: a write-timestamp word carrying the lock
/// bit, plus a separate read-timestamp word.
///
/// Both words are only modified by the holder of the lock bit. That includes
/// read-timestamp extension, which briefly takes the lock so that an
/// extension can never interleave with a concurrent install.
class TicTocStamp {
 public:
  static constexpr std::uint64_t kLockBit = std::uint64_t{1} << 63;
  static constexpr std::uint64_t kTsMask = kLockBit - 1;

  constexpr TicTocStamp() noexcept = default;
  constexpr TicTocStamp(std::uint64_t wts, std::uint64_t rts,
                        bool locked = false) noexcept
      : wts_{(wts & kTsMask) | (locked ? kLockBit : 0)}, rts_{rts} {}

  TicTocStamp(const TicTocStamp&) = delete;
  TicTocStamp& operator=(const TicTocStamp&) = delete;

  [[nodiscard]] static constexpr bool is_locked(std::uint64_t raw) noexcept {
    return (raw & kLockBit) != 0;
  }

  [[nodiscard]] std::uint64_t wts_word(
      std::memory_order order = std::memory_order_acquire) const noexcept {
    return wts_.load(order);
  }
  [[nodiscard]] std::uint64_t wts() const noexcept {
    return wts_.load(std::memory_order_acquire) & kTsMask;
  }
  [[nodiscard]] std::uint64_t rts() const noexcept {
    return rts_.load(std::memory_order_acquire);
  }
  [[nodiscard]] bool locked() const noexcept {
    return is_locked(wts_.load(std::memory_order_acquire));
  }

  /// A (wts, rts) pair that held simultaneously while the lock was clear.
  [[nodiscard]] TicTocPair read_pair() const noexcept {
    SpinWait spin;
    for (;;) {
      TicTocPair pair;
      if (try_read_pair(pair)) return pair;
      spin.pause();
    }
  }

  /// Single attempt of read_pair; false if locked or raced with a writer.
  [[nodiscard]] bool try_read_pair(TicTocPair& out) const noexcept {
    const auto w1 = wts_.load(std::memory_order_acquire);
    if (is_locked(w1)) return false;
    const auto r = rts_.load(std::memory_order_acquire);
    const auto w2 = wts_.load(std::memory_order_acquire);
    if (w1 != w2) return false;
    out = TicTocPair{w1, r};
    return true;
  }

  [[nodiscard]] bool try_lock() noexcept {
    if (is_locked(wts_.load(std::memory_order_relaxed))) return false;
    return !is_locked(wts_.fetch_or(kLockBit, std::memory_order_acquire));
  }

  void unlock() noexcept {
    const auto raw = wts_.load(std::memory_order_relaxed);
    assert(is_locked(raw) && "unlock without holding the lock");
    wts_.store(raw & kTsMask, std::memory_order_release);
  }

  /// Raises rts to at least `target` provided the version written at
  /// `expected_wts` is still current. Fails when wts moved or another
  /// transaction holds the lock.
  [[nodiscard]] bool extend_rts(std::uint64_t expected_wts,
                                std::uint64_t target,
                                bool held_by_caller = false) noexcept {
    if (held_by_caller) {
      if ((wts_.load(std::memory_order_relaxed) & kTsMask) != expected_wts) {
        return false;
      }
      if (rts_.load(std::memory_order_relaxed) < target) {
        rts_.store(target, std::memory_order_release);
      }
      return true;
    }
    for (;;) {
      auto w = wts_.load(std::memory_order_acquire);
      if ((w & kTsMask) != expected_wts || is_locked(w)) return false;
      const auto r = rts_.load(std::memory_order_acquire);
      if (wts_.load(std::memory_order_acquire) != w) continue;
      if (r >= target) return true;
      if (wts_.compare_exchange_weak(w, w | kLockBit,
                                     std::memory_order_acquire,
                                     std::memory_order_relaxed)) {
        if (rts_.load(std::memory_order_relaxed) < target) {
          rts_.store(target, std::memory_order_release);
        }
        wts_.store(w, std::memory_order_release);
        return true;
      }
    }
  }

  /// Installs a new version at `commit_ts` (wts = rts = commit_ts) and
  /// releases the lock.
  void install(std::uint64_t commit_ts) noexcept {
    assert(is_locked(wts_.load(std::memory_order_relaxed)));
    assert(commit_ts > (wts_.load(std::memory_order_relaxed) & kTsMask));
    rts_.store(commit_ts, std::memory_order_release);
    wts_.store(commit_ts & kTsMask, std::memory_order_release);
  }

 private:
  std::atomic<std::uint64_t> wts_{0};
  std::atomic<std::uint64_t> rts_{0};
};

}  // namespace grain
