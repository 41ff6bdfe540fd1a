#pragma once

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cstdint>

namespace grain {

enum class LockKind : std::uint8_t { read, write };
enum class AdaptiveMode : std::uint8_t { optimistic, pessimistic };
enum class AdaptiveEvent : std::uint8_t { abort_blamed, clean_access };

/// Decoded view of a RwLockWord.
struct RwState {
  bool writer = false;
  std::uint32_t readers = 0;
  AdaptiveMode mode = AdaptiveMode::optimistic;
  std::uint32_t contention = 0;
  std::uint32_t version = 0;
};

/// Reader-writer lock word shared by 2PL and the adaptive policy.
///
///   bit 63      writer
///   bits 32..62 reader count
///   bit 31      adaptive mode (1 = pessimistic)
///   bits 23..30 contention counter; counts clean accesses while pessimistic
///   bits 0..22  version, bumped on write release, wraps
///
/// Every transition is a single CAS on the word. Acquisition never blocks.
class RwLockWord {
 public:
  static constexpr std::uint64_t kWriterBit = std::uint64_t{1} << 63;
  static constexpr unsigned kReaderShift = 32;
  static constexpr std::uint64_t kReaderUnit = std::uint64_t{1} << kReaderShift;
  static constexpr std::uint64_t kReaderMask = std::uint64_t{0x7FFF'FFFF}
                                               << kReaderShift;
  static constexpr std::uint64_t kModeBit = std::uint64_t{1} << 31;
  static constexpr unsigned kContentionShift = 23;
  static constexpr std::uint64_t kContentionMask = std::uint64_t{0xFF}
                                                   << kContentionShift;
  static constexpr std::uint32_t kContentionMax = 0xFF;
  static constexpr std::uint64_t kVersionMask = (std::uint64_t{1} << 23) - 1;
  static constexpr std::uint32_t kMaxReaders = 0x7FFF'FFFF;

  constexpr RwLockWord() noexcept = default;
  explicit constexpr RwLockWord(std::uint64_t raw) noexcept : word_{raw} {}

  RwLockWord(const RwLockWord&) = delete;
  RwLockWord& operator=(const RwLockWord&) = delete;

  [[nodiscard]] static constexpr RwState decode(std::uint64_t raw) noexcept {
    RwState s;
    s.writer = (raw & kWriterBit) != 0;
    s.readers = static_cast<std::uint32_t>((raw & kReaderMask) >> kReaderShift);
    s.mode = (raw & kModeBit) != 0 ? AdaptiveMode::pessimistic
                                   : AdaptiveMode::optimistic;
    s.contention =
        static_cast<std::uint32_t>((raw & kContentionMask) >> kContentionShift);
    s.version = static_cast<std::uint32_t>(raw & kVersionMask);
    return s;
  }

  [[nodiscard]] static constexpr std::uint64_t encode(const RwState& s) noexcept {
    return (s.writer ? kWriterBit : 0) |
           (std::uint64_t{s.readers} << kReaderShift & kReaderMask) |
           (s.mode == AdaptiveMode::pessimistic ? kModeBit : 0) |
           (std::uint64_t{s.contention} << kContentionShift & kContentionMask) |
           (std::uint64_t{s.version} & kVersionMask);
  }

  [[nodiscard]] std::uint64_t load(
      std::memory_order order = std::memory_order_acquire) const noexcept {
    return word_.load(order);
  }
  [[nodiscard]] RwState state() const noexcept { return decode(load()); }

  [[nodiscard]] bool try_acquire(LockKind kind) noexcept {
    auto raw = word_.load(std::memory_order_relaxed);
    for (;;) {
      std::uint64_t next;
      if (kind == LockKind::read) {
        if ((raw & kWriterBit) != 0) return false;
        if ((raw & kReaderMask) == kReaderMask) return false;
        next = raw + kReaderUnit;
      } else {
        if ((raw & (kWriterBit | kReaderMask)) != 0) return false;
        next = raw | kWriterBit;
      }
      if (word_.compare_exchange_weak(raw, next, std::memory_order_acquire,
                                      std::memory_order_relaxed)) {
        return true;
      }
    }
  }

  /// Converts the caller's sole read grant into the write grant.
  [[nodiscard]] bool try_upgrade() noexcept {
    auto raw = word_.load(std::memory_order_relaxed);
    for (;;) {
      if ((raw & kWriterBit) != 0 || (raw & kReaderMask) != kReaderUnit) {
        return false;
      }
      const auto next = (raw & ~kReaderMask) | kWriterBit;
      if (word_.compare_exchange_weak(raw, next, std::memory_order_acquire,
                                      std::memory_order_relaxed)) {
        return true;
      }
    }
  }

  void release(LockKind kind, bool bump = false) noexcept {
    if (kind == LockKind::read) {
      [[maybe_unused]] const auto prev =
          word_.fetch_sub(kReaderUnit, std::memory_order_release);
      assert((prev & kReaderMask) != 0 && "read release without a grant");
      return;
    }
    auto raw = word_.load(std::memory_order_relaxed);
    for (;;) {
      assert((raw & kWriterBit) != 0 && "write release without the grant");
      auto next = raw & ~kWriterBit;
      if (bump) {
        next = (next & ~kVersionMask) | ((raw + 1) & kVersionMask);
      }
      if (word_.compare_exchange_weak(raw, next, std::memory_order_release,
                                      std::memory_order_relaxed)) {
        return;
      }
    }
  }

  /// Adaptive mode state machine. `pess_threshold` blamed aborts switch an
  /// optimistic word to pessimistic; `opt_streak` consecutive clean accesses
  /// switch it back. Both thresholds must fit the 8-bit counter.
  AdaptiveMode transition(AdaptiveEvent event, std::uint32_t pess_threshold,
                          std::uint32_t opt_streak) noexcept {
    assert(pess_threshold >= 1 && pess_threshold <= kContentionMax);
    assert(opt_streak >= 1 && opt_streak <= kContentionMax);
    auto raw = word_.load(std::memory_order_relaxed);
    for (;;) {
      auto s = decode(raw);
      if (event == AdaptiveEvent::clean_access &&
          s.mode == AdaptiveMode::optimistic) {
        return AdaptiveMode::optimistic;
      }
      if (event == AdaptiveEvent::abort_blamed) {
        if (s.mode == AdaptiveMode::optimistic) {
          s.contention = std::min(s.contention + 1, kContentionMax);
          if (s.contention >= pess_threshold) {
            s.mode = AdaptiveMode::pessimistic;
            s.contention = 0;
          }
        } else {
          s.contention = 0;
        }
      } else {
        s.contention = std::min(s.contention + 1, kContentionMax);
        if (s.contention >= opt_streak) {
          s.mode = AdaptiveMode::optimistic;
          s.contention = 0;
        }
      }
      const auto next = (raw & (kWriterBit | kReaderMask | kVersionMask)) |
                        (s.mode == AdaptiveMode::pessimistic ? kModeBit : 0) |
                        (std::uint64_t{s.contention} << kContentionShift);
      if (next == raw ||
          word_.compare_exchange_weak(raw, next, std::memory_order_acq_rel,
                                      std::memory_order_relaxed)) {
        return s.mode;
      }
    }
  }

 private:
  std::atomic<std::uint64_t> word_{0};
};

}  // namespace grain
