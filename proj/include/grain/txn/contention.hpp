#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <memory>

namespace grain {

enum class CmDecision : std::uint8_t { wound_owner, abort_self };

/// Age-based arbitration: the older transaction (smaller priority) wins.
[[nodiscard]] constexpr CmDecision cm_resolve(
    std::uint64_t owner_priority, std::uint64_t requester_priority) noexcept {
  return requester_priority < owner_priority ? CmDecision::wound_owner
                                             : CmDecision::abort_self;
}

/// Fixed table of live transaction contexts, indexed by slot. Lets a
/// transaction find the priority and wounded flag of the owner of an eagerly
/// locked word from the slot number stored in that word.
class ContentionRegistry {
 public:
  explicit ContentionRegistry(std::size_t capacity = 4096);

  /// Claims a free slot; throws std::runtime_error when all are in use.
  [[nodiscard]] std::uint32_t acquire(std::uint64_t priority);
  void release(std::uint32_t slot) noexcept;

  [[nodiscard]] std::uint64_t priority(std::uint32_t slot) const noexcept {
    return slots_[slot].priority.load(std::memory_order_acquire);
  }
  void wound(std::uint32_t slot) noexcept {
    slots_[slot].wounded.store(true, std::memory_order_release);
  }
  [[nodiscard]] bool wounded(std::uint32_t slot) const noexcept {
    return slots_[slot].wounded.load(std::memory_order_acquire);
  }
  void clear_wound(std::uint32_t slot) noexcept {
    slots_[slot].wounded.store(false, std::memory_order_release);
  }
  [[nodiscard]] std::size_t capacity() const noexcept { return capacity_; }

 private:
  struct alignas(64) Slot {
    std::atomic<bool> in_use{false};
    std::atomic<bool> wounded{false};
    std::atomic<std::uint64_t> priority{0};
  };

  std::size_t capacity_;
  std::unique_ptr<Slot[]> slots_;
};

}  // namespace grain
