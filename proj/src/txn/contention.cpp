#include "grain/txn/contention.hpp"

#include <functional>
#include <stdexcept>
#include <thread>

namespace grain {

ContentionRegistry::ContentionRegistry(std::size_t capacity)
    : capacity_(capacity), slots_(std::make_unique<Slot[]>(capacity)) {}

std::uint32_t ContentionRegistry::acquire(std::uint64_t priority) {
  // Start each thread at a different place to keep claims uncontended.
  static thread_local const std::size_t hint =
      std::hash<std::thread::id>{}(std::this_thread::get_id());
  for (std::size_t i = 0; i < capacity_; ++i) {
    const auto idx = (hint + i) % capacity_;
    auto& slot = slots_[idx];
    if (slot.in_use.load(std::memory_order_relaxed)) continue;
    bool expected = false;
    if (slot.in_use.compare_exchange_strong(expected, true,
                                            std::memory_order_acq_rel)) {
      slot.priority.store(priority, std::memory_order_release);
      slot.wounded.store(false, std::memory_order_release);
      return static_cast<std::uint32_t>(idx);
    }
  }
  throw std::runtime_error("contention registry exhausted");
}

void ContentionRegistry::release(std::uint32_t slot) noexcept {
  slots_[slot].wounded.store(false, std::memory_order_relaxed);
  slots_[slot].in_use.store(false, std::memory_order_release);
}

}  // namespace grain
