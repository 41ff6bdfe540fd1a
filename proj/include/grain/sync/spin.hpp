#pragma once

#include <cstdint>
#include <thread>

namespace grain {

inline void cpu_relax() noexcept {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_ia32_pause();
#elif defined(__aarch64__)
  asm volatile("yield" ::: "memory");
#endif
}

// Busy-waits briefly, then falls back to yielding so that a preempted lock
// holder on an oversubscribed machine can make progress.
class SpinWait {
 public:
  void pause() noexcept {
    if (count_ < kSpinsBeforeYield) {
      ++count_;
      cpu_relax();
    } else {
      std::this_thread::yield();
    }
  }

  void reset() noexcept { count_ = 0; }

 private:
  static constexpr std::uint32_t kSpinsBeforeYield = 64;
  std::uint32_t count_ = 0;
};

}  // namespace grain
