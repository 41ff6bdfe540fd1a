#include "grain/txn/runner.hpp"

#include <algorithm>
#include <thread>

namespace grain {

Backoff::Backoff(BackoffConfig config, std::uint64_t seed)
    : config_(config), rng_(seed) {}

std::chrono::nanoseconds Backoff::delay(std::uint64_t attempt) {
  const auto base = static_cast<std::uint64_t>(config_.base.count());
  const auto cap = static_cast<std::uint64_t>(config_.cap.count());
  const auto shift = std::min<std::uint64_t>(attempt, 40);
  const auto ceiling = std::min(cap, base << shift);
  std::uniform_int_distribution<std::uint64_t> dist(0, ceiling);
  return std::chrono::nanoseconds(dist(rng_));
}

void Backoff::wait(std::uint64_t attempt) {
  const auto d = delay(attempt);
  const auto until = std::chrono::steady_clock::now() + d;
  while (std::chrono::steady_clock::now() < until) std::this_thread::yield();
}

std::string to_string(const CommitOutcome& o) {
  if (o.is_committed()) {
    return o.commit_ts() ? "committed(ts=" + std::to_string(*o.commit_ts()) + ")"
                         : "committed";
  }
  return "aborted(" + std::string(to_string(o.reason())) + ")";
}

}  // namespace grain
