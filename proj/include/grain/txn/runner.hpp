#pragma once

#include <array>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <optional>
#include <random>

#include "grain/txn/engine.hpp"
#include "grain/txn/errors.hpp"

namespace grain {

/// Randomized exponential backoff with full jitter: attempt n waits a
/// uniform time in [0, min(cap, base * 2^n)].
class Backoff {
 public:
  explicit Backoff(BackoffConfig config, std::uint64_t seed = 0);

  [[nodiscard]] std::chrono::nanoseconds delay(std::uint64_t attempt);
  void wait(std::uint64_t attempt);

 private:
  BackoffConfig config_;
  std::mt19937_64 rng_;
};

/// Per-worker attempt accounting.
struct AttemptTally {
  std::uint64_t commits = 0;
  std::array<std::uint64_t, kAbortReasonCount> aborts{};

  [[nodiscard]] std::uint64_t total_aborts() const noexcept {
    std::uint64_t n = 0;
    for (const auto a : aborts) n += a;
    return n;
  }
  [[nodiscard]] std::uint64_t attempts() const noexcept {
    return commits + total_aborts();
  }
  void record(const CommitOutcome& o) noexcept {
    if (o.is_committed()) {
      ++commits;
    } else {
      ++aborts[static_cast<std::size_t>(o.reason())];
    }
  }
  AttemptTally& operator+=(const AttemptTally& o) noexcept {
    commits += o.commits;
    for (std::size_t i = 0; i < aborts.size(); ++i) aborts[i] += o.aborts[i];
    return *this;
  }
};

struct RunOptions {
  /// Priority to reuse (e.g. a caller-managed logical transaction).
  std::optional<std::uint64_t> priority;
  /// Give up after this many retries; unbounded by default.
  std::optional<std::uint64_t> max_retries;
  /// Checked after every aborted attempt.
  const std::atomic<bool>* stop = nullptr;
  AttemptTally* tally = nullptr;
  bool backoff = true;
};

struct TxnResult {
  CommitOutcome outcome;
  std::uint64_t retries = 0;
};

/// Runs `body(ctx)` and commits, retrying aborted attempts with the same
/// contention-manager priority until one commits. USER_ABORT is returned
/// without retry. Exceptions other than TxAbort abort the attempt and
/// propagate.
template <class Body>
TxnResult run_transaction(Engine& engine, Body&& body,
                          const RunOptions& options = {}) {
  auto ctx = engine.begin(options.priority);
  std::optional<Backoff> backoff;
  for (std::uint64_t attempt = 0;; ++attempt) {
    CommitOutcome outcome;
    try {
      body(ctx);
      outcome = engine.commit(ctx);
    } catch (const TxAbort& a) {
      engine.abort(ctx, a.reason());
      outcome = CommitOutcome::aborted(a.reason());
    } catch (...) {
      engine.abort(ctx, AbortReason::user_abort);
      throw;
    }
    if (options.tally != nullptr) options.tally->record(outcome);
    if (outcome.is_committed() ||
        outcome.reason() == AbortReason::user_abort) {
      return {outcome, attempt};
    }
    if ((options.max_retries && attempt >= *options.max_retries) ||
        (options.stop != nullptr &&
         options.stop->load(std::memory_order_relaxed))) {
      return {outcome, attempt};
    }
    if (options.backoff) {
      if (!backoff) backoff.emplace(engine.config().backoff, ctx.tx_id());
      backoff->wait(attempt);
    }
    engine.restart(ctx);
  }
}

}  // namespace grain
