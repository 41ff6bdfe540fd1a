#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "grain/storage/schema.hpp"
#include "grain/storage/table.hpp"
#include "grain/txn/contention.hpp"
#include "grain/txn/errors.hpp"
#include "grain/txn/tx_context.hpp"

namespace grain {

struct BackoffConfig {
  std::chrono::nanoseconds base{1'000};
  std::chrono::nanoseconds cap{1'000'000};
};

struct EngineConfig {
  /// Blamed aborts that switch an adaptive word to pessimistic mode.
  std::uint32_t adaptive_pess_threshold = 3;
  /// Consecutive clean accesses that switch it back.
  std::uint32_t adaptive_opt_streak = 128;
  BackoffConfig backoff;
  /// Pause iterations a SwissTM requester waits for a wounded owner before
  /// giving up with LOCK_BUSY.
  std::uint32_t swiss_wait_limit = 1U << 20;
  /// Stamp every commit with a global sequence number (tests only).
  bool record_commit_order = false;
  std::size_t max_contexts = 4096;
};

struct LockSweep {
  std::size_t groups_checked = 0;
  std::size_t held_groups = 0;
  std::size_t pending_rows = 0;

  [[nodiscard]] bool clean() const noexcept {
    return held_groups == 0 && pending_rows == 0;
  }
};

/// Transaction engine: owns the tables and runs the unified commit protocol.
///
/// Every table is bound to one PolicyId and a transaction may touch tables
/// of several policies. Each record group in the read and write sets is
/// validated and installed by the rules of its own table's policy, so a
/// mixed transaction commits only if every participating policy accepts it.
///
/// Commit phases:
///   1. lock buffered writes, no-wait, in (table id, key, group) order
///   2. compute the TicToc commit timestamp (if any TicToc entries)
///   3. validate reads
///   4. re-run scans and absent-key lookups
///   5. install writes, release every lock and read grant
class Engine {
 public:
  explicit Engine(EngineConfig config = {});
  ~Engine();

  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  /// Throws std::invalid_argument for a duplicate name or invalid schema.
  Table& create_table(TableSchema schema);
  [[nodiscard]] Table* table(std::string_view name) const;
  [[nodiscard]] std::vector<Table*> tables() const;

  /// Starts a transaction. Without an explicit priority one is drawn from
  /// the engine-wide counter (smaller = older).
  [[nodiscard]] TxContext begin(
      std::optional<std::uint64_t> priority = std::nullopt);
  /// Readies an inactive context for another attempt of the same logical
  /// transaction: new tx id, same priority.
  void restart(TxContext& ctx);

  /// Reads group `ref` into `out` (group-local words) and records the
  /// observation. If the group was written by this transaction and the
  /// requested columns are all pending, the pending values are returned and
  /// nothing is tracked. Throws TxAbort.
  void track_read(TxContext& ctx, const GroupRef& ref, ColumnSet wanted,
                  std::span<std::uint64_t> out);

  /// Stages the columns `cols` of `values` (group-local words) as a write of
  /// group `ref`. Eager policies acquire their lock here. Throws TxAbort.
  void stage_write(TxContext& ctx, const GroupRef& ref, ColumnSet cols,
                   std::span<const std::uint64_t> values);

  /// Creates a pending row for `key` with all groups held by `ctx`. Throws
  /// DuplicateKey if a committed row exists and the transaction is otherwise
  /// consistent, TxAbort otherwise.
  void stage_insert(TxContext& ctx, Table& table, const std::string& key,
                    const RowBuffer& row);

  void note_scan(TxContext& ctx, ScanRecord record);
  void note_absent(TxContext& ctx, Table& table, std::string key);

  /// max(observed wts over TicToc reads, current rts + 1 over TicToc writes);
  /// 0 when the transaction has no TicToc entries.
  [[nodiscard]] std::uint64_t compute_commit_ts(const TxContext& ctx) const;

  /// Runs the commit protocol. On failure everything is released and the
  /// abort reason returned; the context is inactive afterwards either way.
  CommitOutcome commit(TxContext& ctx);

  /// Releases every lock and grant without publishing anything. Idempotent.
  void abort(TxContext& ctx, AbortReason reason);

  /// Counts held synchronization words and pending rows across all tables.
  /// Only meaningful when no transaction is running.
  [[nodiscard]] LockSweep sweep_locks() const;

  [[nodiscard]] const EngineConfig& config() const noexcept { return config_; }
  [[nodiscard]] ContentionRegistry& registry() noexcept { return registry_; }

 private:
  friend class TxContext;

  void check_wounded(const TxContext& ctx) const;
  void acquire_write_grant(TxContext& ctx, const GroupRef& ref);
  void acquire_swiss_owner(TxContext& ctx, const GroupRef& ref);
  void read_untracked(const GroupRef& ref, std::span<std::uint64_t> out) const;
  bool lock_for_commit(TxContext& ctx, WriteEntry& w);
  bool validate_reads_now(TxContext& ctx) const;
  bool absents_hold(const TxContext& ctx) const;
  bool scans_hold(const TxContext& ctx) const;
  void release_all(TxContext& ctx, bool committed, std::uint64_t commit_ts);
  void finish(TxContext& ctx) noexcept;
  CommitOutcome fail(TxContext& ctx, AbortReason reason,
                     const ReadEntry* blamed);

  EngineConfig config_;
  ContentionRegistry registry_;
  mutable std::mutex tables_mu_;
  std::vector<std::unique_ptr<Table>> tables_;
  std::atomic<std::uint64_t> next_tx_id_{1};
  std::atomic<std::uint64_t> next_priority_{1};
  std::atomic<std::uint64_t> commit_seq_{0};
};

/// LIVE rows with keys in [lo, hi) in the requested order, at most `limit`
/// (0 = unlimited). Pending rows, including the caller's own, are skipped.
[[nodiscard]] std::vector<Row*> collect_live_rows(
    const Table& table, const std::string& lo, const std::string& hi,
    ScanDirection direction, std::size_t limit);

}  // namespace grain
