#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "grain/storage/column_set.hpp"
#include "grain/txn/policy.hpp"

namespace grain {

class Engine;
class Row;
class Table;

/// One record group: a row of a table plus a group index.
struct GroupRef {
  Table* table = nullptr;
  Row* row = nullptr;
  std::uint32_t group = 0;

  friend bool operator==(const GroupRef&, const GroupRef&) = default;
};

struct GroupRefHash {
  std::size_t operator()(const GroupRef& r) const noexcept {
    return std::hash<const void*>{}(r.row) * 31 + r.group;
  }
};

/// What a read recorded for commit-time validation.
enum class Observation : std::uint8_t {
  version,           // OCC / SwissTM counter
  stamp,             // TicToc (wts, rts)
  read_grant,        // 2PL or pessimistic-adaptive read lock held
  adaptive_version,  // optimistic-adaptive 23-bit version
};

struct ReadEntry {
  GroupRef ref;
  PolicyId policy = PolicyId::occ;
  Observation kind = Observation::version;
  std::uint64_t version = 0;  // counter, wts, or adaptive version
  std::uint64_t rts = 0;
  bool grant_upgraded = false;  // read grant converted to the write grant
};

/// Which exclusive holds a write entry currently owns.
enum HoldBits : std::uint8_t {
  kHoldWord = 1,   // lock bit / writer grant on the group word
  kHoldOwner = 2,  // SwissTM eager ownership
};

struct WriteEntry {
  GroupRef ref;
  PolicyId policy = PolicyId::occ;
  std::vector<std::uint64_t> pending;  // group-local words
  ColumnSet dirty;
  std::uint8_t held = 0;
  bool insert = false;
};

enum class ScanDirection : std::uint8_t { ascending, descending };

struct ScanRecord {
  Table* table = nullptr;
  std::string lo;
  std::string hi;
  ScanDirection direction = ScanDirection::ascending;
  std::size_t limit = 0;
  std::vector<std::string> keys;  // returned keys, in scan order
};

struct AbsentKey {
  Table* table = nullptr;
  std::string key;
};

/// Per-attempt transaction state. Used by one thread at a time; only the
/// wounded flag (kept in the engine's contention registry) is written by
/// other threads. Destroying an active context aborts it.
class TxContext {
 public:
  TxContext(TxContext&& other) noexcept;
  TxContext& operator=(TxContext&&) = delete;
  TxContext(const TxContext&) = delete;
  TxContext& operator=(const TxContext&) = delete;
  ~TxContext();

  [[nodiscard]] std::uint64_t tx_id() const noexcept { return tx_id_; }
  [[nodiscard]] std::uint64_t priority() const noexcept { return priority_; }
  [[nodiscard]] bool active() const noexcept { return active_; }
  [[nodiscard]] bool wounded() const noexcept;
  [[nodiscard]] Engine& engine() const noexcept { return *engine_; }
  [[nodiscard]] std::uint32_t slot() const noexcept { return slot_; }

  [[nodiscard]] const std::vector<ReadEntry>& read_set() const noexcept {
    return reads_;
  }
  [[nodiscard]] const std::vector<WriteEntry>& write_set() const noexcept {
    return writes_;
  }
  [[nodiscard]] const std::vector<ScanRecord>& scan_set() const noexcept {
    return scans_;
  }
  [[nodiscard]] const std::vector<AbsentKey>& absent_set() const noexcept {
    return absents_;
  }
  /// Commit timestamp of the last commit attempt that touched TicToc entries.
  [[nodiscard]] std::optional<std::uint64_t> commit_ts() const noexcept {
    return commit_ts_;
  }

  [[nodiscard]] ReadEntry* find_read(const GroupRef& ref) noexcept;
  [[nodiscard]] WriteEntry* find_write(const GroupRef& ref) noexcept;

 private:
  friend class Engine;

  TxContext(Engine& engine, std::uint64_t tx_id, std::uint64_t priority,
            std::uint32_t slot) noexcept;

  ReadEntry& add_read(const ReadEntry& e);
  WriteEntry& add_write(WriteEntry e);
  void clear() noexcept;

  Engine* engine_;
  std::uint64_t tx_id_;
  std::uint64_t priority_;
  std::uint32_t slot_;
  bool active_ = true;
  bool owns_slot_ = true;

  std::vector<ReadEntry> reads_;
  std::vector<WriteEntry> writes_;
  std::vector<ScanRecord> scans_;
  std::vector<AbsentKey> absents_;
  std::unordered_map<GroupRef, std::uint32_t, GroupRefHash> read_index_;
  std::unordered_map<GroupRef, std::uint32_t, GroupRefHash> write_index_;
  std::optional<std::uint64_t> commit_ts_;
};

}  // namespace grain
