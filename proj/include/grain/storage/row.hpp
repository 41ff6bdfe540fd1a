#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>

#include "grain/storage/column_set.hpp"
#include "grain/storage/schema.hpp"
#include "grain/sync/occ_version.hpp"
#include "grain/sync/rw_lock_word.hpp"
#include "grain/sync/tictoc_stamp.hpp"
#include "grain/txn/policy.hpp"

namespace grain {

/// SwissTM-style word pair: the version word doubles as the short commit
/// lock, `owner` is the eager write ownership (contention-registry slot + 1,
/// or 0 when unowned).
struct SwissWord {
  OccVersion version;
  std::atomic<std::uint64_t> owner{0};

  constexpr SwissWord() noexcept = default;
  explicit constexpr SwissWord(std::uint64_t raw) noexcept : version{raw} {}
};

/// Synchronization word(s) of one record group. Which member is live is fixed
/// by the owning table's policy.
union alignas(16) GroupSync {
  OccVersion occ;
  TicTocStamp tictoc;
  RwLockWord rw;
  SwissWord swiss;

  GroupSync() noexcept : occ{} {}
  ~GroupSync() {}
  GroupSync(const GroupSync&) = delete;
  GroupSync& operator=(const GroupSync&) = delete;

  /// (Re)starts the lifetime of the member used by `policy`; `locked` creates
  /// the word already held exclusively.
  void init(PolicyId policy, bool locked) noexcept;
  /// True if the word is exclusively held or has readers or an owner.
  [[nodiscard]] bool held(PolicyId policy) const noexcept;
};
static_assert(sizeof(GroupSync) == 16);

enum class RowState : std::uint8_t { vacant, pending, live };

/// A row: its key, visibility state, one GroupSync per group, and the column
/// words. Rows are never freed while their table lives.
class Row {
 public:
  Row(std::string key, const RowFormat& format, PolicyId policy,
      RowState state, std::uint64_t owner, bool locked);

  Row(const Row&) = delete;
  Row& operator=(const Row&) = delete;

  [[nodiscard]] const std::string& key() const noexcept { return key_; }

  [[nodiscard]] RowState state() const noexcept {
    return state_.load(std::memory_order_acquire);
  }
  void set_state(RowState s) noexcept {
    state_.store(s, std::memory_order_release);
  }
  /// VACANT -> PENDING on behalf of `owner`.
  [[nodiscard]] bool try_claim(std::uint64_t owner) noexcept;
  /// Transaction attempt that created the pending row.
  [[nodiscard]] std::uint64_t pending_owner() const noexcept {
    return owner_.load(std::memory_order_acquire);
  }

  [[nodiscard]] GroupSync& sync(std::size_t g) noexcept { return sync_[g]; }
  [[nodiscard]] const GroupSync& sync(std::size_t g) const noexcept {
    return sync_[g];
  }

  /// Relaxed word-by-word copy; callers validate with the group's word.
  void load_words(std::size_t begin, std::span<std::uint64_t> out) const noexcept;
  void store_words(std::size_t begin,
                   std::span<const std::uint64_t> in) noexcept;

 private:
  std::string key_;
  std::atomic<RowState> state_;
  std::atomic<std::uint64_t> owner_;
  std::unique_ptr<GroupSync[]> sync_;
  std::unique_ptr<std::atomic<std::uint64_t>[]> data_;
};

/// Copies the bytes of `cols` (all in group `g`) between two group-local word
/// arrays of that group.
void merge_group_columns(const RowFormat& format, std::size_t g, ColumnSet cols,
                         std::span<const std::uint64_t> src,
                         std::span<std::uint64_t> dst);

}  // namespace grain
