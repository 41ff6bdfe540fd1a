#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>

#include <oneapi/tbb/concurrent_map.h>

#include "grain/storage/row.hpp"
#include "grain/storage/row_buffer.hpp"
#include "grain/storage/schema.hpp"

namespace grain {

/// A table (or a secondary index, which is a table whose only column holds
/// the base-table primary key). Rows live in an ordered concurrent map keyed
/// by encoded primary key; rows are never removed, so Row pointers are stable
/// for the table's lifetime. Aborted inserts leave VACANT rows behind that a
/// later insert reclaims.
class Table {
 public:
  Table(std::uint32_t id, TableSchema schema);

  Table(const Table&) = delete;
  Table& operator=(const Table&) = delete;

  [[nodiscard]] std::uint32_t id() const noexcept { return id_; }
  [[nodiscard]] const std::string& name() const noexcept {
    return schema_.name;
  }
  [[nodiscard]] const TableSchema& schema() const noexcept { return schema_; }
  [[nodiscard]] const RowFormat& format() const noexcept { return format_; }
  [[nodiscard]] PolicyId policy() const noexcept { return schema_.policy; }
  [[nodiscard]] std::size_t num_groups() const noexcept {
    return format_.num_groups();
  }

  /// Row for `key` in any state, or nullptr.
  [[nodiscard]] Row* find(const std::string& key) const;

  /// Inserts a new row in `state`; returns the existing row and false if the
  /// key is already present (in any state).
  std::pair<Row*, bool> emplace(const std::string& key, RowState state,
                                std::uint64_t owner, bool locked);

  /// Non-transactional bulk load; the row becomes LIVE with unlocked,
  /// zero-version words. Not safe against concurrent transactions.
  /// Throws DuplicateKey.
  void load_insert(const std::string& key, const RowBuffer& row);

  /// Calls fn(Row&) for every row with key in [lo, hi) in ascending key
  /// order, any state, until fn returns false. An empty `hi` means no upper
  /// bound.
  template <class Fn>
  void for_each_in_range(const std::string& lo, const std::string& hi,
                         Fn&& fn) const {
    for (auto it = index_.lower_bound(lo); it != index_.end(); ++it) {
      if (!hi.empty() && !(it->first < hi)) break;
      if (!fn(*it->second)) break;
    }
  }

  template <class Fn>
  void for_each_row(Fn&& fn) const {
    for (auto it = index_.begin(); it != index_.end(); ++it) fn(*it->second);
  }

  /// Number of LIVE rows. Walks the whole table.
  [[nodiscard]] std::size_t live_count() const;

  /// Committed contents of a LIVE row, read without synchronization; only
  /// valid on a quiesced engine.
  [[nodiscard]] RowBuffer read_quiesced(const Row& row) const;
  /// Overwrites columns of a row without synchronization (loaders, tests).
  void write_quiesced(Row& row, const RowBuffer& values, ColumnSet cols);

 private:
  std::uint32_t id_;
  TableSchema schema_;
  RowFormat format_;
  tbb::concurrent_map<std::string, std::unique_ptr<Row>> index_;
};

}  // namespace grain
