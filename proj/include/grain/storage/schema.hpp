#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "grain/storage/column_set.hpp"
#include "grain/sync/group_layout.hpp"
#include "grain/txn/policy.hpp"

namespace grain {

struct ColumnSpec {
  std::string name;
  std::size_t width = 8;  // bytes
};

struct TableSchema {
  std::string name;
  std::vector<ColumnSpec> columns;
  GroupLayout layout;
  PolicyId policy = PolicyId::occ;
};

/// Physical placement of a schema's columns. Row storage is a sequence of
/// 64-bit words; each group occupies its own word-aligned segment so that
/// writers holding different group words never touch the same word.
class RowFormat {
 public:
  /// Throws std::invalid_argument for an empty schema, more than
  /// kMaxColumns columns, a zero-width column, or a layout that does not
  /// match the column count.
  explicit RowFormat(const TableSchema& schema);

  [[nodiscard]] std::size_t num_columns() const noexcept {
    return columns_.size();
  }
  [[nodiscard]] std::size_t num_groups() const noexcept {
    return groups_.size();
  }
  [[nodiscard]] std::size_t total_words() const noexcept { return words_; }

  [[nodiscard]] std::size_t group_of(std::size_t col) const {
    return columns_.at(col).group;
  }
  [[nodiscard]] std::size_t byte_offset(std::size_t col) const {
    return columns_.at(col).offset;
  }
  [[nodiscard]] std::size_t width(std::size_t col) const {
    return columns_.at(col).width;
  }
  [[nodiscard]] std::size_t group_word_begin(std::size_t g) const {
    return groups_.at(g).word_begin;
  }
  [[nodiscard]] std::size_t group_word_count(std::size_t g) const {
    return groups_.at(g).word_count;
  }
  [[nodiscard]] ColumnSet group_columns(std::size_t g) const {
    return groups_.at(g).columns;
  }
  [[nodiscard]] ColumnSet all_columns() const noexcept {
    return ColumnSet::all(columns_.size());
  }
  /// Groups that contain at least one column of `cols`, ascending.
  [[nodiscard]] std::vector<std::size_t> groups_touching(ColumnSet cols) const;

 private:
  struct Column {
    std::size_t group;
    std::size_t offset;
    std::size_t width;
  };
  struct Group {
    std::size_t word_begin;
    std::size_t word_count;
    ColumnSet columns;
  };

  std::vector<Column> columns_;
  std::vector<Group> groups_;
  std::size_t words_ = 0;
};

}  // namespace grain
