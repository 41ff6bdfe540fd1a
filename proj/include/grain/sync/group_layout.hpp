#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace grain {

/// Partition of a row's columns into independently versioned groups. Each
/// group gets its own synchronization word in every row.
class GroupLayout {
 public:
  /// Throws std::invalid_argument unless `groups` are non-empty, disjoint,
  /// and cover [0, num_columns) exactly once.
  GroupLayout(std::size_t num_columns,
              std::vector<std::vector<std::size_t>> groups);

  /// One group holding every column.
  static GroupLayout coarse(std::size_t num_columns);
  /// Even-numbered columns in group 0, odd-numbered in group 1.
  static GroupLayout even_odd(std::size_t num_columns);

  [[nodiscard]] std::size_t num_columns() const noexcept {
    return group_of_.size();
  }
  [[nodiscard]] std::size_t num_groups() const noexcept {
    return groups_.size();
  }
  [[nodiscard]] const std::vector<std::size_t>& columns(
      std::size_t group) const {
    return groups_.at(group);
  }
  [[nodiscard]] std::size_t group_of(std::size_t column) const {
    return group_of_.at(column);
  }
  [[nodiscard]] const std::vector<std::vector<std::size_t>>& groups()
      const noexcept {
    return groups_;
  }

 private:
  std::vector<std::vector<std::size_t>> groups_;
  std::vector<std::size_t> group_of_;
};

}  // namespace grain
