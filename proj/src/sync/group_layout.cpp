#include "grain/sync/group_layout.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace grain {

namespace {
constexpr auto kUnassigned = std::numeric_limits<std::size_t>::max();
}

GroupLayout::GroupLayout(std::size_t num_columns,
                         std::vector<std::vector<std::size_t>> groups)
    : groups_(std::move(groups)), group_of_(num_columns, kUnassigned) {
  if (num_columns == 0) {
    throw std::invalid_argument("group layout needs at least one column");
  }
  if (groups_.empty()) {
    throw std::invalid_argument("group layout needs at least one group");
  }
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    if (groups_[g].empty()) {
      throw std::invalid_argument("group " + std::to_string(g) + " is empty");
    }
    for (const auto col : groups_[g]) {
      if (col >= num_columns) {
        throw std::invalid_argument("column " + std::to_string(col) +
                                    " out of range");
      }
      if (group_of_[col] != kUnassigned) {
        throw std::invalid_argument("column " + std::to_string(col) +
                                    " assigned to two groups");
      }
      group_of_[col] = g;
    }
  }
  for (std::size_t col = 0; col < num_columns; ++col) {
    if (group_of_[col] == kUnassigned) {
      throw std::invalid_argument("column " + std::to_string(col) +
                                  " not covered by any group");
    }
  }
}

GroupLayout GroupLayout::coarse(std::size_t num_columns) {
  std::vector<std::size_t> all;
  for (std::size_t c = 0; c < num_columns; ++c) all.push_back(c);
  return GroupLayout(num_columns, {std::move(all)});
}

GroupLayout GroupLayout::even_odd(std::size_t num_columns) {
  std::vector<std::size_t> even, odd;
  for (std::size_t c = 0; c < num_columns; ++c) {
    (c % 2 == 0 ? even : odd).push_back(c);
  }
  if (odd.empty()) return GroupLayout(num_columns, {std::move(even)});
  return GroupLayout(num_columns, {std::move(even), std::move(odd)});
}

}  // namespace grain
