#include "grain/storage/schema.hpp"

#include <cstring>
#include <stdexcept>

#include "grain/storage/row_buffer.hpp"

namespace grain {

RowFormat::RowFormat(const TableSchema& schema) {
  const auto n = schema.columns.size();
  if (n == 0) throw std::invalid_argument(schema.name + ": no columns");
  if (n > kMaxColumns) {
    throw std::invalid_argument(schema.name + ": too many columns");
  }
  if (schema.layout.num_columns() != n) {
    throw std::invalid_argument(schema.name +
                                ": group layout does not match column count");
  }
  columns_.resize(n);
  for (std::size_t g = 0; g < schema.layout.num_groups(); ++g) {
    Group group{words_, 0, {}};
    std::size_t bytes = 0;
    for (const auto col : schema.layout.columns(g)) {
      const auto width = schema.columns[col].width;
      if (width == 0) {
        throw std::invalid_argument(schema.name + ": column " +
                                    schema.columns[col].name +
                                    " has zero width");
      }
      columns_[col] = Column{g, words_ * 8 + bytes, width};
      bytes += width;
      group.columns.insert(col);
    }
    group.word_count = (bytes + 7) / 8;
    words_ += group.word_count;
    groups_.push_back(group);
  }
}

std::vector<std::size_t> RowFormat::groups_touching(ColumnSet cols) const {
  std::vector<std::size_t> out;
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    if (groups_[g].columns.intersects(cols)) out.push_back(g);
  }
  return out;
}

void merge_columns(const RowFormat& format, ColumnSet cols,
                   std::span<const std::uint64_t> src,
                   std::span<std::uint64_t> dst) {
  const auto* s = reinterpret_cast<const std::byte*>(src.data());
  auto* d = reinterpret_cast<std::byte*>(dst.data());
  cols.for_each([&](std::size_t c) {
    std::memcpy(d + format.byte_offset(c), s + format.byte_offset(c),
                format.width(c));
  });
}

}  // namespace grain
