#include "grain/storage/table.hpp"

#include "grain/txn/errors.hpp"

namespace grain {

Table::Table(std::uint32_t id, TableSchema schema)
    : id_(id), schema_(std::move(schema)), format_(schema_) {}

Row* Table::find(const std::string& key) const {
  const auto it = index_.find(key);
  return it == index_.end() ? nullptr : it->second.get();
}

std::pair<Row*, bool> Table::emplace(const std::string& key, RowState state,
                                     std::uint64_t owner, bool locked) {
  if (auto* existing = find(key)) return {existing, false};
  auto row = std::make_unique<Row>(key, format_, schema_.policy, state, owner,
                                   locked);
  auto* raw = row.get();
  const auto [it, inserted] = index_.emplace(key, std::move(row));
  if (!inserted) return {it->second.get(), false};
  return {raw, true};
}

void Table::load_insert(const std::string& key, const RowBuffer& row) {
  auto [r, inserted] = emplace(key, RowState::live, 0, false);
  if (!inserted) {
    throw DuplicateKey(schema_.name + ": duplicate key on load");
  }
  r->store_words(0, row.words());
}

std::size_t Table::live_count() const {
  std::size_t n = 0;
  for_each_row([&](const Row& r) {
    if (r.state() == RowState::live) ++n;
  });
  return n;
}

RowBuffer Table::read_quiesced(const Row& row) const {
  RowBuffer out(format_);
  row.load_words(0, out.words());
  return out;
}

void Table::write_quiesced(Row& row, const RowBuffer& values, ColumnSet cols) {
  auto current = read_quiesced(row);
  current.copy_columns(values, cols);
  row.store_words(0, current.words());
}

}  // namespace grain
