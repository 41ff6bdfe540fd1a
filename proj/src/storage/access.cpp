#include "grain/storage/access.hpp"

#include "grain/txn/engine.hpp"

namespace grain {

namespace {

// Row visible to `ctx`: LIVE, or pending and inserted by `ctx` itself.
Row* visible_row(TxContext& ctx, Table& table, const std::string& key) {
  auto* row = table.find(key);
  if (row == nullptr) return nullptr;
  switch (row->state()) {
    case RowState::live:
      return row;
    case RowState::pending:
      return row->pending_owner() == ctx.tx_id() ? row : nullptr;
    case RowState::vacant:
      return nullptr;
  }
  return nullptr;
}

void read_groups(TxContext& ctx, Table& table, Row& row, ColumnSet cols,
                 RowBuffer& out) {
  const auto& format = table.format();
  for (const auto g : format.groups_touching(cols)) {
    ctx.engine().track_read(ctx,
                            GroupRef{&table, &row, static_cast<std::uint32_t>(g)},
                            cols, out.group_words(g));
  }
}

}  // namespace

std::optional<RowBuffer> get(TxContext& ctx, Table& table,
                             const std::string& key, ColumnSet cols) {
  auto* row = visible_row(ctx, table, key);
  if (row == nullptr) {
    ctx.engine().note_absent(ctx, table, key);
    return std::nullopt;
  }
  RowBuffer out(table.format());
  read_groups(ctx, table, *row, cols, out);
  return out;
}

void update(TxContext& ctx, Table& table, const std::string& key,
            const RowBuffer& values, ColumnSet cols) {
  auto* row = visible_row(ctx, table, key);
  if (row == nullptr) {
    throw KeyAbsent(table.name() + ": update of absent key");
  }
  const auto& format = table.format();
  for (const auto g : format.groups_touching(cols)) {
    ctx.engine().stage_write(
        ctx, GroupRef{&table, row, static_cast<std::uint32_t>(g)},
        cols & format.group_columns(g), values.group_words(g));
  }
}

void insert(TxContext& ctx, Table& table, const std::string& key,
            const RowBuffer& row) {
  ctx.engine().stage_insert(ctx, table, key, row);
}

std::vector<std::pair<std::string, RowBuffer>> range_scan(
    TxContext& ctx, Table& table, const std::string& lo, const std::string& hi,
    ScanDirection direction, std::size_t limit, ColumnSet cols) {
  const auto rows = collect_live_rows(table, lo, hi, direction, limit);
  std::vector<std::pair<std::string, RowBuffer>> out;
  out.reserve(rows.size());
  ScanRecord record{&table, lo, hi, direction, limit, {}};
  record.keys.reserve(rows.size());
  for (auto* row : rows) {
    RowBuffer values(table.format());
    read_groups(ctx, table, *row, cols, values);
    record.keys.push_back(row->key());
    out.emplace_back(row->key(), std::move(values));
  }
  ctx.engine().note_scan(ctx, std::move(record));
  return out;
}

}  // namespace grain
