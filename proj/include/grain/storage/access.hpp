#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "grain/storage/column_set.hpp"
#include "grain/storage/row_buffer.hpp"
#include "grain/storage/table.hpp"
#include "grain/txn/tx_context.hpp"

namespace grain {

/// Transactional point read. Reads and tracks every group that intersects
/// `cols`; the returned buffer holds those groups' columns (other columns
/// are zero). A missing, pending or vacant row returns nullopt and is
/// registered for absent-key validation.
[[nodiscard]] std::optional<RowBuffer> get(TxContext& ctx, Table& table,
                                           const std::string& key,
                                           ColumnSet cols);

/// Stages the columns `cols` of `values` as writes. Only the groups those
/// columns belong to are touched. Throws KeyAbsent if the row is not
/// visible to this transaction.
void update(TxContext& ctx, Table& table, const std::string& key,
            const RowBuffer& values, ColumnSet cols);

/// Inserts a full row, visible to others only once the transaction commits.
/// Throws DuplicateKey.
void insert(TxContext& ctx, Table& table, const std::string& key,
            const RowBuffer& row);

/// Up to `limit` (0 = unlimited) committed rows with keys in [lo, hi), in
/// key order. The key list is re-checked at commit.
[[nodiscard]] std::vector<std::pair<std::string, RowBuffer>> range_scan(
    TxContext& ctx, Table& table, const std::string& lo, const std::string& hi,
    ScanDirection direction, std::size_t limit, ColumnSet cols);

inline std::vector<std::pair<std::string, RowBuffer>> range_scan(
    TxContext& ctx, Table& table, const std::string& lo, const std::string& hi,
    ScanDirection direction = ScanDirection::ascending, std::size_t limit = 0) {
  return range_scan(ctx, table, lo, hi, direction, limit,
                    table.format().all_columns());
}

/// Non-transactional bulk insert; see Table::load_insert.
inline void load_insert(Table& table, const std::string& key,
                        const RowBuffer& row) {
  table.load_insert(key, row);
}

}  // namespace grain
