#include "grain/workload/ycsb.hpp"

#include <cstring>
#include <stdexcept>

#include "grain/storage/access.hpp"
#include "grain/storage/key.hpp"

namespace grain::ycsb {

namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

void validate(const Config& c) {
  if (c.num_keys == 0) throw std::invalid_argument("ycsb: num_keys must be >= 1");
  if (c.ops_per_txn == 0) throw std::invalid_argument("ycsb: ops_per_txn must be >= 1");
  if (!(c.write_fraction >= 0.0 && c.write_fraction <= 1.0)) {
    throw std::invalid_argument("ycsb: write_fraction must be in [0, 1]");
  }
  if (!(c.theta >= 0.0 && c.theta < 1.0)) {
    throw std::invalid_argument("ycsb: theta must be in [0, 1)");
  }
}

GroupLayout make_layout(Layout layout) {
  return layout == Layout::coarse ? GroupLayout::coarse(kColumns)
                                  : GroupLayout::even_odd(kColumns);
}

std::string key_of(std::uint64_t k) { return KeyBuilder{}.u64(k).build(); }

std::array<char, kColumnWidth> column_value(std::uint64_t key,
                                            std::size_t column,
                                            std::uint64_t tag,
                                            std::uint64_t seed) {
  const auto h1 = mix(seed ^ mix(key ^ mix(column ^ mix(tag))));
  const auto h2 = mix(h1);
  std::array<char, kColumnWidth> out{};
  // printable, never NUL
  for (std::size_t i = 0; i < kColumnWidth; ++i) {
    const auto bits = i < 8 ? (h1 >> (8 * i)) : (h2 >> (8 * (i - 8)));
    out[i] = static_cast<char>('a' + (bits & 0xFF) % 26);
  }
  return out;
}

Table& load(Engine& engine, const Config& config) {
  validate(config);
  std::vector<ColumnSpec> columns;
  for (std::size_t c = 0; c < kColumns; ++c) {
    columns.push_back({"f" + std::to_string(c), kColumnWidth});
  }
  auto& table = engine.create_table(TableSchema{
      kTableName, std::move(columns), make_layout(config.layout), config.policy});
  RowBuffer row(table.format());
  for (std::uint64_t k = 0; k < config.num_keys; ++k) {
    for (std::size_t c = 0; c < kColumns; ++c) {
      const auto v = column_value(k, c, 0, config.seed);
      row.set_bytes(c, std::as_bytes(std::span(v)));
    }
    table.load_insert(key_of(k), row);
  }
  return table;
}

Generator::Generator(const Config& config, const ZipfianParams& params,
                     std::uint64_t stream)
    : config_(config),
      stream_(stream),
      zipf_(params, mix(config.seed ^ mix(stream))),
      rng_(mix(config.seed + 0x5151 + stream)) {}

std::uint64_t Generator::pick_key() {
  const auto rank = zipf_.next();
  if (!config_.scramble) return rank - 1;
  return mix(rank) % config_.num_keys;
}

TxnPlan Generator::next() {
  TxnPlan plan;
  plan.ops.reserve(config_.ops_per_txn);
  std::uniform_int_distribution<std::uint32_t> col(0, kColumns - 1);
  std::bernoulli_distribution coin(config_.write_fraction);
  for (std::size_t i = 0; i < config_.ops_per_txn; ++i) {
    Op op;
    op.key = pick_key();
    op.column = col(rng_);
    op.write = coin(rng_);
    if (op.write) op.tag = (stream_ << 40) | ++seq_;
    plan.ops.push_back(op);
  }
  return plan;
}

std::size_t run(TxContext& ctx, Table& table, const Config& config,
                const TxnPlan& plan) {
  std::size_t found = 0;
  for (const auto& op : plan.ops) {
    const auto key = key_of(op.key);
    ColumnSet cols;
    cols.insert(op.column);
    if (op.write) {
      RowBuffer buf(table.format());
      const auto v = column_value(op.key, op.column, op.tag, config.seed);
      buf.set_bytes(op.column, std::as_bytes(std::span(v)));
      update(ctx, table, key, buf, cols);
    } else if (get(ctx, table, key, cols)) {
      ++found;
    }
  }
  return found;
}

}  // namespace grain::ycsb
