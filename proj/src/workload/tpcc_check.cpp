#include <map>
#include <tuple>

#include "grain/storage/key.hpp"
#include "grain/workload/tpcc.hpp"

namespace grain::tpcc {

namespace {

constexpr std::size_t kMaxFailures = 32;

void fail(ConditionResult& r, std::string what) {
  ++r.violations;
  if (r.failures.size() < kMaxFailures) r.failures.push_back(std::move(what));
}

template <class Fn>
void for_each_live(const Table& t, Fn&& fn) {
  t.for_each_row([&](const Row& row) {
    if (row.state() == RowState::live) fn(row, t.read_quiesced(row));
  });
}

std::string wd(std::uint32_t w, std::uint32_t d) {
  return "w=" + std::to_string(w) + " d=" + std::to_string(d);
}

}  // namespace

bool ConsistencyReport::ok() const noexcept {
  for (const auto& c : conditions) {
    if (!c.ok()) return false;
  }
  return true;
}

std::string ConsistencyReport::summary() const {
  std::string out;
  for (const auto& c : conditions) {
    out += c.name + ": " + (c.ok() ? "ok" : "FAIL") + " (" +
           std::to_string(c.checked) + " checked, " +
           std::to_string(c.violations) + " violations)\n";
    for (const auto& f : c.failures) out += "  " + f + "\n";
  }
  return out;
}

ConsistencyReport consistency_check(const Db& db) {
  using WD = std::pair<std::uint32_t, std::uint32_t>;

  std::map<std::uint32_t, std::int64_t> w_ytd;
  for_each_live(*db.warehouse, [&](const Row& row, const RowBuffer& v) {
    w_ytd[decode_u32(row.key(), 0)] = v.get_i64(warehouse::ytd);
  });

  std::map<WD, std::int64_t> d_ytd;
  std::map<WD, std::int64_t> d_next;
  for_each_live(*db.district, [&](const Row& row, const RowBuffer& v) {
    const WD k{decode_u32(row.key(), 0), decode_u32(row.key(), 4)};
    d_ytd[k] = v.get_i64(district::ytd);
    d_next[k] = v.get_i64(district::next_o_id);
  });

  std::map<WD, std::int64_t> paid;
  for_each_live(*db.history, [&](const Row&, const RowBuffer& v) {
    paid[{static_cast<std::uint32_t>(v.get_i64(history::w_id)),
          static_cast<std::uint32_t>(v.get_i64(history::d_id))}] +=
        v.get_i64(history::amount);
  });

  struct OrderAgg {
    std::uint32_t max = 0;
    std::uint64_t count = 0;
  };
  std::map<WD, OrderAgg> orders;
  std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>,
           std::pair<std::int64_t, std::int64_t>>
      order_info;  // (w,d,o) -> (ol_cnt, c_id)
  for_each_live(*db.order, [&](const Row& row, const RowBuffer& v) {
    const auto w = decode_u32(row.key(), 0);
    const auto d = decode_u32(row.key(), 4);
    const auto o = decode_u32(row.key(), 8);
    auto& agg = orders[{w, d}];
    agg.max = std::max(agg.max, o);
    ++agg.count;
    order_info[{w, d, o}] = {v.get_i64(order::ol_cnt), v.get_i64(order::c_id)};
  });

  std::map<WD, std::uint32_t> new_order_max;
  for_each_live(*db.new_order, [&](const Row& row, const RowBuffer&) {
    auto& m = new_order_max[{decode_u32(row.key(), 0), decode_u32(row.key(), 4)}];
    m = std::max(m, decode_u32(row.key(), 8));
  });

  std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>, std::int64_t>
      line_count;
  db.order_line->for_each_row([&](const Row& row) {
    if (row.state() != RowState::live) return;
    ++line_count[{decode_u32(row.key(), 0), decode_u32(row.key(), 4),
                  decode_u32(row.key(), 8)}];
  });

  std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>, std::uint32_t>
      index_entry;  // (w,d,o) -> c
  db.order_by_customer->for_each_row([&](const Row& row) {
    if (row.state() != RowState::live) return;
    index_entry[{decode_u32(row.key(), 0), decode_u32(row.key(), 4),
                 decode_u32(row.key(), 12)}] = decode_u32(row.key(), 8);
  });

  ConsistencyReport report;

  ConditionResult c1{"warehouse_ytd", 0, 0, {}};
  for (const auto& [w, ytd] : w_ytd) {
    ++c1.checked;
    std::int64_t sum = 0;
    for (std::uint32_t d = 1; d <= kDistrictsPerWarehouse; ++d) {
      const auto it = d_ytd.find({w, d});
      if (it != d_ytd.end()) sum += it->second;
    }
    if (sum != ytd) {
      fail(c1, "w=" + std::to_string(w) + " W_YTD=" + std::to_string(ytd) +
                   " sum(D_YTD)=" + std::to_string(sum));
    }
  }
  report.conditions.push_back(std::move(c1));

  ConditionResult c2{"district_history", 0, 0, {}};
  for (const auto& [k, ytd] : d_ytd) {
    ++c2.checked;
    const auto it = paid.find(k);
    const auto sum = it == paid.end() ? 0 : it->second;
    if (sum != ytd) {
      fail(c2, wd(k.first, k.second) + " D_YTD=" + std::to_string(ytd) +
                   " sum(H_AMOUNT)=" + std::to_string(sum));
    }
  }
  report.conditions.push_back(std::move(c2));

  ConditionResult c3{"next_order_id", 0, 0, {}};
  ConditionResult c4{"order_density", 0, 0, {}};
  for (const auto& [k, next] : d_next) {
    ++c3.checked;
    ++c4.checked;
    const auto& agg = orders[k];
    const auto no_max = new_order_max[k];
    if (next - 1 != agg.max || next - 1 != no_max) {
      fail(c3, wd(k.first, k.second) + " D_NEXT_O_ID=" + std::to_string(next) +
                   " max(O_ID)=" + std::to_string(agg.max) +
                   " max(NO_O_ID)=" + std::to_string(no_max));
    }
    // keys are unique, so count == max means ids are exactly 1..max
    if (static_cast<std::int64_t>(agg.count) != next - 1) {
      fail(c4, wd(k.first, k.second) + " orders=" + std::to_string(agg.count) +
                   " expected=" + std::to_string(next - 1));
    }
  }
  report.conditions.push_back(std::move(c3));
  report.conditions.push_back(std::move(c4));

  ConditionResult c5{"order_line_count", 0, 0, {}};
  ConditionResult c6{"order_index", 0, 0, {}};
  for (const auto& [k, info] : order_info) {
    ++c5.checked;
    ++c6.checked;
    const auto [w, d, o] = k;
    const auto it = line_count.find(k);
    const auto n = it == line_count.end() ? 0 : it->second;
    if (n != info.first) {
      fail(c5, wd(w, d) + " o=" + std::to_string(o) + " O_OL_CNT=" +
                   std::to_string(info.first) + " lines=" + std::to_string(n));
    }
    const auto ie = index_entry.find(k);
    if (ie == index_entry.end() ||
        static_cast<std::int64_t>(ie->second) != info.second) {
      fail(c6, wd(w, d) + " o=" + std::to_string(o) + " missing index entry");
    }
  }
  if (index_entry.size() != order_info.size()) {
    fail(c6, "index has " + std::to_string(index_entry.size()) +
                 " entries for " + std::to_string(order_info.size()) +
                 " orders");
  }
  report.conditions.push_back(std::move(c5));
  report.conditions.push_back(std::move(c6));
  return report;
}

std::uint64_t state_digest(const Db& db) {
  // FNV-1a 64
  std::uint64_t h = 0xCBF29CE484222325ULL;
  auto feed = [&h](const void* p, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= b[i];
      h *= 0x100000001B3ULL;
    }
  };
  for (const auto* t : db.all()) {
    feed(t->name().data(), t->name().size());
    for_each_live(*t, [&](const Row& row, const RowBuffer& v) {
      feed(row.key().data(), row.key().size());
      // per column, so the group layout does not matter
      for (std::size_t c = 0; c < t->format().num_columns(); ++c) {
        const auto bytes = v.column(c);
        feed(bytes.data(), bytes.size());
      }
    });
  }
  return h;
}

}  // namespace grain::tpcc
