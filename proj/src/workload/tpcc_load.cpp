#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

#include "grain/workload/tpcc.hpp"

namespace grain::tpcc {

namespace {

constexpr std::uint32_t kLoadCLast = 157;

class LoadRng {
 public:
  explicit LoadRng(std::uint64_t seed) : rng_(seed) {}

  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
  }
  std::uint32_t nurand(std::uint32_t a, std::uint32_t lo, std::uint32_t hi,
                       std::uint32_t c) {
    const auto x = static_cast<std::uint32_t>(uniform(0, a));
    const auto y = static_cast<std::uint32_t>(uniform(lo, hi));
    return ((x | y) + c) % (hi - lo + 1) + lo;
  }
  std::string alnum(std::size_t lo, std::size_t hi) {
    static constexpr char kChars[] =
        "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
    const auto n = static_cast<std::size_t>(uniform(lo, hi));
    std::string s(n, ' ');
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i % 8 == 0) bits = rng_();
      s[i] = kChars[(bits & 0xFF) % 62];
      bits >>= 8;
    }
    return s;
  }
  std::string digits(std::size_t n) {
    std::string s(n, '0');
    for (auto& ch : s) ch = static_cast<char>('0' + uniform(0, 9));
    return s;
  }
  std::string zip() { return digits(4) + "11111"; }
  // 10% of rows carry "ORIGINAL" somewhere in their data.
  std::string data_with_original(std::size_t lo, std::size_t hi) {
    auto s = alnum(lo, hi);
    if (uniform(1, 10) == 1) {
      const auto pos = static_cast<std::size_t>(uniform(0, s.size() - 8));
      s.replace(pos, 8, "ORIGINAL");
    }
    return s;
  }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

void fill_address(RowBuffer& row, LoadRng& rng, std::size_t street_1) {
  // street_1, street_2, city, state, zip are consecutive in every table
  row.set_str(street_1, rng.alnum(10, 20));
  row.set_str(street_1 + 1, rng.alnum(10, 20));
  row.set_str(street_1 + 2, rng.alnum(10, 20));
  row.set_str(street_1 + 3, rng.alnum(2, 2));
  row.set_str(street_1 + 4, rng.zip());
}

void load_items(const Db& db, LoadRng& rng) {
  RowBuffer row(db.item->format());
  for (std::uint32_t i = 1; i <= kItems; ++i) {
    row.set_i64(item::im_id, rng.uniform(1, 10'000));
    row.set_str(item::name, rng.alnum(14, 24));
    row.set_i64(item::price, rng.uniform(100, 10'000));
    row.set_str(item::data, rng.data_with_original(26, 50));
    db.item->load_insert(item_key(i), row);
  }
}

void load_warehouse(const Db& db, std::uint32_t w, LoadRng& rng) {
  {
    RowBuffer row(db.warehouse->format());
    row.set_str(warehouse::name, rng.alnum(6, 10));
    fill_address(row, rng, warehouse::street_1);
    row.set_i64(warehouse::tax, rng.uniform(0, 2000));
    row.set_i64(warehouse::ytd, kInitialWarehouseYtd);
    db.warehouse->load_insert(warehouse_key(w), row);
  }

  RowBuffer stock_row(db.stock->format());
  for (std::uint32_t i = 1; i <= kItems; ++i) {
    stock_row.set_i64(stock::quantity, rng.uniform(10, 100));
    for (std::size_t c = stock::dist_01; c <= stock::dist_10; ++c) {
      stock_row.set_str(c, rng.alnum(24, 24));
    }
    stock_row.set_i64(stock::ytd, 0);
    stock_row.set_i64(stock::order_cnt, 0);
    stock_row.set_i64(stock::remote_cnt, 0);
    stock_row.set_str(stock::data, rng.data_with_original(26, 50));
    db.stock->load_insert(stock_key(w, i), stock_row);
  }

  RowBuffer dist_row(db.district->format());
  RowBuffer cust_row(db.customer->format());
  RowBuffer idx_row(db.customer_by_name->format());
  RowBuffer hist_row(db.history->format());
  RowBuffer order_row(db.order->format());
  RowBuffer no_row(db.new_order->format());
  RowBuffer oidx_row(db.order_by_customer->format());
  RowBuffer ol_row(db.order_line->format());

  for (std::uint32_t d = 1; d <= kDistrictsPerWarehouse; ++d) {
    dist_row.set_str(district::name, rng.alnum(6, 10));
    fill_address(dist_row, rng, district::street_1);
    dist_row.set_i64(district::tax, rng.uniform(0, 2000));
    dist_row.set_i64(district::ytd, kInitialDistrictYtd);
    dist_row.set_i64(district::next_o_id, kInitialOrders + 1);
    db.district->load_insert(district_key(w, d), dist_row);

    for (std::uint32_t c = 1; c <= kCustomersPerDistrict; ++c) {
      const auto last = last_name(c <= 1000 ? c - 1
                                            : rng.nurand(255, 0, 999, kLoadCLast));
      const auto first = rng.alnum(8, 16);
      cust_row.set_str(customer::first, first);
      cust_row.set_str(customer::middle, "OE");
      cust_row.set_str(customer::last, last);
      fill_address(cust_row, rng, customer::street_1);
      cust_row.set_str(customer::phone, rng.digits(16));
      cust_row.set_i64(customer::since, 0);
      cust_row.set_str(customer::credit, rng.uniform(1, 10) == 1 ? "BC" : "GC");
      cust_row.set_i64(customer::credit_lim, 5'000'000);
      cust_row.set_i64(customer::discount, rng.uniform(0, 5000));
      cust_row.set_i64(customer::balance, -1000);
      cust_row.set_i64(customer::ytd_payment, 1000);
      cust_row.set_i64(customer::payment_cnt, 1);
      cust_row.set_i64(customer::delivery_cnt, 0);
      cust_row.set_str(customer::data, rng.alnum(300, 500));
      db.customer->load_insert(customer_key(w, d, c), cust_row);

      idx_row.set_str(index_col::pk, customer_key(w, d, c));
      db.customer_by_name->load_insert(customer_name_key(w, d, last, first, c),
                                       idx_row);

      hist_row.set_i64(history::c_id, c);
      hist_row.set_i64(history::c_d_id, d);
      hist_row.set_i64(history::c_w_id, w);
      hist_row.set_i64(history::d_id, d);
      hist_row.set_i64(history::w_id, w);
      hist_row.set_i64(history::date, 0);
      hist_row.set_i64(history::amount, 1000);
      hist_row.set_str(history::data, rng.alnum(12, 24));
      db.history->load_insert(history_key(w, d, c, 1), hist_row);
    }

    std::vector<std::uint32_t> perm(kCustomersPerDistrict);
    std::iota(perm.begin(), perm.end(), 1U);
    std::shuffle(perm.begin(), perm.end(), rng.engine());
    for (std::uint32_t o = 1; o <= kInitialOrders; ++o) {
      const auto c = perm[o - 1];
      const bool delivered = o < kFirstUndeliveredOrder;
      const auto ol_cnt = rng.uniform(5, 15);
      order_row.set_i64(order::c_id, c);
      order_row.set_i64(order::entry_d, 0);
      order_row.set_i64(order::carrier_id, delivered ? rng.uniform(1, 10) : 0);
      order_row.set_i64(order::ol_cnt, ol_cnt);
      order_row.set_i64(order::all_local, 1);
      db.order->load_insert(order_key(w, d, o), order_row);

      oidx_row.set_str(index_col::pk, order_key(w, d, o));
      db.order_by_customer->load_insert(order_customer_key(w, d, c, o),
                                        oidx_row);
      if (!delivered) {
        no_row.set_i64(new_order::flag, 1);
        db.new_order->load_insert(order_key(w, d, o), no_row);
      }
      for (std::uint32_t n = 1; n <= ol_cnt; ++n) {
        ol_row.set_i64(order_line::i_id, rng.uniform(1, kItems));
        ol_row.set_i64(order_line::supply_w_id, w);
        ol_row.set_i64(order_line::delivery_d, 0);
        ol_row.set_i64(order_line::quantity, 5);
        ol_row.set_i64(order_line::amount,
                       delivered ? 0 : rng.uniform(1, 999'999));
        ol_row.set_str(order_line::dist_info, rng.alnum(24, 24));
        db.order_line->load_insert(order_line_key(w, d, o, n), ol_row);
      }
    }
  }
}

}  // namespace

Db load(Engine& engine, const Config& config) {
  if (config.warehouses == 0) {
    throw std::invalid_argument("tpcc: warehouses must be >= 1");
  }
  for (auto& s : schemas(config)) engine.create_table(std::move(s));
  auto db = attach(engine, config.warehouses);
  LoadRng rng(config.seed);
  load_items(db, rng);
  for (std::uint32_t w = 1; w <= config.warehouses; ++w) {
    load_warehouse(db, w, rng);
  }
  return db;
}

}  // namespace grain::tpcc
