#include <algorithm>
#include <string>

#include "grain/storage/access.hpp"
#include "grain/storage/key.hpp"
#include "grain/txn/errors.hpp"
#include "grain/workload/tpcc.hpp"

namespace grain::tpcc {

namespace {

// Run-time NURand constants; C_LAST differs from the load value by 66.
constexpr std::uint32_t kRunCLast = 223;
constexpr std::uint32_t kRunCId = 259;
constexpr std::uint32_t kRunOlIId = 7911;

ColumnSet cols(std::initializer_list<std::size_t> c) { return ColumnSet(c); }

RowBuffer must_get(TxContext& ctx, Table& t, const std::string& key,
                   ColumnSet c) {
  auto row = get(ctx, t, key, c);
  // Every row reached here exists in any committed state, so absence means
  // we saw part of a concurrent commit; the absent-key check would fail.
  if (!row) throw TxAbort(AbortReason::scan_validation);
  return std::move(*row);
}

// Middle customer (ceil(n/2)-th by first name) among (w, d, last).
std::uint32_t customer_by_last_name(TxContext& ctx, const Db& db,
                                    std::uint32_t w, std::uint32_t d,
                                    const std::string& last) {
  const auto lo = customer_name_prefix(w, d, last);
  const auto rows = range_scan(ctx, *db.customer_by_name, lo,
                               prefix_successor(lo));
  if (rows.empty()) throw TxAbort(AbortReason::scan_validation);
  // c_id is the last key component
  const auto& pick = rows[(rows.size() + 1) / 2 - 1].first;
  return decode_u32(pick, pick.size() - 4);
}

std::uint32_t resolve_customer(TxContext& ctx, const Db& db, std::uint32_t w,
                               std::uint32_t d, const CustomerSelector& sel) {
  return sel.by_name ? customer_by_last_name(ctx, db, w, d, sel.last) : sel.c;
}

}  // namespace

NewOrderOutput new_order_txn(TxContext& ctx, const Db& db,
                             const NewOrderInput& in) {
  const auto wh = must_get(ctx, *db.warehouse, warehouse_key(in.w),
                           cols({warehouse::tax}));
  const auto dkey = district_key(in.w, in.d);
  auto dist = must_get(ctx, *db.district, dkey,
                       cols({district::tax, district::next_o_id}));
  const auto o_id = static_cast<std::uint32_t>(dist.get_i64(district::next_o_id));
  dist.set_i64(district::next_o_id, o_id + 1);
  update(ctx, *db.district, dkey, dist, cols({district::next_o_id}));

  const auto cust = must_get(ctx, *db.customer, customer_key(in.w, in.d, in.c),
                             cols({customer::discount, customer::last,
                                   customer::credit}));

  bool all_local = true;
  for (const auto& l : in.lines) all_local = all_local && l.supply_w == in.w;

  RowBuffer order_row(db.order->format());
  order_row.set_i64(order::c_id, in.c);
  order_row.set_i64(order::entry_d, in.entry_date);
  order_row.set_i64(order::carrier_id, 0);
  order_row.set_i64(order::ol_cnt, static_cast<std::int64_t>(in.lines.size()));
  order_row.set_i64(order::all_local, all_local ? 1 : 0);
  insert(ctx, *db.order, order_key(in.w, in.d, o_id), order_row);

  RowBuffer no_row(db.new_order->format());
  no_row.set_i64(new_order::flag, 1);
  insert(ctx, *db.new_order, order_key(in.w, in.d, o_id), no_row);

  RowBuffer idx_row(db.order_by_customer->format());
  idx_row.set_str(index_col::pk, order_key(in.w, in.d, o_id));
  insert(ctx, *db.order_by_customer,
         order_customer_key(in.w, in.d, in.c, o_id), idx_row);

  const auto dist_col = stock::dist_01 + (in.d - 1);
  std::int64_t sum = 0;
  RowBuffer ol_row(db.order_line->format());
  for (std::uint32_t n = 1; n <= in.lines.size(); ++n) {
    const auto& l = in.lines[n - 1];
    const auto it = get(ctx, *db.item, item_key(l.item_id),
                        cols({item::price, item::name, item::data}));
    if (!it) user_abort();

    const auto skey = stock_key(l.supply_w, l.item_id);
    auto st = must_get(ctx, *db.stock, skey,
                       cols({stock::quantity, dist_col, stock::ytd,
                             stock::order_cnt, stock::remote_cnt,
                             stock::data}));
    const auto q = st.get_i64(stock::quantity);
    const auto want = static_cast<std::int64_t>(l.quantity);
    st.set_i64(stock::quantity, q >= want + 10 ? q - want : q - want + 91);
    st.set_i64(stock::ytd, st.get_i64(stock::ytd) + want);
    st.set_i64(stock::order_cnt, st.get_i64(stock::order_cnt) + 1);
    if (l.supply_w != in.w) {
      st.set_i64(stock::remote_cnt, st.get_i64(stock::remote_cnt) + 1);
    }
    update(ctx, *db.stock, skey, st,
           cols({stock::quantity, stock::ytd, stock::order_cnt,
                 stock::remote_cnt}));

    const auto amount = want * it->get_i64(item::price);
    sum += amount;
    ol_row.set_i64(order_line::i_id, l.item_id);
    ol_row.set_i64(order_line::supply_w_id, l.supply_w);
    ol_row.set_i64(order_line::delivery_d, 0);
    ol_row.set_i64(order_line::quantity, want);
    ol_row.set_i64(order_line::amount, amount);
    ol_row.set_str(order_line::dist_info, st.get_str(dist_col));
    insert(ctx, *db.order_line, order_line_key(in.w, in.d, o_id, n), ol_row);
  }

  const auto tax = 10'000 + wh.get_i64(warehouse::tax) + dist.get_i64(district::tax);
  const auto discount = 10'000 - cust.get_i64(customer::discount);
  return {o_id, sum * discount / 10'000 * tax / 10'000};
}

PaymentOutput payment_txn(TxContext& ctx, const Db& db,
                          const PaymentInput& in) {
  const auto wkey = warehouse_key(in.w);
  auto wh = must_get(ctx, *db.warehouse, wkey, cols({warehouse::ytd}));
  wh.set_i64(warehouse::ytd, wh.get_i64(warehouse::ytd) + in.amount);
  update(ctx, *db.warehouse, wkey, wh, cols({warehouse::ytd}));

  const auto dkey = district_key(in.w, in.d);
  auto dist = must_get(ctx, *db.district, dkey, cols({district::ytd}));
  dist.set_i64(district::ytd, dist.get_i64(district::ytd) + in.amount);
  update(ctx, *db.district, dkey, dist, cols({district::ytd}));

  const auto c_id = resolve_customer(ctx, db, in.c_w, in.c_d, in.customer);
  const auto ckey = customer_key(in.c_w, in.c_d, c_id);
  auto cust = must_get(
      ctx, *db.customer, ckey,
      cols({customer::first, customer::middle, customer::last,
            customer::street_1, customer::street_2, customer::city,
            customer::state, customer::zip, customer::phone, customer::since,
            customer::credit, customer::credit_lim, customer::discount,
            customer::balance, customer::ytd_payment, customer::payment_cnt,
            customer::data}));
  const auto balance = cust.get_i64(customer::balance) - in.amount;
  const auto cnt = cust.get_i64(customer::payment_cnt) + 1;
  cust.set_i64(customer::balance, balance);
  cust.set_i64(customer::ytd_payment,
               cust.get_i64(customer::ytd_payment) + in.amount);
  cust.set_i64(customer::payment_cnt, cnt);
  auto written = cols({customer::balance, customer::ytd_payment,
                       customer::payment_cnt});
  if (cust.get_str(customer::credit) == "BC") {
    auto data = std::to_string(c_id) + " " + std::to_string(in.c_d) + " " +
                std::to_string(in.c_w) + " " + std::to_string(in.d) + " " +
                std::to_string(in.w) + " " + std::to_string(in.amount) + " | " +
                std::string(cust.get_str(customer::data));
    data.resize(std::min<std::size_t>(data.size(), 500));
    cust.set_str(customer::data, data);
    written.insert(customer::data);
  }
  update(ctx, *db.customer, ckey, cust, written);

  RowBuffer h(db.history->format());
  h.set_i64(history::c_id, c_id);
  h.set_i64(history::c_d_id, in.c_d);
  h.set_i64(history::c_w_id, in.c_w);
  h.set_i64(history::d_id, in.d);
  h.set_i64(history::w_id, in.w);
  h.set_i64(history::date, in.date);
  h.set_i64(history::amount, in.amount);
  h.set_str(history::data,
            "W" + std::to_string(in.w) + " D" + std::to_string(in.d));
  insert(ctx, *db.history,
         history_key(in.c_w, in.c_d, c_id, static_cast<std::uint64_t>(cnt)), h);
  return {c_id, balance};
}

OrderStatusOutput order_status_txn(TxContext& ctx, const Db& db,
                                   const OrderStatusInput& in) {
  OrderStatusOutput out;
  out.c_id = resolve_customer(ctx, db, in.w, in.d, in.customer);
  const auto cust = must_get(ctx, *db.customer,
                             customer_key(in.w, in.d, out.c_id),
                             cols({customer::balance, customer::first,
                                   customer::middle, customer::last}));
  out.balance = cust.get_i64(customer::balance);

  const auto lo = order_customer_key(in.w, in.d, out.c_id, 0);
  const auto latest =
      range_scan(ctx, *db.order_by_customer, lo,
                 prefix_successor(customer_key(in.w, in.d, out.c_id)),
                 ScanDirection::descending, 1);
  if (latest.empty()) return out;
  const auto& k = latest.front().first;
  out.o_id = decode_u32(k, k.size() - 4);

  (void)must_get(ctx, *db.order, order_key(in.w, in.d, out.o_id),
                 cols({order::entry_d, order::carrier_id, order::ol_cnt}));
  const auto olo = order_line_key(in.w, in.d, out.o_id, 0);
  const auto lines =
      range_scan(ctx, *db.order_line, olo,
                 prefix_successor(order_key(in.w, in.d, out.o_id)));
  out.line_count = lines.size();
  return out;
}

void execute(TxContext& ctx, const Db& db, const TxnInput& in) {
  switch (in.type) {
    case TxnType::new_order:
      (void)new_order_txn(ctx, db, in.new_order);
      break;
    case TxnType::payment:
      (void)payment_txn(ctx, db, in.payment);
      break;
    case TxnType::order_status:
      (void)order_status_txn(ctx, db, in.order_status);
      break;
  }
}

// ---------------------------------------------------------------------------

InputGenerator::InputGenerator(std::uint32_t warehouses, std::uint32_t home_w,
                               std::uint64_t seed)
    : warehouses_(warehouses), home_w_(home_w), rng_(seed) {}

std::uint32_t InputGenerator::uniform(std::uint32_t lo, std::uint32_t hi) {
  return std::uniform_int_distribution<std::uint32_t>(lo, hi)(rng_);
}

std::uint32_t InputGenerator::nurand(std::uint32_t a, std::uint32_t lo,
                                     std::uint32_t hi, std::uint32_t c) {
  return ((uniform(0, a) | uniform(lo, hi)) + c) % (hi - lo + 1) + lo;
}

std::uint32_t InputGenerator::other_warehouse() {
  if (warehouses_ == 1) return home_w_;
  auto w = uniform(1, warehouses_ - 1);
  if (w >= home_w_) ++w;
  return w;
}

CustomerSelector InputGenerator::pick_customer() {
  CustomerSelector sel;
  if (uniform(1, 100) <= 60) {
    sel.by_name = true;
    sel.last = last_name(nurand(255, 0, 999, kRunCLast));
  } else {
    sel.c = nurand(1023, 1, kCustomersPerDistrict, kRunCId);
  }
  return sel;
}

NewOrderInput InputGenerator::next_new_order() {
  NewOrderInput in;
  in.w = home_w_;
  in.d = uniform(1, kDistrictsPerWarehouse);
  in.c = nurand(1023, 1, kCustomersPerDistrict, kRunCId);
  const auto n = uniform(5, 15);
  const bool rollback = uniform(1, 100) == 1;
  for (std::uint32_t i = 0; i < n; ++i) {
    OrderLineInput l;
    l.item_id = nurand(8191, 1, kItems, kRunOlIId);
    if (rollback && i + 1 == n) l.item_id = kItems + 1;  // unused id
    l.supply_w = uniform(1, 100) == 1 ? other_warehouse() : home_w_;
    l.quantity = uniform(1, 10);
    in.lines.push_back(l);
  }
  in.entry_date = ++clock_;
  return in;
}

PaymentInput InputGenerator::next_payment() {
  PaymentInput in;
  in.w = home_w_;
  in.d = uniform(1, kDistrictsPerWarehouse);
  if (uniform(1, 100) <= 85) {
    in.c_w = in.w;
    in.c_d = in.d;
  } else {
    in.c_w = other_warehouse();
    in.c_d = uniform(1, kDistrictsPerWarehouse);
  }
  in.customer = pick_customer();
  in.amount = uniform(100, 500'000);
  in.date = ++clock_;
  return in;
}

OrderStatusInput InputGenerator::next_order_status() {
  OrderStatusInput in;
  in.w = home_w_;
  in.d = uniform(1, kDistrictsPerWarehouse);
  in.customer = pick_customer();
  return in;
}

TxnInput InputGenerator::next() {
  // 45 : 43 : 4 out of 92
  TxnInput in;
  const auto x = uniform(0, 91);
  if (x < 45) {
    in.type = TxnType::new_order;
    in.new_order = next_new_order();
  } else if (x < 88) {
    in.type = TxnType::payment;
    in.payment = next_payment();
  } else {
    in.type = TxnType::order_status;
    in.order_status = next_order_status();
  }
  return in;
}

}  // namespace grain::tpcc
