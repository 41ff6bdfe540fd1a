#include <stdexcept>

#include "grain/storage/key.hpp"
#include "grain/workload/tpcc.hpp"

namespace grain::tpcc {

std::string warehouse_key(std::uint32_t w) { return KeyBuilder{}.u32(w).build(); }

std::string district_key(std::uint32_t w, std::uint32_t d) {
  return KeyBuilder{}.u32(w).u32(d).build();
}

std::string customer_key(std::uint32_t w, std::uint32_t d, std::uint32_t c) {
  return KeyBuilder{}.u32(w).u32(d).u32(c).build();
}

std::string customer_name_prefix(std::uint32_t w, std::uint32_t d,
                                 std::string_view last) {
  return KeyBuilder{}.u32(w).u32(d).str(last, kLastNameWidth).build();
}

std::string customer_name_key(std::uint32_t w, std::uint32_t d,
                              std::string_view last, std::string_view first,
                              std::uint32_t c) {
  return KeyBuilder{}
      .u32(w)
      .u32(d)
      .str(last, kLastNameWidth)
      .str(first, kFirstNameWidth)
      .u32(c)
      .build();
}

std::string history_key(std::uint32_t w, std::uint32_t d, std::uint32_t c,
                        std::uint64_t seq) {
  return KeyBuilder{}.u32(w).u32(d).u32(c).u64(seq).build();
}

std::string order_key(std::uint32_t w, std::uint32_t d, std::uint32_t o) {
  return KeyBuilder{}.u32(w).u32(d).u32(o).build();
}

std::string order_customer_key(std::uint32_t w, std::uint32_t d,
                               std::uint32_t c, std::uint32_t o) {
  return KeyBuilder{}.u32(w).u32(d).u32(c).u32(o).build();
}

std::string order_line_key(std::uint32_t w, std::uint32_t d, std::uint32_t o,
                           std::uint32_t n) {
  return KeyBuilder{}.u32(w).u32(d).u32(o).u32(n).build();
}

std::string item_key(std::uint32_t i) { return KeyBuilder{}.u32(i).build(); }

std::string stock_key(std::uint32_t w, std::uint32_t i) {
  return KeyBuilder{}.u32(w).u32(i).build();
}

std::string last_name(std::uint32_t num) {
  static constexpr const char* kSyllables[] = {
      "BAR", "OUGHT", "ABLE", "PRI", "PRES",
      "ESE", "ANTI",  "CALLY", "ATION", "EING"};
  std::string out;
  out += kSyllables[(num / 100) % 10];
  out += kSyllables[(num / 10) % 10];
  out += kSyllables[num % 10];
  return out;
}

namespace {

TableSchema make(std::string name,
                 std::vector<ColumnSpec> columns, PolicyId policy) {
  const auto n = columns.size();
  return TableSchema{std::move(name), std::move(columns),
                     GroupLayout::coarse(n), policy};
}

// Hot columns in group 1, everything else in group 0.
GroupLayout split(std::size_t n, const std::vector<std::size_t>& hot) {
  std::vector<std::size_t> rest;
  for (std::size_t c = 0; c < n; ++c) {
    bool is_hot = false;
    for (const auto h : hot) is_hot = is_hot || h == c;
    if (!is_hot) rest.push_back(c);
  }
  return GroupLayout(n, {rest, hot});
}

}  // namespace

std::vector<TableSchema> schemas(const Config& config) {
  const auto p = config.policy;
  std::vector<TableSchema> out;

  out.push_back(make("warehouse",
                     {{"w_name", 10}, {"w_street_1", 20}, {"w_street_2", 20},
                      {"w_city", 20}, {"w_state", 2}, {"w_zip", 9},
                      {"w_tax", 8}, {"w_ytd", 8}},
                     p));

  auto dist = make("district",
                   {{"d_name", 10}, {"d_street_1", 20}, {"d_street_2", 20},
                    {"d_city", 20}, {"d_state", 2}, {"d_zip", 9}, {"d_tax", 8},
                    {"d_ytd", 8}, {"d_next_o_id", 8}},
                   p);
  if (config.layout == Layout::fine_split) {
    dist.layout = split(district::kCount, {district::ytd});
  }
  out.push_back(std::move(dist));

  auto cust = make("customer",
                   {{"c_first", kFirstNameWidth}, {"c_middle", 2},
                    {"c_last", kLastNameWidth}, {"c_street_1", 20},
                    {"c_street_2", 20}, {"c_city", 20}, {"c_state", 2},
                    {"c_zip", 9}, {"c_phone", 16}, {"c_since", 8},
                    {"c_credit", 2}, {"c_credit_lim", 8}, {"c_discount", 8},
                    {"c_balance", 8}, {"c_ytd_payment", 8},
                    {"c_payment_cnt", 8}, {"c_delivery_cnt", 8},
                    {"c_data", 500}},
                   p);
  if (config.layout == Layout::fine_split) {
    cust.layout = split(customer::kCount,
                        {customer::balance, customer::ytd_payment,
                         customer::payment_cnt, customer::data});
  }
  out.push_back(std::move(cust));

  out.push_back(make("customer_by_name", {{"pk", 12}}, p));
  out.push_back(make("history",
                     {{"h_c_id", 8}, {"h_c_d_id", 8}, {"h_c_w_id", 8},
                      {"h_d_id", 8}, {"h_w_id", 8}, {"h_date", 8},
                      {"h_amount", 8}, {"h_data", 24}},
                     p));
  out.push_back(make("new_order", {{"no_flag", 8}}, p));
  out.push_back(make("oorder",
                     {{"o_c_id", 8}, {"o_entry_d", 8}, {"o_carrier_id", 8},
                      {"o_ol_cnt", 8}, {"o_all_local", 8}},
                     p));
  out.push_back(make("order_by_customer", {{"pk", 12}}, p));
  out.push_back(make("order_line",
                     {{"ol_i_id", 8}, {"ol_supply_w_id", 8},
                      {"ol_delivery_d", 8}, {"ol_quantity", 8},
                      {"ol_amount", 8}, {"ol_dist_info", 24}},
                     p));
  out.push_back(make("item",
                     {{"i_im_id", 8}, {"i_name", 24}, {"i_price", 8},
                      {"i_data", 50}},
                     p));
  out.push_back(make("stock",
                     {{"s_quantity", 8}, {"s_dist_01", 24}, {"s_dist_02", 24},
                      {"s_dist_03", 24}, {"s_dist_04", 24}, {"s_dist_05", 24},
                      {"s_dist_06", 24}, {"s_dist_07", 24}, {"s_dist_08", 24},
                      {"s_dist_09", 24}, {"s_dist_10", 24}, {"s_ytd", 8},
                      {"s_order_cnt", 8}, {"s_remote_cnt", 8},
                      {"s_data", 50}},
                     p));
  return out;
}

Db attach(Engine& engine, std::uint32_t warehouses) {
  auto need = [&](std::string_view name) {
    auto* t = engine.table(name);
    if (t == nullptr) {
      throw std::invalid_argument("tpcc: missing table " + std::string(name));
    }
    return t;
  };
  Db db;
  db.warehouse = need("warehouse");
  db.district = need("district");
  db.customer = need("customer");
  db.customer_by_name = need("customer_by_name");
  db.history = need("history");
  db.new_order = need("new_order");
  db.order = need("oorder");
  db.order_by_customer = need("order_by_customer");
  db.order_line = need("order_line");
  db.item = need("item");
  db.stock = need("stock");
  db.warehouses = warehouses;
  return db;
}

const char* to_string(TxnType t) noexcept {
  switch (t) {
    case TxnType::new_order:
      return "new_order";
    case TxnType::payment:
      return "payment";
    case TxnType::order_status:
      return "order_status";
  }
  return "?";
}

}  // namespace grain::tpcc
