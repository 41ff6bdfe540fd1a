#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "grain/storage/table.hpp"
#include "grain/txn/engine.hpp"
#include "grain/txn/policy.hpp"

namespace grain::tpcc {

enum class Layout { coarse, fine_split };

inline constexpr std::uint32_t kDistrictsPerWarehouse = 10;
inline constexpr std::uint32_t kCustomersPerDistrict = 3000;
inline constexpr std::uint32_t kItems = 100'000;
inline constexpr std::uint32_t kInitialOrders = 3000;
inline constexpr std::uint32_t kFirstUndeliveredOrder = 2101;
// Money is integer cents, rates are basis points (1/10000).
inline constexpr std::int64_t kInitialWarehouseYtd = 30'000'000;
inline constexpr std::int64_t kInitialDistrictYtd = 3'000'000;

// Column indexes, one enum per table.
namespace warehouse {
enum : std::size_t { name, street_1, street_2, city, state, zip, tax, ytd, kCount };
}
namespace district {
enum : std::size_t { name, street_1, street_2, city, state, zip, tax, ytd, next_o_id, kCount };
}
namespace customer {
enum : std::size_t {
  first, middle, last, street_1, street_2, city, state, zip, phone, since,
  credit, credit_lim, discount, balance, ytd_payment, payment_cnt,
  delivery_cnt, data, kCount
};
}
namespace history {
enum : std::size_t { c_id, c_d_id, c_w_id, d_id, w_id, date, amount, data, kCount };
}
namespace new_order {
enum : std::size_t { flag, kCount };
}
namespace order {
enum : std::size_t { c_id, entry_d, carrier_id, ol_cnt, all_local, kCount };
}
namespace order_line {
enum : std::size_t { i_id, supply_w_id, delivery_d, quantity, amount, dist_info, kCount };
}
namespace item {
enum : std::size_t { im_id, name, price, data, kCount };
}
namespace stock {
enum : std::size_t {
  quantity, dist_01, dist_02, dist_03, dist_04, dist_05, dist_06, dist_07,
  dist_08, dist_09, dist_10, ytd, order_cnt, remote_cnt, data, kCount
};
}
// Secondary indexes hold the base-table key in their only column.
namespace index_col {
enum : std::size_t { pk, kCount };
}

struct Config {
  std::uint32_t warehouses = 8;
  Layout layout = Layout::coarse;
  PolicyId policy = PolicyId::occ;
  std::uint64_t seed = 1;
};

struct Db {
  Table* warehouse = nullptr;
  Table* district = nullptr;
  Table* customer = nullptr;
  Table* customer_by_name = nullptr;
  Table* history = nullptr;
  Table* new_order = nullptr;
  Table* order = nullptr;
  Table* order_by_customer = nullptr;
  Table* order_line = nullptr;
  Table* item = nullptr;
  Table* stock = nullptr;
  std::uint32_t warehouses = 0;

  [[nodiscard]] std::vector<Table*> all() const {
    return {warehouse, district,   customer,          customer_by_name,
            history,   new_order,  order,             order_by_customer,
            order_line, item,      stock};
  }
};

// Key encodings.
[[nodiscard]] std::string warehouse_key(std::uint32_t w);
[[nodiscard]] std::string district_key(std::uint32_t w, std::uint32_t d);
[[nodiscard]] std::string customer_key(std::uint32_t w, std::uint32_t d,
                                       std::uint32_t c);
/// Prefix of every customer_by_name key for (w, d, last).
[[nodiscard]] std::string customer_name_prefix(std::uint32_t w,
                                               std::uint32_t d,
                                               std::string_view last);
[[nodiscard]] std::string customer_name_key(std::uint32_t w, std::uint32_t d,
                                            std::string_view last,
                                            std::string_view first,
                                            std::uint32_t c);
[[nodiscard]] std::string history_key(std::uint32_t w, std::uint32_t d,
                                      std::uint32_t c, std::uint64_t seq);
[[nodiscard]] std::string order_key(std::uint32_t w, std::uint32_t d,
                                    std::uint32_t o);
[[nodiscard]] std::string order_customer_key(std::uint32_t w, std::uint32_t d,
                                             std::uint32_t c, std::uint32_t o);
[[nodiscard]] std::string order_line_key(std::uint32_t w, std::uint32_t d,
                                         std::uint32_t o, std::uint32_t n);
[[nodiscard]] std::string item_key(std::uint32_t i);
[[nodiscard]] std::string stock_key(std::uint32_t w, std::uint32_t i);

inline constexpr std::size_t kLastNameWidth = 16;
inline constexpr std::size_t kFirstNameWidth = 16;

/// Customer last name for number 0..999 (three syllables).
[[nodiscard]] std::string last_name(std::uint32_t num);

[[nodiscard]] std::vector<TableSchema> schemas(const Config& config);

/// Creates every table and loads the initial population. Single-threaded.
/// Throws std::invalid_argument if warehouses == 0.
Db load(Engine& engine, const Config& config);

/// Table handles of an already loaded engine.
[[nodiscard]] Db attach(Engine& engine, std::uint32_t warehouses);

// ---------------------------------------------------------------------------
// Transactions

struct OrderLineInput {
  std::uint32_t item_id = 0;
  std::uint32_t supply_w = 0;
  std::uint32_t quantity = 0;
};

struct NewOrderInput {
  std::uint32_t w = 0;
  std::uint32_t d = 0;
  std::uint32_t c = 0;
  std::vector<OrderLineInput> lines;
  std::int64_t entry_date = 0;
};

struct NewOrderOutput {
  std::uint32_t o_id = 0;
  std::int64_t total = 0;  // cents
};

struct CustomerSelector {
  bool by_name = false;
  std::uint32_t c = 0;
  std::string last;
};

struct PaymentInput {
  std::uint32_t w = 0;
  std::uint32_t d = 0;
  std::uint32_t c_w = 0;
  std::uint32_t c_d = 0;
  CustomerSelector customer;
  std::int64_t amount = 0;  // cents
  std::int64_t date = 0;
};

struct PaymentOutput {
  std::uint32_t c_id = 0;
  std::int64_t balance = 0;
};

struct OrderStatusInput {
  std::uint32_t w = 0;
  std::uint32_t d = 0;
  CustomerSelector customer;
};

struct OrderStatusOutput {
  std::uint32_t c_id = 0;
  std::int64_t balance = 0;
  std::uint32_t o_id = 0;  // 0 if the customer has no order
  std::size_t line_count = 0;
};

/// Throws TxAbort (USER_ABORT for an invalid item).
NewOrderOutput new_order_txn(TxContext& ctx, const Db& db,
                             const NewOrderInput& in);
PaymentOutput payment_txn(TxContext& ctx, const Db& db,
                          const PaymentInput& in);
OrderStatusOutput order_status_txn(TxContext& ctx, const Db& db,
                                   const OrderStatusInput& in);

enum class TxnType { new_order, payment, order_status };
inline constexpr std::size_t kTxnTypeCount = 3;
[[nodiscard]] const char* to_string(TxnType t) noexcept;

struct TxnInput {
  TxnType type = TxnType::new_order;
  NewOrderInput new_order;
  PaymentInput payment;
  OrderStatusInput order_status;
};

/// Draws transaction inputs for one terminal bound to `home_w`. Inputs
/// are drawn once per logical transaction so that retries replay them.
class InputGenerator {
 public:
  InputGenerator(std::uint32_t warehouses, std::uint32_t home_w,
                 std::uint64_t seed);

  [[nodiscard]] TxnInput next();
  [[nodiscard]] NewOrderInput next_new_order();
  [[nodiscard]] PaymentInput next_payment();
  [[nodiscard]] OrderStatusInput next_order_status();

 private:
  std::uint32_t uniform(std::uint32_t lo, std::uint32_t hi);
  std::uint32_t nurand(std::uint32_t a, std::uint32_t lo, std::uint32_t hi,
                       std::uint32_t c);
  std::uint32_t other_warehouse();
  CustomerSelector pick_customer();

  std::uint32_t warehouses_;
  std::uint32_t home_w_;
  std::mt19937_64 rng_;
  std::int64_t clock_ = 0;
};

/// Runs one input against the database.
void execute(TxContext& ctx, const Db& db, const TxnInput& in);

// ---------------------------------------------------------------------------
// Consistency

struct ConditionResult {
  std::string name;
  std::uint64_t checked = 0;
  std::uint64_t violations = 0;
  std::vector<std::string> failures;  // capped

  [[nodiscard]] bool ok() const noexcept { return violations == 0; }
};

struct ConsistencyReport {
  std::vector<ConditionResult> conditions;

  [[nodiscard]] bool ok() const noexcept;
  [[nodiscard]] std::string summary() const;
};

/// Checks the standard TPC-C consistency conditions on a quiesced engine:
///   warehouse_ytd       W_YTD = sum of its D_YTD
///   district_history    D_YTD = sum of H_AMOUNT paid to that district
///   next_order_id       D_NEXT_O_ID - 1 = max order id = max new-order id
///   order_density       order ids of a district are exactly 1..D_NEXT_O_ID-1
///   order_line_count    O_OL_CNT = number of order lines
///   order_index         every order has its order_by_customer entry
[[nodiscard]] ConsistencyReport consistency_check(const Db& db);

/// Hash of the committed contents of every table (keys and column bytes of
/// LIVE rows) in key order. Quiesced engine only.
[[nodiscard]] std::uint64_t state_digest(const Db& db);

}  // namespace grain::tpcc
