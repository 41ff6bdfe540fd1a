#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "grain/storage/table.hpp"
#include "grain/txn/engine.hpp"
#include "grain/txn/policy.hpp"
#include "grain/workload/zipfian.hpp"

namespace grain::ycsb {

enum class Layout { coarse, fine_even_odd };

inline constexpr std::size_t kColumns = 10;
inline constexpr std::size_t kColumnWidth = 10;
inline constexpr const char* kTableName = "usertable";

struct Config {
  std::uint64_t num_keys = 10'000'000;
  std::size_t ops_per_txn = 16;
  double write_fraction = 0.5;
  double theta = 0.9;
  Layout layout = Layout::coarse;
  PolicyId policy = PolicyId::occ;
  std::uint64_t seed = 1;
  /// Hash ranks onto keys instead of rank i -> key i-1.
  bool scramble = false;
};

/// Throws std::invalid_argument on out-of-range fields.
void validate(const Config& config);

[[nodiscard]] GroupLayout make_layout(Layout layout);
[[nodiscard]] std::string key_of(std::uint64_t k);

/// Contents of (key, column) after the write with sequence tag `tag`;
/// tag 0 is the loaded value.
[[nodiscard]] std::array<char, kColumnWidth> column_value(std::uint64_t key,
                                                          std::size_t column,
                                                          std::uint64_t tag,
                                                          std::uint64_t seed);

/// Creates and fills the table. Single-threaded.
Table& load(Engine& engine, const Config& config);

struct Op {
  std::uint64_t key = 0;
  std::uint32_t column = 0;
  bool write = false;
  std::uint64_t tag = 0;  // write value tag, unique per stream
};

struct TxnPlan {
  std::vector<Op> ops;
};

/// Per-worker operation stream. The plan is drawn before the transaction
/// runs so that retries replay the same operations.
class Generator {
 public:
  Generator(const Config& config, const ZipfianParams& params,
            std::uint64_t stream);

  [[nodiscard]] TxnPlan next();

 private:
  [[nodiscard]] std::uint64_t pick_key();

  Config config_;
  std::uint64_t stream_;
  ZipfianGenerator zipf_;
  std::mt19937_64 rng_;
  std::uint64_t seq_ = 0;
};

/// Executes the plan inside `ctx`. Returns the number of reads that found
/// their key.
std::size_t run(TxContext& ctx, Table& table, const Config& config,
                const TxnPlan& plan);

}  // namespace grain::ycsb
