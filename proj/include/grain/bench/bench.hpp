#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "grain/txn/errors.hpp"
#include "grain/txn/policy.hpp"

namespace grain::bench {

enum class Workload { ycsb, tpcc };
enum class Granularity { coarse, fine };
enum class OutputFormat { csv, json };

[[nodiscard]] const char* to_string(Workload w) noexcept;
[[nodiscard]] const char* to_string(Granularity g) noexcept;
[[nodiscard]] const char* to_string(OutputFormat f) noexcept;

struct BenchConfig {
  Workload workload = Workload::ycsb;
  PolicyId cc = PolicyId::occ;
  Granularity granularity = Granularity::coarse;
  unsigned threads = 1;
  double duration_secs = 15.0;
  unsigned runs = 7;
  unsigned warehouses = 8;
  double theta = 0.9;
  std::uint64_t num_keys = 10'000'000;
  std::uint64_t seed = 1;
  std::string output;  // empty = stdout
  OutputFormat format = OutputFormat::csv;
  bool pin_threads = false;
  double warmup_secs = 0.1;

  friend bool operator==(const BenchConfig&, const BenchConfig&) = default;
};

/// Bad flags or an invalid combination; what() holds the usage message.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// --help was given; what() holds the help text.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConsistencyViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws UsageError or HelpRequested.
[[nodiscard]] BenchConfig parse_config(int argc, const char* const* argv);
/// Throws UsageError when an invariant does not hold.
void validate(const BenchConfig& config);

inline constexpr std::size_t kRetryBuckets = 16;

struct RunMetrics {
  std::uint64_t committed = 0;
  double throughput = 0.0;  // committed per second
  std::array<std::uint64_t, kAbortReasonCount> aborts{};
  double abort_rate = 0.0;  // aborts / attempts
  std::map<std::string, std::uint64_t> commits_by_type;
  /// Bucket 0 counts transactions committed without retry; bucket k >= 1
  /// counts [2^(k-1), 2^k) retries; the last bucket is open-ended.
  std::array<std::uint64_t, kRetryBuckets> retries_histogram{};
  double wall_secs = 0.0;
  bool locks_clean = true;

  [[nodiscard]] std::uint64_t total_aborts() const noexcept;
  [[nodiscard]] std::uint64_t attempts() const noexcept {
    return committed + total_aborts();
  }

  friend bool operator==(const RunMetrics&, const RunMetrics&) = default;
};

[[nodiscard]] std::size_t retry_bucket(std::uint64_t retries) noexcept;

/// Loads the workload, runs the timed measurement once, and checks TPC-C
/// consistency afterwards. `run_index` perturbs the seed. Throws
/// ConsistencyViolation.
[[nodiscard]] RunMetrics run_benchmark(const BenchConfig& config,
                                       unsigned run_index = 0);

struct Stat {
  double median = 0.0;
  double min = 0.0;
  double max = 0.0;

  friend bool operator==(const Stat&, const Stat&) = default;
};

/// Median of an odd count is the middle order statistic; for an even
/// count the lower middle one is used.
[[nodiscard]] Stat stat_of(std::vector<double> values);

struct Summary {
  BenchConfig config;
  Stat throughput;
  Stat abort_rate;
  Stat committed;
  std::array<Stat, kAbortReasonCount> aborts_by_reason{};
  std::vector<RunMetrics> runs;

  friend bool operator==(const Summary&, const Summary&) = default;
};

/// Throws std::invalid_argument for an empty list.
[[nodiscard]] Summary aggregate_runs(const BenchConfig& config,
                                     std::vector<RunMetrics> runs);

inline constexpr const char* kAbortRateDenominator = "attempts";

[[nodiscard]] std::string csv_header();
[[nodiscard]] std::string to_csv(const Summary& s);
[[nodiscard]] std::string to_json(const Summary& s);
/// Inverse of to_json. Throws std::invalid_argument on malformed input.
[[nodiscard]] Summary summary_from_json(std::string_view text);

/// Writes to `path`, or stdout when empty. Throws IoError.
void emit(const Summary& s, OutputFormat format, const std::string& path);

}  // namespace grain::bench
