#include <CLI11.hpp>

#include "grain/bench/bench.hpp"

namespace grain::bench {

const char* to_string(Workload w) noexcept {
  return w == Workload::ycsb ? "ycsb" : "tpcc";
}

const char* to_string(Granularity g) noexcept {
  return g == Granularity::coarse ? "coarse" : "fine";
}

const char* to_string(OutputFormat f) noexcept {
  return f == OutputFormat::csv ? "csv" : "json";
}

void validate(const BenchConfig& c) {
  if (c.threads == 0) throw UsageError("--threads must be >= 1");
  if (!(c.duration_secs > 0.0)) throw UsageError("--duration must be > 0");
  if (c.runs == 0 || c.runs % 2 == 0) {
    throw UsageError("--runs must be odd so the median is one run");
  }
  if (c.warehouses == 0) throw UsageError("--warehouses must be >= 1");
  if (!(c.theta >= 0.0 && c.theta < 1.0)) {
    throw UsageError("--theta must be in [0, 1)");
  }
  if (c.num_keys == 0) throw UsageError("--num-keys must be >= 1");
  if (!(c.warmup_secs >= 0.0)) throw UsageError("--warmup must be >= 0");
}

BenchConfig parse_config(int argc, const char* const* argv) {
  BenchConfig c;
  CLI::App app{"grain-bench: concurrency-control benchmark runner"};

  std::string workload = "ycsb", cc = "occ", granularity = "coarse",
              format = "csv";
  std::vector<std::string> policies;
  for (const auto p : kAllPolicies) policies.emplace_back(to_string(p));

  app.add_option("--workload", workload, "ycsb | tpcc")
      ->check(CLI::IsMember({"ycsb", "tpcc"}));
  app.add_option("--cc", cc, "occ | tictoc | 2pl | swisstm | adaptive")
      ->check(CLI::IsMember(policies));
  app.add_option("--granularity", granularity, "coarse | fine")
      ->check(CLI::IsMember({"coarse", "fine"}));
  app.add_option("--threads", c.threads, "worker threads");
  app.add_option("--duration", c.duration_secs, "seconds per run");
  app.add_option("--runs", c.runs, "runs to aggregate (odd)");
  app.add_option("--warehouses", c.warehouses, "TPC-C warehouses");
  app.add_option("--theta", c.theta, "YCSB Zipfian exponent");
  app.add_option("--num-keys", c.num_keys, "YCSB table size");
  app.add_option("--seed", c.seed, "base random seed");
  app.add_option("--output,-o", c.output, "output file (default stdout)");
  app.add_option("--format", format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--warmup", c.warmup_secs, "unmeasured seconds before each run");
  app.add_flag("--pin", c.pin_threads, "pin worker i to cpu i mod ncpu");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::ParseError& e) {
    throw UsageError(std::string(e.what()) + "\n\n" + app.help());
  }
  c.workload = workload == "ycsb" ? Workload::ycsb : Workload::tpcc;
  c.cc = *parse_policy(cc);
  c.granularity =
      granularity == "coarse" ? Granularity::coarse : Granularity::fine;
  c.format = format == "csv" ? OutputFormat::csv : OutputFormat::json;
  try {
    validate(c);
  } catch (const UsageError& e) {
    throw UsageError(std::string(e.what()) + "\n\n" + app.help());
  }
  return c;
}

}  // namespace grain::bench
