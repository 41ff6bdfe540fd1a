#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "grain/bench/bench.hpp"

namespace grain::bench {

using nlohmann::ordered_json;

Stat stat_of(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("stat_of: no values");
  std::sort(values.begin(), values.end());
  return {values[(values.size() - 1) / 2], values.front(), values.back()};
}

Summary aggregate_runs(const BenchConfig& config, std::vector<RunMetrics> runs) {
  if (runs.empty()) throw std::invalid_argument("aggregate_runs: no runs");
  Summary s;
  s.config = config;
  auto collect = [&](auto&& get) {
    std::vector<double> v;
    for (const auto& r : runs) v.push_back(static_cast<double>(get(r)));
    return stat_of(std::move(v));
  };
  s.throughput = collect([](const RunMetrics& r) { return r.throughput; });
  s.abort_rate = collect([](const RunMetrics& r) { return r.abort_rate; });
  s.committed = collect([](const RunMetrics& r) { return r.committed; });
  for (std::size_t k = 0; k < kAbortReasonCount; ++k) {
    s.aborts_by_reason[k] =
        collect([k](const RunMetrics& r) { return r.aborts[k]; });
  }
  s.runs = std::move(runs);
  return s;
}

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ordered_json stat_json(const Stat& s) {
  return ordered_json{{"median", s.median}, {"min", s.min}, {"max", s.max}};
}

Stat stat_from(const ordered_json& j) {
  return {j.at("median").get<double>(), j.at("min").get<double>(),
          j.at("max").get<double>()};
}

template <class E, std::size_t N>
E enum_from(const std::string& s, const std::array<E, N>& all) {
  for (const auto e : all) {
    if (s == to_string(e)) return e;
  }
  throw std::invalid_argument("unknown value: " + s);
}

constexpr std::array<Workload, 2> kWorkloads{Workload::ycsb, Workload::tpcc};
constexpr std::array<Granularity, 2> kGrains{Granularity::coarse,
                                             Granularity::fine};
constexpr std::array<OutputFormat, 2> kFormats{OutputFormat::csv,
                                               OutputFormat::json};

}  // namespace

std::string csv_header() {
  std::string h =
      "workload,cc,granularity,threads,throughput_med,abort_rate_med,"
      "throughput_min,throughput_max,abort_rate_min,abort_rate_max,"
      "committed_med";
  for (const auto r : kAllAbortReasons) {
    h += ",aborts_" + std::string(to_string(r)) + "_med";
  }
  h += ",warehouses,theta,num_keys,duration_secs,runs,seed,"
       "abort_rate_denominator";
  return h;
}

std::string to_csv(const Summary& s) {
  const auto& c = s.config;
  std::string row = std::string(to_string(c.workload)) + "," +
                    std::string(to_string(c.cc)) + "," +
                    to_string(c.granularity) + "," + std::to_string(c.threads) +
                    "," + num(s.throughput.median) + "," +
                    num(s.abort_rate.median) + "," + num(s.throughput.min) +
                    "," + num(s.throughput.max) + "," + num(s.abort_rate.min) +
                    "," + num(s.abort_rate.max) + "," + num(s.committed.median);
  for (const auto& st : s.aborts_by_reason) row += "," + num(st.median);
  row += "," + std::to_string(c.warehouses) + "," + num(c.theta) + "," +
         std::to_string(c.num_keys) + "," + num(c.duration_secs) + "," +
         std::to_string(c.runs) + "," + std::to_string(c.seed) + "," +
         kAbortRateDenominator;
  return csv_header() + "\n" + row + "\n";
}

std::string to_json(const Summary& s) {
  const auto& c = s.config;
  ordered_json j;
  j["config"] = {{"workload", to_string(c.workload)},
                 {"cc", std::string(to_string(c.cc))},
                 {"granularity", to_string(c.granularity)},
                 {"threads", c.threads},
                 {"duration_secs", c.duration_secs},
                 {"runs", c.runs},
                 {"warehouses", c.warehouses},
                 {"theta", c.theta},
                 {"num_keys", c.num_keys},
                 {"seed", c.seed},
                 {"output", c.output},
                 {"format", to_string(c.format)},
                 {"pin_threads", c.pin_threads},
                 {"warmup_secs", c.warmup_secs}};
  j["abort_rate_denominator"] = kAbortRateDenominator;
  j["throughput"] = stat_json(s.throughput);
  j["abort_rate"] = stat_json(s.abort_rate);
  j["committed"] = stat_json(s.committed);
  ordered_json by_reason = ordered_json::object();
  for (std::size_t k = 0; k < kAbortReasonCount; ++k) {
    by_reason[std::string(to_string(kAllAbortReasons[k]))] =
        stat_json(s.aborts_by_reason[k]);
  }
  j["aborts_by_reason"] = std::move(by_reason);
  ordered_json runs = ordered_json::array();
  for (const auto& r : s.runs) {
    ordered_json aborts = ordered_json::object();
    for (std::size_t k = 0; k < kAbortReasonCount; ++k) {
      aborts[std::string(to_string(kAllAbortReasons[k]))] = r.aborts[k];
    }
    ordered_json types = ordered_json::object();
    for (const auto& [name, n] : r.commits_by_type) types[name] = n;
    runs.push_back({{"committed", r.committed},
                    {"throughput", r.throughput},
                    {"abort_rate", r.abort_rate},
                    {"aborts", std::move(aborts)},
                    {"commits_by_type", std::move(types)},
                    {"retries_histogram", r.retries_histogram},
                    {"wall_secs", r.wall_secs},
                    {"locks_clean", r.locks_clean}});
  }
  j["runs"] = std::move(runs);
  return j.dump(2) + "\n";
}

Summary summary_from_json(std::string_view text) {
  try {
    const auto j = ordered_json::parse(text);
    Summary s;
    const auto& c = j.at("config");
    s.config.workload = enum_from(c.at("workload").get<std::string>(), kWorkloads);
    const auto cc = parse_policy(c.at("cc").get<std::string>());
    if (!cc) throw std::invalid_argument("unknown cc");
    s.config.cc = *cc;
    s.config.granularity =
        enum_from(c.at("granularity").get<std::string>(), kGrains);
    s.config.threads = c.at("threads").get<unsigned>();
    s.config.duration_secs = c.at("duration_secs").get<double>();
    s.config.runs = c.at("runs").get<unsigned>();
    s.config.warehouses = c.at("warehouses").get<unsigned>();
    s.config.theta = c.at("theta").get<double>();
    s.config.num_keys = c.at("num_keys").get<std::uint64_t>();
    s.config.seed = c.at("seed").get<std::uint64_t>();
    s.config.output = c.at("output").get<std::string>();
    s.config.format = enum_from(c.at("format").get<std::string>(), kFormats);
    s.config.pin_threads = c.at("pin_threads").get<bool>();
    s.config.warmup_secs = c.at("warmup_secs").get<double>();
    s.throughput = stat_from(j.at("throughput"));
    s.abort_rate = stat_from(j.at("abort_rate"));
    s.committed = stat_from(j.at("committed"));
    for (std::size_t k = 0; k < kAbortReasonCount; ++k) {
      s.aborts_by_reason[k] = stat_from(
          j.at("aborts_by_reason").at(std::string(to_string(kAllAbortReasons[k]))));
    }
    for (const auto& r : j.at("runs")) {
      RunMetrics m;
      m.committed = r.at("committed").get<std::uint64_t>();
      m.throughput = r.at("throughput").get<double>();
      m.abort_rate = r.at("abort_rate").get<double>();
      for (std::size_t k = 0; k < kAbortReasonCount; ++k) {
        m.aborts[k] = r.at("aborts")
                          .at(std::string(to_string(kAllAbortReasons[k])))
                          .get<std::uint64_t>();
      }
      for (const auto& [name, n] : r.at("commits_by_type").items()) {
        m.commits_by_type[name] = n.get<std::uint64_t>();
      }
      m.retries_histogram =
          r.at("retries_histogram").get<std::array<std::uint64_t, kRetryBuckets>>();
      m.wall_secs = r.at("wall_secs").get<double>();
      m.locks_clean = r.at("locks_clean").get<bool>();
      s.runs.push_back(std::move(m));
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("summary json: ") + e.what());
  }
}

void emit(const Summary& s, OutputFormat format, const std::string& path) {
  const auto text = format == OutputFormat::csv ? to_csv(s) : to_json(s);
  if (path.empty()) {
    std::cout << text << std::flush;
    if (!std::cout) throw IoError("write to stdout failed");
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write to " + path + " failed");
}

}  // namespace grain::bench
