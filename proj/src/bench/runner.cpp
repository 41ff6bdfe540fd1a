#include <pthread.h>
#include <sched.h>

#include <atomic>
#include <chrono>
#include <optional>
#include <thread>

#include "grain/bench/bench.hpp"
#include "grain/txn/engine.hpp"
#include "grain/txn/runner.hpp"
#include "grain/workload/tpcc.hpp"
#include "grain/workload/ycsb.hpp"

namespace grain::bench {

namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

void pin_to_cpu(unsigned i) {
  const auto n = std::max(1U, std::thread::hardware_concurrency());
  cpu_set_t set;
  CPU_ZERO(&set);
  CPU_SET(i % n, &set);
  pthread_setaffinity_np(pthread_self(), sizeof set, &set);
}

struct WorkerStats {
  AttemptTally tally;
  std::array<std::uint64_t, tpcc::kTxnTypeCount> by_type{};
  std::array<std::uint64_t, kRetryBuckets> retries{};
};

struct Shared {
  std::atomic<bool> measuring{false};
  std::atomic<bool> stop{false};
};

// One logical transaction; stats only count once the window is open.
template <class Body>
void run_one(Engine& engine, Body&& body, Shared& shared, WorkerStats& stats,
             std::size_t type) {
  const bool counted = shared.measuring.load(std::memory_order_relaxed);
  AttemptTally scratch;
  RunOptions opts;
  opts.stop = &shared.stop;
  opts.tally = counted ? &stats.tally : &scratch;
  const auto r = run_transaction(engine, body, opts);
  if (counted && r.outcome.is_committed()) {
    ++stats.by_type[type];
    ++stats.retries[retry_bucket(r.retries)];
  }
}

}  // namespace

std::uint64_t RunMetrics::total_aborts() const noexcept {
  std::uint64_t n = 0;
  for (const auto a : aborts) n += a;
  return n;
}

std::size_t retry_bucket(std::uint64_t retries) noexcept {
  std::size_t b = 0;
  while (retries != 0 && b + 1 < kRetryBuckets) {
    ++b;
    retries >>= 1;
  }
  return b;
}

RunMetrics run_benchmark(const BenchConfig& config, unsigned run_index) {
  validate(config);
  const auto seed = mix(config.seed + run_index);
  Engine engine;

  std::optional<tpcc::Db> db;
  Table* ycsb_table = nullptr;
  ycsb::Config ycfg;
  std::optional<ZipfianParams> zparams;
  if (config.workload == Workload::tpcc) {
    tpcc::Config tcfg;
    tcfg.warehouses = config.warehouses;
    tcfg.layout = config.granularity == Granularity::coarse
                      ? tpcc::Layout::coarse
                      : tpcc::Layout::fine_split;
    tcfg.policy = config.cc;
    tcfg.seed = seed;
    db = tpcc::load(engine, tcfg);
  } else {
    ycfg.num_keys = config.num_keys;
    ycfg.theta = config.theta;
    ycfg.layout = config.granularity == Granularity::coarse
                      ? ycsb::Layout::coarse
                      : ycsb::Layout::fine_even_odd;
    ycfg.policy = config.cc;
    ycfg.seed = seed;
    ycsb_table = &ycsb::load(engine, ycfg);
    zparams.emplace(ycfg.num_keys, ycfg.theta);
  }

  Shared shared;
  std::vector<WorkerStats> stats(config.threads);
  std::vector<std::thread> workers;
  workers.reserve(config.threads);
  for (unsigned i = 0; i < config.threads; ++i) {
    workers.emplace_back([&, i] {
      if (config.pin_threads) pin_to_cpu(i);
      auto& st = stats[i];
      if (db) {
        tpcc::InputGenerator gen(db->warehouses, i % db->warehouses + 1,
                                 mix(seed ^ (i + 1)));
        while (!shared.stop.load(std::memory_order_relaxed)) {
          const auto in = gen.next();
          run_one(engine,
                  [&](TxContext& ctx) { tpcc::execute(ctx, *db, in); },
                  shared, st, static_cast<std::size_t>(in.type));
        }
      } else {
        ycsb::Generator gen(ycfg, *zparams, i);
        while (!shared.stop.load(std::memory_order_relaxed)) {
          const auto plan = gen.next();
          run_one(engine,
                  [&](TxContext& ctx) {
                    ycsb::run(ctx, *ycsb_table, ycfg, plan);
                  },
                  shared, st, 0);
        }
      }
    });
  }

  using Clock = std::chrono::steady_clock;
  std::this_thread::sleep_for(std::chrono::duration<double>(config.warmup_secs));
  shared.measuring.store(true, std::memory_order_relaxed);
  const auto t0 = Clock::now();
  std::this_thread::sleep_for(std::chrono::duration<double>(config.duration_secs));
  shared.stop.store(true, std::memory_order_relaxed);
  const auto t1 = Clock::now();
  for (auto& w : workers) w.join();

  RunMetrics m;
  m.wall_secs = std::chrono::duration<double>(t1 - t0).count();
  AttemptTally total;
  std::array<std::uint64_t, tpcc::kTxnTypeCount> by_type{};
  for (const auto& s : stats) {
    total += s.tally;
    for (std::size_t k = 0; k < by_type.size(); ++k) by_type[k] += s.by_type[k];
    for (std::size_t k = 0; k < kRetryBuckets; ++k) {
      m.retries_histogram[k] += s.retries[k];
    }
  }
  m.committed = total.commits;
  m.aborts = total.aborts;
  m.throughput = m.wall_secs > 0 ? static_cast<double>(m.committed) / m.wall_secs : 0;
  m.abort_rate = m.attempts() == 0 ? 0.0
                                   : static_cast<double>(m.total_aborts()) /
                                         static_cast<double>(m.attempts());
  if (db) {
    for (std::size_t k = 0; k < by_type.size(); ++k) {
      m.commits_by_type[tpcc::to_string(static_cast<tpcc::TxnType>(k))] =
          by_type[k];
    }
  } else {
    m.commits_by_type["ycsb"] = by_type[0];
  }
  m.locks_clean = engine.sweep_locks().clean();

  if (db) {
    const auto report = tpcc::consistency_check(*db);
    if (!report.ok()) throw ConsistencyViolation(report.summary());
  }
  if (!m.locks_clean) {
    throw ConsistencyViolation("lock sweep found held words after the run");
  }
  return m;
}

}  // namespace grain::bench
