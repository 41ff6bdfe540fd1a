#include <gtest/gtest.h>

#include <algorithm>
#include <atomic>
#include <mutex>
#include <set>
#include <thread>
#include <vector>

#include "grain/sync/group_layout.hpp"
#include "grain/sync/occ_version.hpp"
#include "grain/sync/rw_lock_word.hpp"
#include "grain/sync/tictoc_stamp.hpp"
#include "grain/txn/contention.hpp"

namespace grain {
namespace {

template <class Fn>
void run_threads(int n, Fn&& fn) {
  std::vector<std::thread> ts;
  for (int i = 0; i < n; ++i) ts.emplace_back([&fn, i] { fn(i); });
  for (auto& t : ts) t.join();
}

// --- OccVersion -------------------------------------------------------------

TEST(OccVersion, StableReadUnlocked) {
  OccVersion v(5);
  EXPECT_EQ(v.stable_read(), 5U);
}

TEST(OccVersion, StableReadWaitsOutWriter) {
  OccVersion v(5);
  ASSERT_TRUE(v.try_lock());
  std::thread writer([&] {
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
    v.unlock_bump();
  });
  EXPECT_EQ(v.stable_read(), 6U);
  writer.join();
}

TEST(OccVersion, TryLock) {
  OccVersion v(3);
  EXPECT_TRUE(v.try_lock());
  EXPECT_TRUE(OccVersion::is_locked(v.load()));
  const auto before = v.load();
  EXPECT_FALSE(v.try_lock());
  EXPECT_EQ(v.load(), before);
}

TEST(OccVersion, UnlockBump) {
  OccVersion v(5);
  ASSERT_TRUE(v.try_lock());
  EXPECT_EQ(v.unlock_bump(), 6U);
  EXPECT_EQ(v.load(), 6U);
  ASSERT_TRUE(v.try_lock());
  EXPECT_EQ(v.unlock_bump(), 7U);
}

TEST(OccVersion, UnlockKeepsCounter) {
  OccVersion v(9);
  ASSERT_TRUE(v.try_lock());
  v.unlock();
  EXPECT_EQ(v.load(), 9U);
}

TEST(OccVersion, ContendedBumpsMatchTallies) {
  OccVersion v(100);
  constexpr int kThreads = 8;
  constexpr int kCycles = 1000;
  std::atomic<int> holders{0};
  std::atomic<bool> overlap{false};
  std::vector<int> successes(kThreads, 0);
  run_threads(kThreads, [&](int i) {
    for (int k = 0; k < kCycles; ++k) {
      if (!v.try_lock()) continue;
      if (holders.fetch_add(1) != 0) overlap = true;
      holders.fetch_sub(1);
      v.unlock_bump();
      ++successes[i];
    }
  });
  int total = 0;
  for (const auto s : successes) total += s;
  EXPECT_FALSE(overlap.load());
  EXPECT_EQ(v.load(), 100U + static_cast<std::uint64_t>(total));
}

TEST(OccVersion, StableReadsAreInstalledValues) {
  OccVersion v(0);
  std::atomic<bool> done{false};
  std::vector<std::uint64_t> seen;
  std::thread reader([&] {
    while (!done.load()) seen.push_back(v.stable_read());
  });
  std::vector<std::uint64_t> installed{0};
  for (int k = 0; k < 2000; ++k) {
    while (!v.try_lock()) {
    }
    installed.push_back(v.unlock_bump());
  }
  done = true;
  reader.join();
  const std::set<std::uint64_t> log(installed.begin(), installed.end());
  for (const auto s : seen) {
    ASSERT_FALSE(OccVersion::is_locked(s));
    ASSERT_TRUE(log.count(s)) << s;
  }
  EXPECT_TRUE(std::is_sorted(seen.begin(), seen.end()));
}

// --- TicTocStamp -------------------------------------------------------------

TEST(TicTocStamp, FreshIsZero) {
  TicTocStamp s;
  EXPECT_EQ(s.read_pair(), (TicTocPair{0, 0}));
}

TEST(TicTocStamp, ReadPair) {
  TicTocStamp s(3, 7);
  EXPECT_EQ(s.read_pair(), (TicTocPair{3, 7}));
}

TEST(TicTocStamp, ExtendRts) {
  TicTocStamp s(3, 5);
  EXPECT_TRUE(s.extend_rts(3, 8));
  EXPECT_EQ(s.read_pair(), (TicTocPair{3, 8}));
}

TEST(TicTocStamp, ExtendRtsStaleWts) {
  TicTocStamp s(9, 9);
  EXPECT_FALSE(s.extend_rts(3, 8));
  EXPECT_EQ(s.read_pair(), (TicTocPair{9, 9}));
}

TEST(TicTocStamp, ExtendRtsNoOp) {
  TicTocStamp s(3, 10);
  EXPECT_TRUE(s.extend_rts(3, 8));
  EXPECT_EQ(s.rts(), 10U);
}

TEST(TicTocStamp, ExtendRtsLockedByOther) {
  TicTocStamp s(3, 5);
  ASSERT_TRUE(s.try_lock());
  EXPECT_FALSE(s.extend_rts(3, 8));
  EXPECT_TRUE(s.extend_rts(3, 8, /*held_by_caller=*/true));
  s.unlock();
  EXPECT_EQ(s.read_pair(), (TicTocPair{3, 8}));
}

TEST(TicTocStamp, Install) {
  TicTocStamp s(3, 7);
  ASSERT_TRUE(s.try_lock());
  EXPECT_FALSE(s.try_lock());
  s.install(8);
  EXPECT_FALSE(s.locked());
  EXPECT_EQ(s.read_pair(), (TicTocPair{8, 8}));
}

TEST(TicTocStamp, SequentialInstallsIncrease) {
  TicTocStamp s;
  std::uint64_t last = 0;
  for (std::uint64_t ts = 1; ts <= 3; ++ts) {
    ASSERT_TRUE(s.try_lock());
    s.install(ts);
    EXPECT_GT(s.wts(), last);
    last = s.wts();
  }
}

TEST(TicTocStamp, PairsComeFromHistory) {
  TicTocStamp s(3, 7);
  std::mutex mu;
  std::set<std::pair<std::uint64_t, std::uint64_t>> history{{3, 7}};
  std::atomic<bool> done{false};
  std::vector<TicTocPair> seen;
  std::thread reader([&] {
    while (!done.load()) seen.push_back(s.read_pair());
  });
  std::uint64_t wts = 3;
  for (int k = 0; k < 3000; ++k) {
    if (k % 3 == 0) {
      // extension
      const auto target = s.rts() + 2;
      {
        std::lock_guard lock(mu);
        history.insert({wts, target});
      }
      ASSERT_TRUE(s.extend_rts(wts, target));
    } else {
      while (!s.try_lock()) {
      }
      const auto ts = std::max(s.rts(), wts) + 1;
      {
        std::lock_guard lock(mu);
        history.insert({ts, ts});
      }
      s.install(ts);
      wts = ts;
    }
  }
  done = true;
  reader.join();
  for (const auto& p : seen) {
    ASSERT_GE(p.rts, p.wts);
    ASSERT_TRUE(history.count({p.wts, p.rts})) << p.wts << "," << p.rts;
  }
}

// --- RwLockWord --------------------------------------------------------------

RwLockWord with_readers(std::uint32_t n) {
  RwState s;
  s.readers = n;
  return RwLockWord(RwLockWord::encode(s));
}

TEST(RwLockWord, WriteOnFree) {
  RwLockWord w;
  EXPECT_TRUE(w.try_acquire(LockKind::write));
  EXPECT_TRUE(w.state().writer);
  EXPECT_FALSE(w.try_acquire(LockKind::read));
  EXPECT_FALSE(w.try_acquire(LockKind::write));
}

TEST(RwLockWord, WriteWithReaders) {
  auto w = with_readers(2);
  EXPECT_FALSE(w.try_acquire(LockKind::write));
  EXPECT_EQ(w.state().readers, 2U);
}

TEST(RwLockWord, ReadWithReaders) {
  auto w = with_readers(2);
  EXPECT_TRUE(w.try_acquire(LockKind::read));
  EXPECT_EQ(w.state().readers, 3U);
}

TEST(RwLockWord, ReleaseRead) {
  auto w = with_readers(3);
  w.release(LockKind::read);
  EXPECT_EQ(w.state().readers, 2U);
}

TEST(RwLockWord, ReleaseWriteBump) {
  RwState s;
  s.writer = true;
  s.version = 4;
  RwLockWord w(RwLockWord::encode(s));
  w.release(LockKind::write, true);
  EXPECT_FALSE(w.state().writer);
  EXPECT_EQ(w.state().version, 5U);
}

TEST(RwLockWord, VersionWraps) {
  RwState s;
  s.writer = true;
  s.version = static_cast<std::uint32_t>(RwLockWord::kVersionMask);
  s.contention = 7;
  RwLockWord w(RwLockWord::encode(s));
  w.release(LockKind::write, true);
  EXPECT_EQ(w.state().version, 0U);
  EXPECT_EQ(w.state().contention, 7U);  // no carry into neighbours
}

TEST(RwLockWord, Upgrade) {
  RwLockWord w;
  ASSERT_TRUE(w.try_acquire(LockKind::read));
  ASSERT_TRUE(w.try_acquire(LockKind::read));
  EXPECT_FALSE(w.try_upgrade());
  w.release(LockKind::read);
  EXPECT_TRUE(w.try_upgrade());
  EXPECT_TRUE(w.state().writer);
  EXPECT_EQ(w.state().readers, 0U);
}

TEST(RwLockWord, EncodeDecodeRoundTrip) {
  RwState s{false, 12345, AdaptiveMode::pessimistic, 200, 0x7FFFFF};
  const auto d = RwLockWord::decode(RwLockWord::encode(s));
  EXPECT_EQ(d.readers, 12345U);
  EXPECT_EQ(d.mode, AdaptiveMode::pessimistic);
  EXPECT_EQ(d.contention, 200U);
  EXPECT_EQ(d.version, 0x7FFFFFU);
}

TEST(RwLockWord, StressLeavesCleanWordAndVersionCount) {
  RwLockWord w;
  constexpr int kThreads = 8;
  std::vector<int> writes(kThreads, 0);
  std::atomic<bool> broken{false};
  run_threads(kThreads, [&](int i) {
    for (int k = 0; k < 2000; ++k) {
      const auto kind = (k + i) % 3 == 0 ? LockKind::write : LockKind::read;
      if (!w.try_acquire(kind)) continue;
      const auto s = w.state();
      if (s.writer && s.readers != 0) broken = true;
      if (kind == LockKind::write) {
        ++writes[i];
        w.release(kind, true);
      } else {
        w.release(kind);
      }
    }
  });
  int total = 0;
  for (const auto n : writes) total += n;
  const auto s = w.state();
  EXPECT_FALSE(broken.load());
  EXPECT_FALSE(s.writer);
  EXPECT_EQ(s.readers, 0U);
  EXPECT_EQ(s.version, static_cast<std::uint32_t>(total));
}

// --- adaptive transition -----------------------------------------------------

constexpr std::uint32_t kPess = 3;
constexpr std::uint32_t kOpt = 128;

TEST(Adaptive, ThresholdCrossing) {
  RwState s;
  s.contention = kPess - 1;
  RwLockWord w(RwLockWord::encode(s));
  EXPECT_EQ(w.transition(AdaptiveEvent::abort_blamed, kPess, kOpt),
            AdaptiveMode::pessimistic);
  EXPECT_EQ(w.state().contention, 0U);
}

TEST(Adaptive, BelowThresholdStaysOptimistic) {
  RwLockWord w;
  for (std::uint32_t i = 0; i + 1 < kPess; ++i) {
    EXPECT_EQ(w.transition(AdaptiveEvent::abort_blamed, kPess, kOpt),
              AdaptiveMode::optimistic);
  }
  EXPECT_EQ(w.state().contention, kPess - 1);
}

TEST(Adaptive, CleanAccessWhileOptimisticIsNoOp) {
  RwState s;
  s.contention = 2;
  RwLockWord w(RwLockWord::encode(s));
  const auto before = w.load();
  EXPECT_EQ(w.transition(AdaptiveEvent::clean_access, kPess, kOpt),
            AdaptiveMode::optimistic);
  EXPECT_EQ(w.load(), before);
}

TEST(Adaptive, HysteresisExit) {
  RwState s;
  s.mode = AdaptiveMode::pessimistic;
  RwLockWord w(RwLockWord::encode(s));
  for (std::uint32_t i = 0; i + 1 < kOpt; ++i) {
    ASSERT_EQ(w.transition(AdaptiveEvent::clean_access, kPess, kOpt),
              AdaptiveMode::pessimistic);
  }
  EXPECT_EQ(w.transition(AdaptiveEvent::clean_access, kPess, kOpt),
            AdaptiveMode::optimistic);
}

TEST(Adaptive, BlameWhilePessimisticResetsStreak) {
  RwState s;
  s.mode = AdaptiveMode::pessimistic;
  RwLockWord w(RwLockWord::encode(s));
  for (int i = 0; i < 100; ++i) {
    (void)w.transition(AdaptiveEvent::clean_access, kPess, kOpt);
  }
  EXPECT_EQ(w.transition(AdaptiveEvent::abort_blamed, kPess, kOpt),
            AdaptiveMode::pessimistic);
  for (std::uint32_t i = 0; i + 1 < kOpt; ++i) {
    ASSERT_EQ(w.transition(AdaptiveEvent::clean_access, kPess, kOpt),
              AdaptiveMode::pessimistic);
  }
}

TEST(Adaptive, TransitionPreservesLockBits) {
  RwLockWord w;
  ASSERT_TRUE(w.try_acquire(LockKind::read));
  for (std::uint32_t i = 0; i < kPess; ++i) {
    (void)w.transition(AdaptiveEvent::abort_blamed, kPess, kOpt);
  }
  EXPECT_EQ(w.state().readers, 1U);
  EXPECT_EQ(w.state().mode, AdaptiveMode::pessimistic);
}

TEST(Adaptive, ContentionSaturates) {
  RwLockWord w;
  for (int i = 0; i < 1000; ++i) {
    (void)w.transition(AdaptiveEvent::abort_blamed, 255, 255);
    ASSERT_LE(w.state().contention, RwLockWord::kContentionMax);
  }
}

// --- GroupLayout -------------------------------------------------------------

TEST(GroupLayout, Coarse) {
  const auto l = GroupLayout::coarse(10);
  EXPECT_EQ(l.num_groups(), 1U);
  EXPECT_EQ(l.columns(0).size(), 10U);
}

TEST(GroupLayout, EvenOdd) {
  const auto l = GroupLayout::even_odd(10);
  ASSERT_EQ(l.num_groups(), 2U);
  EXPECT_EQ(l.columns(0), (std::vector<std::size_t>{0, 2, 4, 6, 8}));
  EXPECT_EQ(l.columns(1), (std::vector<std::size_t>{1, 3, 5, 7, 9}));
  EXPECT_EQ(l.group_of(7), 1U);
}

TEST(GroupLayout, RejectsBadPartitions) {
  EXPECT_THROW(GroupLayout(3, {}), std::invalid_argument);
  EXPECT_THROW(GroupLayout(3, {{0, 1}, {}}), std::invalid_argument);
  EXPECT_THROW(GroupLayout(3, {{0, 1}, {1, 2}}), std::invalid_argument);
  EXPECT_THROW(GroupLayout(3, {{0, 1}}), std::invalid_argument);
  EXPECT_THROW(GroupLayout(3, {{0, 1, 5}}), std::invalid_argument);
}

// --- contention manager ------------------------------------------------------

TEST(ContentionManager, OlderWins) {
  EXPECT_EQ(cm_resolve(10, 4), CmDecision::wound_owner);
  EXPECT_EQ(cm_resolve(4, 10), CmDecision::abort_self);
}

TEST(ContentionRegistry, SlotsAreExclusive) {
  ContentionRegistry reg(4);
  std::set<std::uint32_t> slots;
  for (int i = 0; i < 4; ++i) slots.insert(reg.acquire(i + 1));
  EXPECT_EQ(slots.size(), 4U);
  EXPECT_THROW((void)reg.acquire(9), std::runtime_error);
  reg.release(*slots.begin());
  EXPECT_EQ(reg.acquire(9), *slots.begin());
  EXPECT_EQ(reg.priority(*slots.begin()), 9U);
}

}  // namespace
}  // namespace grain
