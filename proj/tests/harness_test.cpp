#include <gtest/gtest.h>

#include <map>
#include <optional>
#include <vector>

#include "grain/storage/key.hpp"
#include "scenarios.hpp"

namespace grain {
namespace {

using harness::Script;
using harness::ScriptResult;
using harness::scripted_run;

std::string name_of(PolicyId p) { return std::string(to_string(p)); }

// --- read-then-overwrite interleaving ----------------------------------------

TEST(Interleaving, OccAbortsReader) {
  Engine e;
  scenarios::two_row_fixture(e, PolicyId::occ);
  auto s = scenarios::interleaving();
  s.expect_committed("T2").expect_aborted("T1", AbortReason::read_validation);
  const auto r = scripted_run(e, s);
  EXPECT_TRUE(r.ok()) << r.diff();
  EXPECT_EQ(harness::peek(e, "t", scenarios::kA, "v"), 10);
  EXPECT_EQ(harness::peek(e, "t", scenarios::kB, "v"), 2);
}

TEST(Interleaving, TicTocCommitsBothAfterWarmup) {
  Engine e;
  scenarios::two_row_fixture(e, PolicyId::tictoc);
  auto s = scenarios::append(scenarios::warmup(), scenarios::interleaving());
  s.expect_committed("T0", 1).expect_committed("T2", 2).expect_committed("T1", 1);
  const auto r = scripted_run(e, s);
  ASSERT_TRUE(r.ok()) << r.diff();
  EXPECT_LT(*r.outcomes.at("T1").commit_ts(), *r.outcomes.at("T2").commit_ts());
  EXPECT_EQ(harness::peek(e, "t", scenarios::kA, "v"), 10);
  EXPECT_EQ(harness::peek(e, "t", scenarios::kB, "v"), 20);
}

TEST(Interleaving, TicTocWithoutWarmupAbortsReader) {
  // all-zero stamps: T1 must commit at ts 1 but A was rewritten at ts 1
  Engine e;
  scenarios::two_row_fixture(e, PolicyId::tictoc);
  const auto r = scripted_run(e, scenarios::interleaving());
  EXPECT_TRUE(r.outcomes.at("T2").is_committed());
  ASSERT_FALSE(r.outcomes.at("T1").is_committed());
  EXPECT_EQ(r.outcomes.at("T1").reason(), AbortReason::rts_extension_failed);
}

TEST(Interleaving, TwoPlRefusesWriter) {
  Engine e;
  scenarios::two_row_fixture(e, PolicyId::two_pl);
  auto s = scenarios::interleaving();
  s.expect_aborted("T2", AbortReason::lock_busy).expect_committed("T1");
  const auto r = scripted_run(e, s);
  EXPECT_TRUE(r.ok()) << r.diff();
}

TEST(Interleaving, TextFormMatchesBuilder) {
  const auto text = R"(
    # warm-up
    T0 READ t A v
    T0 WRITE t C v=30
    T0 COMMIT
    T1 READ t A v
    T2 WRITE t A v=10
    T1 WRITE t B v=20
    T2 COMMIT
    T1 COMMIT
    T1 EXPECT committed ts=1
    T2 EXPECT committed ts=2
  )";
  const auto parsed = Script::parse(text);
  auto built = scenarios::append(scenarios::warmup(), scenarios::interleaving());
  built.expect_committed("T1", 1).expect_committed("T2", 2);
  EXPECT_EQ(parsed, built);
  Engine e;
  scenarios::two_row_fixture(e, PolicyId::tictoc);
  EXPECT_TRUE(scripted_run(e, parsed).ok());
}

// --- District scenario -------------------------------------------------------

TEST(District, CoarseOccFalseConflict) {
  Engine e;
  scenarios::district_fixture(e, false);
  auto s = scenarios::district_script();
  s.expect_committed("T2").expect_aborted("T1", AbortReason::read_validation);
  const auto r = scripted_run(e, s);
  EXPECT_TRUE(r.ok()) << r.diff();
}

TEST(District, FineOccCommitsBoth) {
  Engine e;
  scenarios::district_fixture(e, true);
  auto s = scenarios::district_script();
  s.expect_committed("T2").expect_committed("T1");
  const auto r = scripted_run(e, s);
  EXPECT_TRUE(r.ok()) << r.diff();
  EXPECT_EQ(harness::peek(e, "district", scenarios::kDistrict, "ytd"), 3'001'000);
}

TEST(District, FineHoldsForEveryOptimisticPolicy) {
  for (const auto p : {PolicyId::occ, PolicyId::tictoc, PolicyId::swisstm,
                       PolicyId::adaptive}) {
    Engine e;
    scenarios::district_fixture(e, true, p);
    auto s = scenarios::district_script();
    s.expect_committed("T2").expect_committed("T1");
    const auto r = scripted_run(e, s);
    EXPECT_TRUE(r.ok()) << name_of(p) << "\n" << r.diff();
  }
}

// --- phantoms and absent keys ------------------------------------------------

TEST(Phantom, CommittedInsertIntoScannedRange) {
  for (const auto p : kAllPolicies) {
    Engine e;
    harness::make_table(e, "t", {"v"}, p);
    harness::fixture(e, {{"t", harness::parse_key("k:1"), {{"v", 1}}},
                         {"t", harness::parse_key("k:5"), {{"v", 5}}}});
    const auto s = Script::parse(R"(
      T1 SCAN t k:0 k:10
      T2 INSERT t k:3 v=3
      T2 COMMIT
      T1 WRITE t k:1 v=100
      T1 COMMIT
      T2 EXPECT committed
      T1 EXPECT aborted scan_validation
    )");
    const auto r = scripted_run(e, s);
    EXPECT_TRUE(r.ok()) << name_of(p) << "\n" << r.diff();
    ASSERT_EQ(r.reads.size(), 1U);
    EXPECT_EQ(r.reads[0].scan_keys.size(), 2U);
  }
}

TEST(Phantom, DescendingLimitScanSeesNewestFirst) {
  Engine e;
  harness::make_table(e, "t", {"v"}, PolicyId::occ);
  harness::fixture(e, {{"t", harness::parse_key("k:1/1"), {}},
                       {"t", harness::parse_key("k:1/7"), {}},
                       {"t", harness::parse_key("k:1/4"), {}},
                       {"t", harness::parse_key("k:2/9"), {}}});
  const auto r = scripted_run(e, Script::parse("T1 SCAN t k:1 k:2 desc 2\nT1 COMMIT"));
  ASSERT_EQ(r.reads.size(), 1U);
  EXPECT_EQ(r.reads[0].scan_keys,
            (std::vector<std::string>{harness::parse_key("k:1/7"),
                                      harness::parse_key("k:1/4")}));
}

TEST(Absent, LaterInsertFailsReader) {
  Engine e;
  harness::make_table(e, "t", {"v"}, PolicyId::occ);
  harness::fixture(e, {{"t", "x", {{"v", 0}}}});
  const auto s = Script::parse(R"(
    T1 READ t missing v
    T2 INSERT t missing v=1
    T2 COMMIT
    T1 WRITE t x v=1
    T1 COMMIT
    T1 EXPECT aborted scan_validation
  )");
  const auto r = scripted_run(e, s);
  EXPECT_TRUE(r.ok()) << r.diff();
  ASSERT_EQ(r.reads.size(), 1U);
  EXPECT_FALSE(r.reads[0].found);
}

// --- script validity and harness behaviour -----------------------------------

TEST(ScriptText, SyntaxErrorsCarryLineNumbers) {
  try {
    (void)Script::parse("T1 READ t A\nT1 FROB t A\n");
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
  EXPECT_THROW((void)Script::parse("T1 WRITE t A v"), std::invalid_argument);
  EXPECT_THROW((void)Script::parse("T1 SCAN t a b sideways"), std::invalid_argument);
  EXPECT_THROW((void)Script::parse("T1 COMMIT\nT1 EXPECT aborted nonsense"),
               std::invalid_argument);
  EXPECT_THROW((void)harness::parse_key("k:1/x"), std::invalid_argument);
  EXPECT_EQ(harness::parse_key("k:1/2"), KeyBuilder{}.u32(1).u32(2).build());
  EXPECT_EQ(harness::parse_key("plain"), "plain");
}

TEST(ScriptText, ValidityRules) {
  EXPECT_THROW((void)Script::parse("T1 COMMIT\nT1 READ t A"), std::invalid_argument);
  EXPECT_THROW((void)Script::parse("T1 COMMIT\nT1 COMMIT"), std::invalid_argument);
  EXPECT_THROW((void)Script::parse("T1 READ t A\nT1 EXPECT committed"),
               std::invalid_argument);
  Engine e;
  Script bad;
  bad.commit("T1").read("T1", "t", "A");
  EXPECT_THROW((void)scripted_run(e, bad), std::invalid_argument);
}

TEST(Harness, UnknownTableIsAScriptError) {
  Engine e;
  EXPECT_THROW((void)scripted_run(e, Script::parse("T1 READ nope A\nT1 COMMIT")),
               std::invalid_argument);
}

TEST(Harness, UnfinishedLabelIsUserAbort) {
  Engine e;
  scenarios::two_row_fixture(e, PolicyId::two_pl);
  Script s;
  s.write("T1", "t", scenarios::kA, {{"v", 9}});
  const auto r = scripted_run(e, s);
  EXPECT_EQ(r.outcomes.at("T1"), CommitOutcome::aborted(AbortReason::user_abort));
  EXPECT_TRUE(e.sweep_locks().clean());
  EXPECT_EQ(harness::peek(e, "t", scenarios::kA, "v"), 1);
}

TEST(Harness, AbortedLabelSkipsLaterSteps) {
  Engine e;
  scenarios::two_row_fixture(e, PolicyId::two_pl);
  Script s;
  s.write("T1", "t", scenarios::kA, {{"v", 9}})
      .read("T2", "t", scenarios::kA)  // LOCK_BUSY here
      .write("T2", "t", scenarios::kB, {{"v", 9}})
      .commit("T2")
      .commit("T1")
      .expect_aborted("T2", AbortReason::lock_busy)
      .expect_committed("T1");
  const auto r = scripted_run(e, s);
  EXPECT_TRUE(r.ok()) << r.diff();
  EXPECT_EQ(harness::peek(e, "t", scenarios::kB, "v"), 2);
}

TEST(Harness, MismatchIsReportedWithDiff) {
  Engine e;
  scenarios::two_row_fixture(e, PolicyId::occ);
  auto s = scenarios::interleaving();
  s.expect_committed("T1");
  const auto r = scripted_run(e, s);
  EXPECT_FALSE(r.ok());
  EXPECT_NE(r.diff().find("T1"), std::string::npos);
}

TEST(Fixture, RowsReadableWithZeroStamps) {
  Engine e;
  harness::make_table(e, "t", {"a", "b"}, PolicyId::tictoc, {{0}, {1}});
  harness::fixture(e, {{"t", "A", {{"a", 1}}}, {"t", "B", {{"b", 2}}}});
  EXPECT_EQ(harness::peek(e, "t", "A", "a"), 1);
  EXPECT_EQ(harness::peek(e, "t", "A", "b"), 0);
  EXPECT_EQ(harness::peek(e, "t", "B", "b"), 2);
  EXPECT_FALSE(harness::peek(e, "t", "Z", "a").has_value());
  auto* t = e.table("t");
  EXPECT_EQ(t->num_groups(), 2U);
  for (std::size_t g = 0; g < 2; ++g) {
    EXPECT_EQ(t->find("A")->sync(g).tictoc.read_pair(), (TicTocPair{0, 0}));
  }
  EXPECT_THROW(harness::fixture(e, {{"t", "A", {}}}), DuplicateKey);
  EXPECT_THROW(harness::fixture(e, {{"t", "Q", {{"zz", 1}}}}), std::invalid_argument);
  EXPECT_THROW(harness::fixture(e, {{"nope", "Q", {}}}), std::invalid_argument);
}

// --- properties ----------------------------------------------------------------

std::vector<Script> all_scripts() {
  return {scenarios::interleaving(),
          scenarios::append(scenarios::warmup(), scenarios::interleaving())};
}

TEST(Properties, DeterministicOutcomesAndState) {
  for (const auto p : kAllPolicies) {
    for (const auto& s : all_scripts()) {
      std::map<std::string, CommitOutcome> first;
      std::vector<std::optional<std::int64_t>> state;
      for (int rep = 0; rep < 3; ++rep) {
        Engine e;
        scenarios::two_row_fixture(e, p);
        const auto r = scripted_run(e, s);
        std::vector<std::optional<std::int64_t>> now;
        for (const auto& k : {scenarios::kA, scenarios::kB, scenarios::kC}) {
          now.push_back(harness::peek(e, "t", k, "v"));
        }
        if (rep == 0) {
          first = r.outcomes;
          state = now;
        } else {
          EXPECT_EQ(r.outcomes, first) << name_of(p);
          EXPECT_EQ(now, state) << name_of(p);
        }
      }
    }
  }
}

TEST(Properties, EveryPolicyRunsEveryScript) {
  for (const auto p : kAllPolicies) {
    for (const auto& s : all_scripts()) {
      Engine e;
      scenarios::two_row_fixture(e, p);
      const auto r = scripted_run(e, s);
      EXPECT_TRUE(r.mismatches.empty()) << name_of(p) << "\n" << r.diff();
      EXPECT_TRUE(r.outcomes.at("T2").is_committed() ||
                  r.outcomes.at("T1").is_committed());
      EXPECT_TRUE(e.sweep_locks().clean());
    }
    for (const bool fine : {false, true}) {
      Engine e;
      scenarios::district_fixture(e, fine, p);
      const auto r = scripted_run(e, scenarios::district_script());
      EXPECT_TRUE(r.mismatches.empty()) << name_of(p) << "\n" << r.diff();
      EXPECT_TRUE(e.sweep_locks().clean());
    }
  }
}

}  // namespace
}  // namespace grain
