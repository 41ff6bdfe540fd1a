#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "grain/txn/engine.hpp"
#include "grain/txn/errors.hpp"
#include "grain/txn/tx_context.hpp"

namespace grain::harness {

enum class StepKind { read, write, insert, scan, commit, expect };

struct ColumnValue {
  std::string column;
  std::int64_t value = 0;

  friend bool operator==(const ColumnValue&, const ColumnValue&) = default;
};

struct Expectation {
  bool committed = true;
  std::optional<AbortReason> reason;       // checked when set
  std::optional<std::uint64_t> commit_ts;  // checked when set

  friend bool operator==(const Expectation&, const Expectation&) = default;
};

struct Step {
  std::string label;
  StepKind kind = StepKind::read;
  std::string table;
  std::string key;                   // scan: lower bound
  std::string hi;                    // scan: upper bound
  std::vector<std::string> columns;  // read: empty = all
  std::vector<ColumnValue> values;   // write / insert
  ScanDirection direction = ScanDirection::ascending;
  std::size_t limit = 0;
  Expectation expect;

  friend bool operator==(const Step&, const Step&) = default;
};

/// Ordered steps of several labelled transactions. Builder methods append
/// one step each.
///
/// Text form, one step per line, whitespace-separated, '#' comments:
///   T1 READ   <table> <key> [col ...]
///   T1 WRITE  <table> <key> col=v [col=v ...]
///   T1 INSERT <table> <key> col=v [col=v ...]
///   T1 SCAN   <table> <lo> <hi> [asc|desc] [limit]
///   T1 COMMIT
///   T1 EXPECT committed [ts=N] | aborted [reason]
/// A key token "k:1/2/3" encodes big-endian u32 components; any other
/// token is used as raw key bytes.
struct Script {
  std::vector<Step> steps;

  Script& read(std::string label, std::string table, std::string key,
               std::vector<std::string> columns = {});
  Script& write(std::string label, std::string table, std::string key,
                std::vector<ColumnValue> values);
  Script& insert(std::string label, std::string table, std::string key,
                 std::vector<ColumnValue> values);
  Script& scan(std::string label, std::string table, std::string lo,
               std::string hi, ScanDirection dir = ScanDirection::ascending,
               std::size_t limit = 0);
  Script& commit(std::string label);
  Script& expect(std::string label, Expectation e);
  Script& expect_committed(std::string label,
                           std::optional<std::uint64_t> ts = std::nullopt);
  Script& expect_aborted(std::string label,
                         std::optional<AbortReason> reason = std::nullopt);

  /// Throws std::invalid_argument with the line number on bad syntax.
  [[nodiscard]] static Script parse(std::string_view text);

  /// Throws std::invalid_argument: steps after a label's COMMIT, EXPECT
  /// before any COMMIT, unknown label in EXPECT.
  void validate() const;

  friend bool operator==(const Script&, const Script&) = default;
};

[[nodiscard]] std::string parse_key(std::string_view token);

struct ReadResult {
  std::string label;
  std::string table;
  std::string key;
  bool found = false;
  std::map<std::string, std::int64_t> values;  // requested 8-byte columns
  std::vector<std::string> scan_keys;          // SCAN steps only

  friend bool operator==(const ReadResult&, const ReadResult&) = default;
};

struct ScriptResult {
  std::map<std::string, CommitOutcome> outcomes;
  std::vector<ReadResult> reads;
  std::vector<std::string> mismatches;  // failed EXPECTs and step errors

  [[nodiscard]] bool ok() const noexcept { return mismatches.empty(); }
  [[nodiscard]] std::string diff() const;
};

/// Runs every step in order on one thread, one context per label (begun at
/// the label's first step, so earlier labels are older). Aborts are final:
/// the label's remaining steps are skipped. Labels that never reach COMMIT
/// are aborted at the end and reported as USER_ABORT.
[[nodiscard]] ScriptResult scripted_run(Engine& engine, const Script& script);

// ---------------------------------------------------------------------------
// Fixtures

/// Creates a table of 8-byte integer columns. `groups` lists column
/// indexes per group; empty means a single group.
Table& make_table(Engine& engine, const std::string& name,
                  const std::vector<std::string>& columns, PolicyId policy,
                  std::vector<std::vector<std::size_t>> groups = {});

struct FixtureRow {
  std::string table;
  std::string key;
  std::vector<ColumnValue> values;  // unnamed columns are zero
};

/// Loads rows with load_insert. Throws DuplicateKey or
/// std::invalid_argument for an unknown table or column.
void fixture(Engine& engine, const std::vector<FixtureRow>& rows);

/// Committed integer value of a column on a quiesced engine.
[[nodiscard]] std::optional<std::int64_t> peek(Engine& engine,
                                               const std::string& table,
                                               const std::string& key,
                                               const std::string& column);

[[nodiscard]] std::size_t column_index(const Table& table,
                                       const std::string& column);

}  // namespace grain::harness
