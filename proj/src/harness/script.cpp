#include "grain/harness/script.hpp"

#include <charconv>
#include <set>
#include <sstream>
#include <stdexcept>

#include "grain/storage/access.hpp"
#include "grain/storage/key.hpp"

namespace grain::harness {

namespace {

Step make(std::string label, StepKind kind) {
  Step s;
  s.label = std::move(label);
  s.kind = kind;
  return s;
}

std::int64_t parse_int(std::string_view s, std::size_t line) {
  std::int64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) {
    throw std::invalid_argument("line " + std::to_string(line) +
                                ": bad integer '" + std::string(s) + "'");
  }
  return v;
}

std::optional<AbortReason> parse_reason(std::string_view s) {
  for (const auto r : kAllAbortReasons) {
    if (to_string(r) == s) return r;
  }
  return std::nullopt;
}

std::string describe(const Expectation& e) {
  if (e.committed) {
    return e.commit_ts ? "committed(ts=" + std::to_string(*e.commit_ts) + ")"
                       : "committed";
  }
  return e.reason ? "aborted(" + std::string(to_string(*e.reason)) + ")"
                  : "aborted";
}

bool matches(const Expectation& e, const CommitOutcome& o) {
  if (e.committed != o.is_committed()) return false;
  if (e.committed) return !e.commit_ts || o.commit_ts() == e.commit_ts;
  return !e.reason || o.reason() == *e.reason;
}

RowBuffer values_row(const Table& t, const std::vector<ColumnValue>& values,
                     ColumnSet& cols) {
  RowBuffer row(t.format());
  for (const auto& v : values) {
    const auto c = column_index(t, v.column);
    row.set_i64(c, v.value);
    cols.insert(c);
  }
  return row;
}

Table& need_table(Engine& engine, const std::string& name) {
  auto* t = engine.table(name);
  if (t == nullptr) throw std::invalid_argument("unknown table " + name);
  return *t;
}

}  // namespace

std::string parse_key(std::string_view token) {
  if (!token.starts_with("k:")) return std::string(token);
  KeyBuilder kb;
  auto rest = token.substr(2);
  while (!rest.empty()) {
    const auto slash = rest.find('/');
    const auto part = rest.substr(0, slash);
    std::uint32_t v = 0;
    const auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc{} || p != part.data() + part.size()) {
      throw std::invalid_argument("bad key token " + std::string(token));
    }
    kb.u32(v);
    if (slash == std::string_view::npos) break;
    rest = rest.substr(slash + 1);
  }
  return std::move(kb).build();
}

Script& Script::read(std::string label, std::string table, std::string key,
                     std::vector<std::string> columns) {
  auto s = make(std::move(label), StepKind::read);
  s.table = std::move(table);
  s.key = std::move(key);
  s.columns = std::move(columns);
  steps.push_back(std::move(s));
  return *this;
}

Script& Script::write(std::string label, std::string table, std::string key,
                      std::vector<ColumnValue> values) {
  auto s = make(std::move(label), StepKind::write);
  s.table = std::move(table);
  s.key = std::move(key);
  s.values = std::move(values);
  steps.push_back(std::move(s));
  return *this;
}

Script& Script::insert(std::string label, std::string table, std::string key,
                       std::vector<ColumnValue> values) {
  auto s = make(std::move(label), StepKind::insert);
  s.table = std::move(table);
  s.key = std::move(key);
  s.values = std::move(values);
  steps.push_back(std::move(s));
  return *this;
}

Script& Script::scan(std::string label, std::string table, std::string lo,
                     std::string hi, ScanDirection dir, std::size_t limit) {
  auto s = make(std::move(label), StepKind::scan);
  s.table = std::move(table);
  s.key = std::move(lo);
  s.hi = std::move(hi);
  s.direction = dir;
  s.limit = limit;
  steps.push_back(std::move(s));
  return *this;
}

Script& Script::commit(std::string label) {
  steps.push_back(make(std::move(label), StepKind::commit));
  return *this;
}

Script& Script::expect(std::string label, Expectation e) {
  auto s = make(std::move(label), StepKind::expect);
  s.expect = e;
  steps.push_back(std::move(s));
  return *this;
}

Script& Script::expect_committed(std::string label,
                                 std::optional<std::uint64_t> ts) {
  return expect(std::move(label), Expectation{true, std::nullopt, ts});
}

Script& Script::expect_aborted(std::string label,
                               std::optional<AbortReason> reason) {
  return expect(std::move(label), Expectation{false, reason, std::nullopt});
}

Script Script::parse(std::string_view text) {
  Script script;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.resize(hash);
    }
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    auto bad = [&](const std::string& why) {
      return std::invalid_argument("line " + std::to_string(lineno) + ": " + why);
    };
    if (tok.size() < 2) throw bad("expected <label> <op>");
    const auto& label = tok[0];
    const auto& op = tok[1];
    auto col_values = [&](std::size_t from) {
      std::vector<ColumnValue> out;
      for (std::size_t i = from; i < tok.size(); ++i) {
        const auto eq = tok[i].find('=');
        if (eq == std::string::npos) throw bad("expected col=value");
        out.push_back({tok[i].substr(0, eq),
                       parse_int(std::string_view(tok[i]).substr(eq + 1), lineno)});
      }
      if (out.empty()) throw bad("no column values");
      return out;
    };
    if (op == "READ") {
      if (tok.size() < 4) throw bad("READ <table> <key> [col ...]");
      script.read(label, tok[2], parse_key(tok[3]),
                  {tok.begin() + 4, tok.end()});
    } else if (op == "WRITE" || op == "INSERT") {
      if (tok.size() < 5) throw bad(op + " <table> <key> col=v ...");
      if (op == "WRITE") {
        script.write(label, tok[2], parse_key(tok[3]), col_values(4));
      } else {
        script.insert(label, tok[2], parse_key(tok[3]), col_values(4));
      }
    } else if (op == "SCAN") {
      if (tok.size() < 5 || tok.size() > 7) {
        throw bad("SCAN <table> <lo> <hi> [asc|desc] [limit]");
      }
      auto dir = ScanDirection::ascending;
      if (tok.size() >= 6) {
        if (tok[5] == "desc") {
          dir = ScanDirection::descending;
        } else if (tok[5] != "asc") {
          throw bad("direction must be asc or desc");
        }
      }
      const std::size_t limit =
          tok.size() == 7 ? static_cast<std::size_t>(parse_int(tok[6], lineno)) : 0;
      script.scan(label, tok[2], parse_key(tok[3]), parse_key(tok[4]), dir, limit);
    } else if (op == "COMMIT") {
      if (tok.size() != 2) throw bad("COMMIT takes no arguments");
      script.commit(label);
    } else if (op == "EXPECT") {
      if (tok.size() < 3) throw bad("EXPECT committed|aborted ...");
      Expectation e;
      if (tok[2] == "committed") {
        e.committed = true;
        if (tok.size() == 4) {
          if (!tok[3].starts_with("ts=")) throw bad("expected ts=N");
          e.commit_ts = static_cast<std::uint64_t>(
              parse_int(std::string_view(tok[3]).substr(3), lineno));
        } else if (tok.size() > 4) {
          throw bad("too many tokens");
        }
      } else if (tok[2] == "aborted") {
        e.committed = false;
        if (tok.size() == 4) {
          e.reason = parse_reason(tok[3]);
          if (!e.reason) throw bad("unknown abort reason " + tok[3]);
        } else if (tok.size() > 4) {
          throw bad("too many tokens");
        }
      } else {
        throw bad("EXPECT committed|aborted");
      }
      script.expect(label, e);
    } else {
      throw bad("unknown op " + op);
    }
  }
  script.validate();
  return script;
}

void Script::validate() const {
  std::set<std::string> committed;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const auto& s = steps[i];
    const auto where = "step " + std::to_string(i) + " (" + s.label + ")";
    if (s.label.empty()) throw std::invalid_argument(where + ": empty label");
    const bool done = committed.count(s.label) != 0;
    switch (s.kind) {
      case StepKind::expect:
        if (!done) throw std::invalid_argument(where + ": EXPECT before COMMIT");
        break;
      case StepKind::commit:
        if (done) throw std::invalid_argument(where + ": second COMMIT");
        committed.insert(s.label);
        break;
      default:
        if (done) throw std::invalid_argument(where + ": step after COMMIT");
        if (s.table.empty()) throw std::invalid_argument(where + ": no table");
        break;
    }
  }
}

std::string ScriptResult::diff() const {
  std::string out;
  for (const auto& m : mismatches) out += m + "\n";
  return out;
}

ScriptResult scripted_run(Engine& engine, const Script& script) {
  script.validate();
  ScriptResult result;
  std::map<std::string, TxContext> live;

  auto abort_label = [&](const std::string& label, AbortReason reason) {
    auto it = live.find(label);
    engine.abort(it->second, reason);
    result.outcomes.insert_or_assign(label, CommitOutcome::aborted(reason));
    live.erase(it);
  };

  for (std::size_t i = 0; i < script.steps.size(); ++i) {
    const auto& s = script.steps[i];
    if (s.kind == StepKind::expect) {
      const auto& o = result.outcomes.at(s.label);
      if (!matches(s.expect, o)) {
        result.mismatches.push_back("step " + std::to_string(i) + " " + s.label +
                                    ": expected " + describe(s.expect) +
                                    ", got " + to_string(o));
      }
      continue;
    }
    if (result.outcomes.count(s.label) != 0) continue;  // already finished
    auto it = live.find(s.label);
    if (it == live.end()) it = live.emplace(s.label, engine.begin()).first;
    auto& ctx = it->second;

    try {
      switch (s.kind) {
        case StepKind::read: {
          auto& t = need_table(engine, s.table);
          ColumnSet cols;
          std::vector<std::size_t> idx;
          if (s.columns.empty()) {
            cols = t.format().all_columns();
          } else {
            for (const auto& c : s.columns) {
              idx.push_back(column_index(t, c));
              cols.insert(idx.back());
            }
          }
          ReadResult rr{s.label, s.table, s.key, false, {}, {}};
          if (const auto row = get(ctx, t, s.key, cols)) {
            rr.found = true;
            cols.for_each([&](std::size_t c) {
              if (t.format().width(c) == 8) {
                rr.values[t.schema().columns[c].name] = row->get_i64(c);
              }
            });
          }
          result.reads.push_back(std::move(rr));
          break;
        }
        case StepKind::write: {
          auto& t = need_table(engine, s.table);
          ColumnSet cols;
          const auto row = values_row(t, s.values, cols);
          update(ctx, t, s.key, row, cols);
          break;
        }
        case StepKind::insert: {
          auto& t = need_table(engine, s.table);
          ColumnSet cols;
          insert(ctx, t, s.key, values_row(t, s.values, cols));
          break;
        }
        case StepKind::scan: {
          auto& t = need_table(engine, s.table);
          ReadResult rr{s.label, s.table, s.key, true, {}, {}};
          for (const auto& [k, v] :
               range_scan(ctx, t, s.key, s.hi, s.direction, s.limit)) {
            rr.scan_keys.push_back(k);
          }
          result.reads.push_back(std::move(rr));
          break;
        }
        case StepKind::commit: {
          result.outcomes.insert_or_assign(s.label, engine.commit(ctx));
          live.erase(it);
          break;
        }
        case StepKind::expect:
          break;
      }
    } catch (const TxAbort& a) {
      abort_label(s.label, a.reason());
    } catch (const std::invalid_argument&) {
      throw;
    } catch (const std::exception& e) {
      result.mismatches.push_back("step " + std::to_string(i) + " " + s.label +
                                  ": " + e.what());
      abort_label(s.label, AbortReason::user_abort);
    }
  }
  while (!live.empty()) abort_label(live.begin()->first, AbortReason::user_abort);
  return result;
}

Table& make_table(Engine& engine, const std::string& name,
                  const std::vector<std::string>& columns, PolicyId policy,
                  std::vector<std::vector<std::size_t>> groups) {
  std::vector<ColumnSpec> specs;
  for (const auto& c : columns) specs.push_back({c, 8});
  auto layout = groups.empty() ? GroupLayout::coarse(columns.size())
                               : GroupLayout(columns.size(), std::move(groups));
  return engine.create_table(
      TableSchema{name, std::move(specs), std::move(layout), policy});
}

std::size_t column_index(const Table& table, const std::string& column) {
  const auto& cols = table.schema().columns;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (cols[i].name == column) return i;
  }
  throw std::invalid_argument(table.name() + ": unknown column " + column);
}

void fixture(Engine& engine, const std::vector<FixtureRow>& rows) {
  for (const auto& r : rows) {
    auto& t = need_table(engine, r.table);
    ColumnSet cols;
    t.load_insert(r.key, values_row(t, r.values, cols));
  }
}

std::optional<std::int64_t> peek(Engine& engine, const std::string& table,
                                 const std::string& key,
                                 const std::string& column) {
  auto& t = need_table(engine, table);
  const auto* row = t.find(key);
  if (row == nullptr || row->state() != RowState::live) return std::nullopt;
  return t.read_quiesced(*row).get_i64(column_index(t, column));
}

}  // namespace grain::harness
