#include "grain/txn/engine.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

#include "grain/sync/spin.hpp"

namespace grain {

// --- TxContext -------------------------------------------------------------

TxContext::TxContext(Engine& engine, std::uint64_t tx_id,
                     std::uint64_t priority, std::uint32_t slot) noexcept
    : engine_(&engine), tx_id_(tx_id), priority_(priority), slot_(slot) {}

TxContext::TxContext(TxContext&& other) noexcept
    : engine_(other.engine_),
      tx_id_(other.tx_id_),
      priority_(other.priority_),
      slot_(other.slot_),
      active_(other.active_),
      owns_slot_(other.owns_slot_),
      reads_(std::move(other.reads_)),
      writes_(std::move(other.writes_)),
      scans_(std::move(other.scans_)),
      absents_(std::move(other.absents_)),
      read_index_(std::move(other.read_index_)),
      write_index_(std::move(other.write_index_)),
      commit_ts_(other.commit_ts_) {
  other.active_ = false;
  other.owns_slot_ = false;
}

TxContext::~TxContext() {
  if (active_) engine_->abort(*this, AbortReason::user_abort);
  if (owns_slot_) engine_->registry().release(slot_);
}

bool TxContext::wounded() const noexcept {
  return engine_->registry().wounded(slot_);
}

ReadEntry* TxContext::find_read(const GroupRef& ref) noexcept {
  const auto it = read_index_.find(ref);
  return it == read_index_.end() ? nullptr : &reads_[it->second];
}

WriteEntry* TxContext::find_write(const GroupRef& ref) noexcept {
  const auto it = write_index_.find(ref);
  return it == write_index_.end() ? nullptr : &writes_[it->second];
}

ReadEntry& TxContext::add_read(const ReadEntry& e) {
  read_index_.emplace(e.ref, static_cast<std::uint32_t>(reads_.size()));
  return reads_.emplace_back(e);
}

WriteEntry& TxContext::add_write(WriteEntry e) {
  write_index_.emplace(e.ref, static_cast<std::uint32_t>(writes_.size()));
  return writes_.emplace_back(std::move(e));
}

void TxContext::clear() noexcept {
  reads_.clear();
  writes_.clear();
  scans_.clear();
  absents_.clear();
  read_index_.clear();
  write_index_.clear();
}

// --- helpers ---------------------------------------------------------------

namespace {

GroupSync& sync_of(const GroupRef& ref) { return ref.row->sync(ref.group); }

std::size_t group_begin(const GroupRef& ref) {
  return ref.table->format().group_word_begin(ref.group);
}

bool try_lock_word(PolicyId policy, GroupSync& sync) {
  switch (policy) {
    case PolicyId::occ: return sync.occ.try_lock();
    case PolicyId::tictoc: return sync.tictoc.try_lock();
    case PolicyId::two_pl:
    case PolicyId::adaptive: return sync.rw.try_acquire(LockKind::write);
    case PolicyId::swisstm: return sync.swiss.version.try_lock();
  }
  return false;
}

void unlock_word(PolicyId policy, GroupSync& sync) {
  switch (policy) {
    case PolicyId::occ: sync.occ.unlock(); break;
    case PolicyId::tictoc: sync.tictoc.unlock(); break;
    case PolicyId::two_pl:
    case PolicyId::adaptive: sync.rw.release(LockKind::write, false); break;
    case PolicyId::swisstm: sync.swiss.version.unlock(); break;
  }
}

// Copies a group's words consistently with an OCC-style version word.
std::uint64_t read_versioned(const OccVersion& word, const Row& row,
                             std::size_t begin, std::span<std::uint64_t> out) {
  for (;;) {
    const auto v = word.stable_read();
    row.load_words(begin, out);
    std::atomic_thread_fence(std::memory_order_acquire);
    if (word.load(std::memory_order_relaxed) == v) {
      return OccVersion::counter_of(v);
    }
  }
}

}  // namespace

std::vector<Row*> collect_live_rows(const Table& table, const std::string& lo,
                                    const std::string& hi,
                                    ScanDirection direction,
                                    std::size_t limit) {
  std::vector<Row*> rows;
  const bool bounded = direction == ScanDirection::ascending && limit != 0;
  table.for_each_in_range(lo, hi, [&](Row& r) {
    if (r.state() == RowState::live) rows.push_back(&r);
    return !(bounded && rows.size() >= limit);
  });
  if (direction == ScanDirection::descending) {
    std::reverse(rows.begin(), rows.end());
    if (limit != 0 && rows.size() > limit) rows.resize(limit);
  }
  return rows;
}

// --- Engine ----------------------------------------------------------------

Engine::Engine(EngineConfig config)
    : config_(config), registry_(config.max_contexts) {
  if (config_.adaptive_pess_threshold < 1 ||
      config_.adaptive_pess_threshold > RwLockWord::kContentionMax ||
      config_.adaptive_opt_streak < 1 ||
      config_.adaptive_opt_streak > RwLockWord::kContentionMax) {
    throw std::invalid_argument("adaptive thresholds must be in [1, 255]");
  }
}

Engine::~Engine() = default;

Table& Engine::create_table(TableSchema schema) {
  std::lock_guard lock(tables_mu_);
  for (const auto& t : tables_) {
    if (t->name() == schema.name) {
      throw std::invalid_argument("duplicate table name: " + schema.name);
    }
  }
  const auto id = static_cast<std::uint32_t>(tables_.size());
  return *tables_.emplace_back(std::make_unique<Table>(id, std::move(schema)));
}

Table* Engine::table(std::string_view name) const {
  std::lock_guard lock(tables_mu_);
  for (const auto& t : tables_) {
    if (t->name() == name) return t.get();
  }
  return nullptr;
}

std::vector<Table*> Engine::tables() const {
  std::lock_guard lock(tables_mu_);
  std::vector<Table*> out;
  for (const auto& t : tables_) out.push_back(t.get());
  return out;
}

TxContext Engine::begin(std::optional<std::uint64_t> priority) {
  const auto prio = priority ? *priority
                             : next_priority_.fetch_add(
                                   1, std::memory_order_relaxed);
  const auto slot = registry_.acquire(prio);
  return TxContext(*this, next_tx_id_.fetch_add(1, std::memory_order_relaxed),
                   prio, slot);
}

void Engine::restart(TxContext& ctx) {
  if (ctx.active_) abort(ctx, AbortReason::user_abort);
  ctx.tx_id_ = next_tx_id_.fetch_add(1, std::memory_order_relaxed);
  ctx.active_ = true;
  ctx.commit_ts_.reset();
  registry_.clear_wound(ctx.slot_);
}

void Engine::check_wounded(const TxContext& ctx) const {
  if (registry_.wounded(ctx.slot_)) throw TxAbort(AbortReason::wounded);
}

void Engine::read_untracked(const GroupRef& ref,
                            std::span<std::uint64_t> out) const {
  ref.row->load_words(group_begin(ref), out);
}

void Engine::track_read(TxContext& ctx, const GroupRef& ref, ColumnSet wanted,
                        std::span<std::uint64_t> out) {
  assert(ctx.active_);
  check_wounded(ctx);
  const auto& format = ref.table->format();
  const auto group_cols = format.group_columns(ref.group);
  const auto begin = format.group_word_begin(ref.group);

  if (auto* w = ctx.find_write(ref)) {
    if (w->insert || (wanted & group_cols).subset_of(w->dirty)) {
      std::copy(w->pending.begin(), w->pending.end(), out.begin());
      return;
    }
    if (w->held != 0) {
      // Exclusively held by us: committed data cannot change underneath.
      read_untracked(ref, out);
      merge_group_columns(format, ref.group, w->dirty, w->pending, out);
      return;
    }
  }

  auto& sync = sync_of(ref);
  if (auto* r = ctx.find_read(ref)) {
    switch (r->kind) {
      case Observation::read_grant:
        read_untracked(ref, out);
        break;
      case Observation::version: {
        const auto& word =
            ref.table->policy() == PolicyId::swisstm ? sync.swiss.version
                                                     : sync.occ;
        if (read_versioned(word, *ref.row, begin, out) != r->version) {
          throw TxAbort(AbortReason::read_validation);
        }
        break;
      }
      case Observation::stamp: {
        for (;;) {
          const auto pair = sync.tictoc.read_pair();
          ref.row->load_words(begin, out);
          std::atomic_thread_fence(std::memory_order_acquire);
          if (sync.tictoc.wts_word(std::memory_order_relaxed) != pair.wts) {
            continue;
          }
          if (pair.wts != r->version) {
            throw TxAbort(AbortReason::read_validation);
          }
          break;
        }
        break;
      }
      case Observation::adaptive_version: {
        const auto s = sync.rw.state();
        if (s.writer || s.version != r->version) {
          throw TxAbort(AbortReason::read_validation);
        }
        read_untracked(ref, out);
        std::atomic_thread_fence(std::memory_order_acquire);
        const auto s2 = sync.rw.state();
        if (s2.writer || s2.version != r->version) {
          throw TxAbort(AbortReason::read_validation);
        }
        break;
      }
    }
  } else {
    ReadEntry entry;
    entry.ref = ref;
    entry.policy = ref.table->policy();
    switch (entry.policy) {
      case PolicyId::occ:
        entry.kind = Observation::version;
        entry.version = read_versioned(sync.occ, *ref.row, begin, out);
        break;
      case PolicyId::swisstm:
        entry.kind = Observation::version;
        entry.version = read_versioned(sync.swiss.version, *ref.row, begin, out);
        break;
      case PolicyId::tictoc:
        entry.kind = Observation::stamp;
        for (;;) {
          const auto pair = sync.tictoc.read_pair();
          ref.row->load_words(begin, out);
          std::atomic_thread_fence(std::memory_order_acquire);
          if (sync.tictoc.wts_word(std::memory_order_relaxed) == pair.wts) {
            entry.version = pair.wts;
            entry.rts = pair.rts;
            break;
          }
        }
        break;
      case PolicyId::two_pl:
        if (!sync.rw.try_acquire(LockKind::read)) {
          throw TxAbort(AbortReason::lock_busy);
        }
        entry.kind = Observation::read_grant;
        ctx.add_read(entry);
        read_untracked(ref, out);
        break;
      case PolicyId::adaptive: {
        const auto s = sync.rw.state();
        if (s.mode == AdaptiveMode::pessimistic) {
          if (!sync.rw.try_acquire(LockKind::read)) {
            throw TxAbort(AbortReason::lock_busy);
          }
          entry.kind = Observation::read_grant;
          ctx.add_read(entry);
          read_untracked(ref, out);
          break;
        }
        if (s.writer) throw TxAbort(AbortReason::lock_busy);
        read_untracked(ref, out);
        std::atomic_thread_fence(std::memory_order_acquire);
        const auto s2 = sync.rw.state();
        if (s2.writer || s2.version != s.version) {
          throw TxAbort(AbortReason::lock_busy);
        }
        entry.kind = Observation::adaptive_version;
        entry.version = s.version;
        break;
      }
    }
    if (entry.kind != Observation::read_grant) ctx.add_read(entry);
  }

  if (auto* w = ctx.find_write(ref)) {
    merge_group_columns(format, ref.group, w->dirty, w->pending, out);
  }
}

void Engine::acquire_write_grant(TxContext& ctx, const GroupRef& ref) {
  auto& rw = sync_of(ref).rw;
  if (auto* r = ctx.find_read(ref);
      r != nullptr && r->kind == Observation::read_grant) {
    if (!rw.try_upgrade()) throw TxAbort(AbortReason::lock_busy);
    r->grant_upgraded = true;
    return;
  }
  if (!rw.try_acquire(LockKind::write)) throw TxAbort(AbortReason::lock_busy);
}

void Engine::acquire_swiss_owner(TxContext& ctx, const GroupRef& ref) {
  auto& owner = sync_of(ref).swiss.owner;
  const std::uint64_t me = std::uint64_t{ctx.slot_} + 1;
  SpinWait spin;
  std::uint32_t waited = 0;
  for (;;) {
    check_wounded(ctx);
    auto cur = owner.load(std::memory_order_acquire);
    if (cur == 0) {
      if (owner.compare_exchange_strong(cur, me, std::memory_order_acq_rel)) {
        return;
      }
      continue;
    }
    if (cur == me) return;
    const auto holder = static_cast<std::uint32_t>(cur - 1);
    if (cm_resolve(registry_.priority(holder), ctx.priority_) ==
        CmDecision::abort_self) {
      throw TxAbort(AbortReason::lock_busy);
    }
    registry_.wound(holder);
    if (++waited > config_.swiss_wait_limit) {
      throw TxAbort(AbortReason::lock_busy);
    }
    spin.pause();
  }
}

void Engine::stage_write(TxContext& ctx, const GroupRef& ref, ColumnSet cols,
                         std::span<const std::uint64_t> values) {
  assert(ctx.active_);
  check_wounded(ctx);
  const auto& format = ref.table->format();
  cols = cols & format.group_columns(ref.group);

  if (auto* w = ctx.find_write(ref)) {
    merge_group_columns(format, ref.group, cols, values, w->pending);
    w->dirty |= cols;
    return;
  }

  WriteEntry entry;
  entry.ref = ref;
  entry.policy = ref.table->policy();
  switch (entry.policy) {
    case PolicyId::occ:
    case PolicyId::tictoc:
      break;
    case PolicyId::two_pl:
      acquire_write_grant(ctx, ref);
      entry.held = kHoldWord;
      break;
    case PolicyId::adaptive: {
      const auto* r = ctx.find_read(ref);
      const bool have_grant = r != nullptr && r->kind == Observation::read_grant;
      if (have_grant ||
          sync_of(ref).rw.state().mode == AdaptiveMode::pessimistic) {
        acquire_write_grant(ctx, ref);
        entry.held = kHoldWord;
      }
      break;
    }
    case PolicyId::swisstm:
      acquire_swiss_owner(ctx, ref);
      entry.held = kHoldOwner;
      break;
  }
  entry.pending.assign(format.group_word_count(ref.group), 0);
  merge_group_columns(format, ref.group, cols, values, entry.pending);
  entry.dirty = cols;
  ctx.add_write(std::move(entry));
}

void Engine::stage_insert(TxContext& ctx, Table& table, const std::string& key,
                          const RowBuffer& row) {
  assert(ctx.active_);
  check_wounded(ctx);
  Row* target = nullptr;
  while (target == nullptr) {
    auto [r, inserted] = table.emplace(key, RowState::pending, ctx.tx_id_, true);
    if (inserted) {
      target = r;
      break;
    }
    switch (r->state()) {
      case RowState::live:
        if (validate_reads_now(ctx) && absents_hold(ctx)) {
          throw DuplicateKey(table.name() + ": duplicate key");
        }
        throw TxAbort(AbortReason::read_validation);
      case RowState::pending:
        if (r->pending_owner() == ctx.tx_id_) {
          throw DuplicateKey(table.name() + ": key inserted twice");
        }
        throw TxAbort(AbortReason::lock_busy);
      case RowState::vacant: {
        if (!r->try_claim(ctx.tx_id_)) continue;
        std::size_t locked = 0;
        for (; locked < table.num_groups(); ++locked) {
          if (!try_lock_word(table.policy(), r->sync(locked))) break;
        }
        if (locked != table.num_groups()) {
          for (std::size_t g = 0; g < locked; ++g) {
            unlock_word(table.policy(), r->sync(g));
          }
          r->set_state(RowState::vacant);
          throw TxAbort(AbortReason::lock_busy);
        }
        target = r;
        break;
      }
    }
  }

  const auto& format = table.format();
  for (std::size_t g = 0; g < table.num_groups(); ++g) {
    WriteEntry entry;
    entry.ref = GroupRef{&table, target, static_cast<std::uint32_t>(g)};
    entry.policy = table.policy();
    const auto words = row.group_words(g);
    entry.pending.assign(words.begin(), words.end());
    entry.dirty = format.group_columns(g);
    entry.held = kHoldWord;
    entry.insert = true;
    ctx.add_write(std::move(entry));
  }
}

void Engine::note_scan(TxContext& ctx, ScanRecord record) {
  ctx.scans_.push_back(std::move(record));
}

void Engine::note_absent(TxContext& ctx, Table& table, std::string key) {
  for (const auto& a : ctx.absents_) {
    if (a.table == &table && a.key == key) return;
  }
  ctx.absents_.push_back(AbsentKey{&table, std::move(key)});
}

std::uint64_t Engine::compute_commit_ts(const TxContext& ctx) const {
  std::uint64_t ts = 0;
  for (const auto& r : ctx.reads_) {
    if (r.policy == PolicyId::tictoc) ts = std::max(ts, r.version);
  }
  for (const auto& w : ctx.writes_) {
    if (w.policy == PolicyId::tictoc) {
      ts = std::max(ts, sync_of(w.ref).tictoc.rts() + 1);
    }
  }
  return ts;
}

bool Engine::lock_for_commit(TxContext& ctx, WriteEntry& w) {
  auto& sync = sync_of(w.ref);
  bool ok = false;
  switch (w.policy) {
    case PolicyId::occ: ok = sync.occ.try_lock(); break;
    case PolicyId::tictoc: ok = sync.tictoc.try_lock(); break;
    case PolicyId::adaptive:
    case PolicyId::two_pl: {
      // A buffered adaptive write whose group was later read under a
      // pessimistic grant must upgrade that grant.
      auto* r = ctx.find_read(w.ref);
      if (r != nullptr && r->kind == Observation::read_grant &&
          !r->grant_upgraded) {
        ok = sync.rw.try_upgrade();
        if (ok) r->grant_upgraded = true;
      } else {
        ok = sync.rw.try_acquire(LockKind::write);
      }
      break;
    }
    case PolicyId::swisstm: ok = sync.swiss.version.try_lock(); break;
  }
  if (ok) w.held |= kHoldWord;
  return ok;
}

// Read-set check without locks, used when an insert hits a committed key.
bool Engine::validate_reads_now(TxContext& ctx) const {
  for (const auto& r : ctx.reads_) {
    auto& sync = sync_of(r.ref);
    switch (r.kind) {
      case Observation::read_grant:
        break;
      case Observation::version: {
        const auto raw = r.policy == PolicyId::swisstm
                             ? sync.swiss.version.load()
                             : sync.occ.load();
        if (OccVersion::is_locked(raw) ||
            OccVersion::counter_of(raw) != r.version) {
          return false;
        }
        break;
      }
      case Observation::stamp:
        if (sync.tictoc.wts_word() != r.version) return false;
        break;
      case Observation::adaptive_version: {
        const auto s = sync.rw.state();
        if (s.version != r.version) return false;
        if (s.writer) {
          const auto* w = ctx.find_write(r.ref);
          if (w == nullptr || (w->held & kHoldWord) == 0) return false;
        }
        break;
      }
    }
  }
  return true;
}

bool Engine::absents_hold(const TxContext& ctx) const {
  for (const auto& a : ctx.absents_) {
    const auto* row = a.table->find(a.key);
    if (row != nullptr && row->state() == RowState::live) return false;
  }
  return true;
}

bool Engine::scans_hold(const TxContext& ctx) const {
  for (const auto& s : ctx.scans_) {
    const auto rows = collect_live_rows(*s.table, s.lo, s.hi, s.direction,
                                        s.limit);
    if (rows.size() != s.keys.size()) return false;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i]->key() != s.keys[i]) return false;
    }
  }
  return true;
}

CommitOutcome Engine::commit(TxContext& ctx) {
  assert(ctx.active_);
  if (registry_.wounded(ctx.slot_)) {
    return fail(ctx, AbortReason::wounded, nullptr);
  }

  // Phase 1: lock buffered writes in canonical order.
  std::vector<std::uint32_t> order;
  bool any_tictoc = false;
  for (std::uint32_t i = 0; i < ctx.writes_.size(); ++i) {
    if ((ctx.writes_[i].held & kHoldWord) == 0) order.push_back(i);
    any_tictoc |= ctx.writes_[i].policy == PolicyId::tictoc;
  }
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    const auto& x = ctx.writes_[a].ref;
    const auto& y = ctx.writes_[b].ref;
    if (x.table->id() != y.table->id()) return x.table->id() < y.table->id();
    if (x.row != y.row) return x.row->key() < y.row->key();
    return x.group < y.group;
  });
  for (const auto i : order) {
    if (!lock_for_commit(ctx, ctx.writes_[i])) {
      return fail(ctx, AbortReason::lock_busy, nullptr);
    }
  }
  std::uint64_t seq = 0;
  if (config_.record_commit_order) {
    seq = commit_seq_.fetch_add(1, std::memory_order_acq_rel) + 1;
  }

  // Phase 2: commit timestamp.
  for (const auto& r : ctx.reads_) any_tictoc |= r.policy == PolicyId::tictoc;
  const std::uint64_t ts = any_tictoc ? compute_commit_ts(ctx) : 0;
  if (any_tictoc) ctx.commit_ts_ = ts;

  // Phase 3: validate reads.
  for (const auto& r : ctx.reads_) {
    auto& sync = sync_of(r.ref);
    const auto* w = ctx.find_write(r.ref);
    const bool self_locked = w != nullptr && (w->held & kHoldWord) != 0;
    switch (r.kind) {
      case Observation::read_grant:
        break;
      case Observation::version: {
        const auto raw = r.policy == PolicyId::swisstm
                             ? sync.swiss.version.load()
                             : sync.occ.load();
        if (OccVersion::counter_of(raw) != r.version ||
            (OccVersion::is_locked(raw) && !self_locked)) {
          return fail(ctx, AbortReason::read_validation, &r);
        }
        break;
      }
      case Observation::adaptive_version: {
        const auto s = sync.rw.state();
        if (s.version != r.version || (s.writer && !self_locked)) {
          return fail(ctx, AbortReason::read_validation, &r);
        }
        break;
      }
      case Observation::stamp:
        if (r.rts >= ts) break;
        if (self_locked) {
          if (sync.tictoc.wts() != r.version) {
            return fail(ctx, AbortReason::rts_extension_failed, &r);
          }
        } else if (!sync.tictoc.extend_rts(r.version, ts)) {
          return fail(ctx, AbortReason::rts_extension_failed, &r);
        }
        break;
    }
  }

  // Phase 4: phantoms.
  if (!scans_hold(ctx) || !absents_hold(ctx)) {
    return fail(ctx, AbortReason::scan_validation, nullptr);
  }

  // Phase 5: install and release.
  release_all(ctx, true, ts);
  finish(ctx);
  return CommitOutcome::committed(
      any_tictoc ? std::optional<std::uint64_t>(ts) : std::nullopt, seq);
}

void Engine::release_all(TxContext& ctx, bool committed,
                         std::uint64_t commit_ts) {
  if (committed) {
    for (auto& w : ctx.writes_) {
      const auto& format = w.ref.table->format();
      const auto begin = format.group_word_begin(w.ref.group);
      if (w.insert) {
        w.ref.row->store_words(begin, w.pending);
        continue;
      }
      std::vector<std::uint64_t> current(w.pending.size());
      w.ref.row->load_words(begin, current);
      merge_group_columns(format, w.ref.group, w.dirty, w.pending, current);
      w.ref.row->store_words(begin, current);
    }
    for (auto& w : ctx.writes_) {
      if (w.insert && w.ref.group == 0) w.ref.row->set_state(RowState::live);
    }
  } else {
    for (auto& w : ctx.writes_) {
      if (w.insert && w.ref.group == 0) w.ref.row->set_state(RowState::vacant);
    }
  }

  for (auto& w : ctx.writes_) {
    auto& sync = sync_of(w.ref);
    if ((w.held & kHoldWord) != 0) {
      if (!committed) {
        unlock_word(w.policy, sync);
      } else {
        switch (w.policy) {
          case PolicyId::occ: sync.occ.unlock_bump(); break;
          case PolicyId::tictoc: sync.tictoc.install(commit_ts); break;
          case PolicyId::two_pl:
          case PolicyId::adaptive: sync.rw.release(LockKind::write, true); break;
          case PolicyId::swisstm: sync.swiss.version.unlock_bump(); break;
        }
      }
    }
    if ((w.held & kHoldOwner) != 0) {
      sync.swiss.owner.store(0, std::memory_order_release);
    }
    w.held = 0;
  }

  for (auto& r : ctx.reads_) {
    if (r.kind == Observation::read_grant && !r.grant_upgraded) {
      sync_of(r.ref).rw.release(LockKind::read);
    }
  }

  if (committed) {
    for (const auto& r : ctx.reads_) {
      if (r.policy == PolicyId::adaptive && ctx.find_write(r.ref) == nullptr) {
        sync_of(r.ref).rw.transition(AdaptiveEvent::clean_access,
                                     config_.adaptive_pess_threshold,
                                     config_.adaptive_opt_streak);
      }
    }
    for (const auto& w : ctx.writes_) {
      if (w.policy == PolicyId::adaptive) {
        sync_of(w.ref).rw.transition(AdaptiveEvent::clean_access,
                                     config_.adaptive_pess_threshold,
                                     config_.adaptive_opt_streak);
      }
    }
  }
}

void Engine::finish(TxContext& ctx) noexcept {
  ctx.clear();
  ctx.active_ = false;
}

CommitOutcome Engine::fail(TxContext& ctx, AbortReason reason,
                           const ReadEntry* blamed) {
  const bool blame_adaptive =
      blamed != nullptr && blamed->policy == PolicyId::adaptive;
  const GroupRef blamed_ref = blamed != nullptr ? blamed->ref : GroupRef{};
  release_all(ctx, false, 0);
  if (blame_adaptive) {
    sync_of(blamed_ref).rw.transition(AdaptiveEvent::abort_blamed,
                                      config_.adaptive_pess_threshold,
                                      config_.adaptive_opt_streak);
  }
  finish(ctx);
  return CommitOutcome::aborted(reason);
}

void Engine::abort(TxContext& ctx, AbortReason reason) {
  if (!ctx.active_) return;
  (void)fail(ctx, reason, nullptr);
}

LockSweep Engine::sweep_locks() const {
  LockSweep sweep;
  for (const auto* t : tables()) {
    t->for_each_row([&](const Row& row) {
      if (row.state() == RowState::pending) ++sweep.pending_rows;
      for (std::size_t g = 0; g < t->num_groups(); ++g) {
        ++sweep.groups_checked;
        if (row.sync(g).held(t->policy())) ++sweep.held_groups;
      }
    });
  }
  return sweep;
}

}  // namespace grain
