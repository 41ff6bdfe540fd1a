#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace grain {

enum class AbortReason : std::uint8_t {
  lock_busy,
  read_validation,
  scan_validation,
  rts_extension_failed,
  wounded,
  user_abort,
};

inline constexpr std::size_t kAbortReasonCount = 6;

inline constexpr std::array<AbortReason, kAbortReasonCount> kAllAbortReasons = {
    AbortReason::lock_busy,       AbortReason::read_validation,
    AbortReason::scan_validation, AbortReason::rts_extension_failed,
    AbortReason::wounded,         AbortReason::user_abort};

[[nodiscard]] constexpr std::string_view to_string(AbortReason r) noexcept {
  switch (r) {
    case AbortReason::lock_busy: return "lock_busy";
    case AbortReason::read_validation: return "read_validation";
    case AbortReason::scan_validation: return "scan_validation";
    case AbortReason::rts_extension_failed: return "rts_extension_failed";
    case AbortReason::wounded: return "wounded";
    case AbortReason::user_abort: return "user_abort";
  }
  return "?";
}

/// Thrown by transactional operations when the attempt must abort. The
/// catcher is responsible for calling Engine::abort on the context.
class TxAbort : public std::exception {
 public:
  explicit TxAbort(AbortReason reason) noexcept : reason_(reason) {}
  [[nodiscard]] AbortReason reason() const noexcept { return reason_; }
  [[nodiscard]] const char* what() const noexcept override {
    return to_string(reason_).data();
  }

 private:
  AbortReason reason_;
};

/// Rolls back the current transaction without retry.
[[noreturn]] inline void user_abort() { throw TxAbort(AbortReason::user_abort); }

class KeyAbsent : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DuplicateKey : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CommitOutcome {
 public:
  [[nodiscard]] static CommitOutcome committed(
      std::optional<std::uint64_t> commit_ts = std::nullopt,
      std::uint64_t commit_seq = 0) noexcept {
    CommitOutcome o;
    o.committed_ = true;
    o.commit_ts_ = commit_ts;
    o.commit_seq_ = commit_seq;
    return o;
  }
  [[nodiscard]] static CommitOutcome aborted(AbortReason reason) noexcept {
    CommitOutcome o;
    o.committed_ = false;
    o.reason_ = reason;
    return o;
  }

  [[nodiscard]] bool is_committed() const noexcept { return committed_; }
  /// Meaningful only when aborted.
  [[nodiscard]] AbortReason reason() const noexcept { return reason_; }
  /// Present when a committed transaction touched TicToc entries.
  [[nodiscard]] std::optional<std::uint64_t> commit_ts() const noexcept {
    return commit_ts_;
  }
  /// Position in the engine-wide commit order, taken while all write locks
  /// were held. Zero unless EngineConfig::record_commit_order is set.
  [[nodiscard]] std::uint64_t commit_seq() const noexcept { return commit_seq_; }

  friend bool operator==(const CommitOutcome& a, const CommitOutcome& b) {
    if (a.committed_ != b.committed_) return false;
    return a.committed_ ? a.commit_ts_ == b.commit_ts_ : a.reason_ == b.reason_;
  }

 private:
  bool committed_ = false;
  AbortReason reason_ = AbortReason::user_abort;
  std::optional<std::uint64_t> commit_ts_;
  std::uint64_t commit_seq_ = 0;
};

[[nodiscard]] std::string to_string(const CommitOutcome& o);

}  // namespace grain
