#include "grain/storage/row.hpp"

#include <cstring>
#include <memory>

namespace grain {

void GroupSync::init(PolicyId policy, bool locked) noexcept {
  switch (policy) {
    case PolicyId::occ:
      std::construct_at(&occ, locked ? OccVersion::kLockBit : 0);
      break;
    case PolicyId::tictoc:
      std::construct_at(&tictoc, 0, 0, locked);
      break;
    case PolicyId::two_pl:
    case PolicyId::adaptive:
      std::construct_at(&rw, locked ? RwLockWord::kWriterBit : 0);
      break;
    case PolicyId::swisstm:
      std::construct_at(&swiss, locked ? OccVersion::kLockBit : 0);
      break;
  }
}

bool GroupSync::held(PolicyId policy) const noexcept {
  switch (policy) {
    case PolicyId::occ:
      return OccVersion::is_locked(occ.load());
    case PolicyId::tictoc:
      return tictoc.locked();
    case PolicyId::two_pl:
    case PolicyId::adaptive: {
      const auto s = rw.state();
      return s.writer || s.readers != 0;
    }
    case PolicyId::swisstm:
      return OccVersion::is_locked(swiss.version.load()) ||
             swiss.owner.load(std::memory_order_acquire) != 0;
  }
  return false;
}

Row::Row(std::string key, const RowFormat& format, PolicyId policy,
         RowState state, std::uint64_t owner, bool locked)
    : key_(std::move(key)),
      state_(state),
      owner_(owner),
      sync_(std::make_unique<GroupSync[]>(format.num_groups())),
      data_(std::make_unique<std::atomic<std::uint64_t>[]>(
          format.total_words())) {
  for (std::size_t g = 0; g < format.num_groups(); ++g) {
    sync_[g].init(policy, locked);
  }
}

bool Row::try_claim(std::uint64_t owner) noexcept {
  auto expected = RowState::vacant;
  if (!state_.compare_exchange_strong(expected, RowState::pending,
                                      std::memory_order_acq_rel)) {
    return false;
  }
  owner_.store(owner, std::memory_order_release);
  return true;
}

void Row::load_words(std::size_t begin,
                     std::span<std::uint64_t> out) const noexcept {
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = data_[begin + i].load(std::memory_order_relaxed);
  }
}

void Row::store_words(std::size_t begin,
                      std::span<const std::uint64_t> in) noexcept {
  for (std::size_t i = 0; i < in.size(); ++i) {
    data_[begin + i].store(in[i], std::memory_order_relaxed);
  }
}

void merge_group_columns(const RowFormat& format, std::size_t g, ColumnSet cols,
                         std::span<const std::uint64_t> src,
                         std::span<std::uint64_t> dst) {
  const auto base = format.group_word_begin(g) * 8;
  const auto* s = reinterpret_cast<const std::byte*>(src.data());
  auto* d = reinterpret_cast<std::byte*>(dst.data());
  (cols & format.group_columns(g)).for_each([&](std::size_t c) {
    const auto off = format.byte_offset(c) - base;
    std::memcpy(d + off, s + off, format.width(c));
  });
}

}  // namespace grain
