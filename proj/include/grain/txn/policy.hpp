#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace grain {

/// Concurrency-control policy; bound to a table at creation.
enum class PolicyId : std::uint8_t { occ, tictoc, two_pl, swisstm, adaptive };

inline constexpr std::array<PolicyId, 5> kAllPolicies = {
    PolicyId::occ, PolicyId::tictoc, PolicyId::two_pl, PolicyId::swisstm,
    PolicyId::adaptive};

[[nodiscard]] constexpr std::string_view to_string(PolicyId p) noexcept {
  switch (p) {
    case PolicyId::occ: return "occ";
    case PolicyId::tictoc: return "tictoc";
    case PolicyId::two_pl: return "2pl";
    case PolicyId::swisstm: return "swisstm";
    case PolicyId::adaptive: return "adaptive";
  }
  return "?";
}

[[nodiscard]] constexpr std::optional<PolicyId> parse_policy(
    std::string_view s) noexcept {
  for (const auto p : kAllPolicies) {
    if (to_string(p) == s) return p;
  }
  return std::nullopt;
}

}  // namespace grain
