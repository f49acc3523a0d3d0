#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace stratum {

using Natural = std::uint64_t;

/// An ordinal strictly below w*w, stored as w*limit + offset.
///
/// Every such ordinal has exactly one (limit, offset) form, and the order is
/// lexicographic on that pair, so the defaulted comparison is the ordinal order.
struct Ordinal {
  Natural limit = 0;
  Natural offset = 0;

  constexpr Ordinal() = default;
  constexpr Ordinal(Natural limit_coefficient, Natural finite_offset)
      : limit(limit_coefficient), offset(finite_offset) {}

  static constexpr Ordinal finite(Natural n) { return {0, n}; }

  /// Least ordinal greater than this one.
  constexpr Ordinal successor() const { return {limit, offset + 1}; }

  constexpr bool is_finite() const { return limit == 0; }

  friend constexpr auto operator<=>(const Ordinal&, const Ordinal&) = default;
};

/// w*n.
constexpr Ordinal omega_times(Natural n) { return {n, 0}; }

std::strong_ordering ord_compare(const Ordinal& a, const Ordinal& b);

/// Parses `nat | "w" | "w+" nat | "w*" nat ("+" nat)?`; throws ParseError.
Ordinal parse_ordinal(std::string_view text);

std::string to_string(const Ordinal& o);

}  // namespace stratum

template <>
struct std::hash<stratum::Ordinal> {
  std::size_t operator()(const stratum::Ordinal& o) const noexcept {
    return std::hash<std::uint64_t>{}(o.limit * 0x9E3779B97F4A7C15ull ^ o.offset);
  }
};
