#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace stratum {

/// An interned name: variables, binders, and abstraction predicates.
///
/// Interning is process-wide and thread-safe. Names starting with '#' are
/// never produced by the parser, which makes them safe for fresh parameters
/// and canonical renamings.
class Symbol {
 public:
  Symbol() = default;
  explicit Symbol(std::string_view name);

  /// A new symbol "#<prefix><n>" distinct from every symbol created so far.
  static Symbol fresh(std::string_view prefix);

  const std::string& name() const;
  std::uint32_t id() const { return id_; }

  friend bool operator==(const Symbol&, const Symbol&) = default;
  friend auto operator<=>(const Symbol&, const Symbol&) = default;

 private:
  std::uint32_t id_ = 0;
};

}  // namespace stratum

template <>
struct std::hash<stratum::Symbol> {
  std::size_t operator()(const stratum::Symbol& s) const noexcept { return std::hash<std::uint32_t>{}(s.id()); }
};
