#pragma once

// Stratifiers phi -> phi+, destratification phi -> phi-, ordinal maps h(phi),
// and the constructions built from them.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "stratum/ordinal.hpp"
#include "stratum/syntax.hpp"

namespace stratum {

/// An infinite X below w*w: a finite sorted seed followed by a regular tail,
/// either every ordinal >= from, or the limits w*k, w*(k+1), ...
class StratifierSpec {
 public:
  enum class Tail { kAllFrom, kLimitsFrom };

  /// Throws PreconditionError unless the seed is strictly increasing and
  /// below the tail's least element.
  StratifierSpec(std::vector<Ordinal> seed, Tail tail, Ordinal from);

  static StratifierSpec all_from(Ordinal from, std::vector<Ordinal> seed = {}) {
    return {std::move(seed), Tail::kAllFrom, from};
  }
  static StratifierSpec limits_from(Natural k, std::vector<Ordinal> seed = {}) {
    return {std::move(seed), Tail::kLimitsFrom, omega_times(k)};
  }
  /// X = {w, w*2, ...}.
  static StratifierSpec veristratifier() { return limits_from(1); }

  const std::vector<Ordinal>& seed() const { return seed_; }
  Tail tail() const { return tail_; }
  /// Least element of the tail.
  Ordinal tail_start() const { return from_; }

  bool contains(Ordinal a) const;
  /// The i-th element of X in increasing order, for i below the order type w
  /// of X's initial segment (which always suffices for least_excluding).
  Ordinal nth(std::size_t i) const;

  friend bool operator==(const StratifierSpec&, const StratifierSpec&) = default;

 private:
  std::vector<Ordinal> seed_;
  Tail tail_;
  Ordinal from_;
};

/// `seed:[w,w*2] tail:all-from(w*3)` or `tail:limits-from(1)`; the seed and
/// the "tail:" prefix are optional. Throws ParseError.
StratifierSpec parse_spec(std::string_view text);
std::string to_string(const StratifierSpec& x);

/// min(X \ s).
Ordinal least_excluding(const StratifierSpec& x, const std::set<Ordinal>& s);

/// phi+ for phi in L_EA. Throws PreconditionError on an indexed operator.
Formula stratify(const Formula& phi, const StratifierSpec& x);

/// phi-: every operator becomes plain. In strict mode a plain operator in
/// the input throws PreconditionError.
Formula destratify(const Formula& phi, bool strict = true);

/// A finite map h between ordinals.
class OrdinalMap {
 public:
  OrdinalMap() = default;
  explicit OrdinalMap(std::map<Ordinal, Ordinal> pairs);

  static OrdinalMap identity(const std::set<Ordinal>& domain);

  const std::map<Ordinal, Ordinal>& pairs() const { return pairs_; }
  std::set<Ordinal> domain() const;
  std::set<Ordinal> range() const;
  bool contains(Ordinal a) const { return pairs_.contains(a); }
  /// h(a) for a in the domain, a itself otherwise.
  Ordinal operator()(Ordinal a) const;

  /// Strictly increasing on its domain.
  bool order_preserving() const { return order_preserving_; }
  bool injective() const { return injective_; }
  /// Throws PreconditionError unless injective.
  OrdinalMap inverse() const;

  friend bool operator==(const OrdinalMap& a, const OrdinalMap& b) { return a.pairs_ == b.pairs_; }

 private:
  std::map<Ordinal, Ordinal> pairs_;
  bool order_preserving_ = true;
  bool injective_ = true;
};

/// "a:b,c:d"; throws ParseError (also on a repeated domain element).
OrdinalMap parse_ordinal_map(std::string_view text);
std::string to_string(const OrdinalMap& h);

/// h(phi): every K^a with a in dom(h) becomes K^{h(a)}; other operators are
/// left alone.
Formula apply_ordinal_map(const Formula& phi, const OrdinalMap& h);

/// A stratifier Y with stratify(phi, Y) == h(stratify(phi, x)), namely
/// Y = h[On(phi+)] followed by every ordinal above its maximum. Requires h
/// order-preserving with On(phi+) inside its domain (PreconditionError). The
/// equation is checked before returning; a failure throws std::logic_error.
StratifierSpec compose_stratifier(const StratifierSpec& x, const OrdinalMap& h, const Formula& phi);

/// The collapse map for s below w*w and n >= 1: fixes s below w*n and sends
/// the rest, in order, to the least ordinals above that part (from 0 when it
/// is empty). Throws PreconditionError for n = 0.
OrdinalMap collapse_map(const std::set<Ordinal>& s, Natural n);

/// A stratifier whose image contains sigma, or nullopt when no stratifier
/// produces sigma. The witness is On(sigma) followed by every ordinal above
/// its maximum. Throws PreconditionError on a plain operator.
std::optional<StratifierSpec> recognize_stratified(const Formula& sigma);

namespace reference {

/// Serial stratifier written as the literal recursive definition, with a
/// linear scan for each least element. Kept as an oracle for stratify.
Formula stratify(const Formula& phi, const StratifierSpec& x);

}  // namespace reference

}  // namespace stratum
