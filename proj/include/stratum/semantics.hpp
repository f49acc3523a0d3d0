#pragma once

// Finite structures for the base logic: arithmetic tables, the In relation,
// and an oracle answering operator queries.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stratum/stratify.hpp"
#include "stratum/syntax.hpp"

namespace stratum {

/// Variables to universe elements.
using EvalAssignment = std::map<Symbol, Natural>;

/// What an oracle is asked for K phi [s].
///
/// The body is alpha-canonical (bound variables b0, b1, ... by nesting
/// depth), and its free variables are renamed by value: the distinct values
/// of s on FV(phi), in order of first occurrence, become the slots v0, v1, ...
/// and `args` lists those values. Queries that differ only off FV(phi), by an
/// alphabetic variant, or by a substitution of one variable for another with
/// the same value, therefore produce the same key.
struct OracleKey {
  OperatorTag tag;
  Formula body;
  std::vector<Natural> args;

  friend bool operator==(const OracleKey&, const OracleKey&) = default;
  friend auto operator<=>(const OracleKey&, const OracleKey&) = default;
};

/// Throws PreconditionError when s misses a free variable of body.
OracleKey oracle_key(OperatorTag tag, const Formula& body, const EvalAssignment& s);

/// "K^{w} (v0=v1) @ 0 1".
std::string to_string(const OracleKey& key);

class Oracle {
 public:
  virtual ~Oracle() = default;
  virtual bool answer(const OracleKey& key) const = 0;
};

/// Finitely many listed answers plus a default for everything else.
class TableOracle : public Oracle {
 public:
  explicit TableOracle(bool fallback = false) : fallback_(fallback) {}
  TableOracle(std::map<OracleKey, bool> entries, bool fallback) : entries_(std::move(entries)), fallback_(fallback) {}

  void set(OracleKey key, bool value) { entries_[std::move(key)] = value; }
  const std::map<OracleKey, bool>& entries() const { return entries_; }
  bool fallback() const { return fallback_; }

  bool answer(const OracleKey& key) const override;

 private:
  std::map<OracleKey, bool> entries_;
  bool fallback_;
};

/// A fixed pseudo-random answer per key.
class HashOracle : public Oracle {
 public:
  explicit HashOracle(std::uint64_t seed) : seed_(seed) {}
  bool answer(const OracleKey& key) const override;

 private:
  std::uint64_t seed_;
};

/// Plain queries K phi are answered as inner answers (K phi)+.
class LiftPlusOracle : public Oracle {
 public:
  LiftPlusOracle(std::shared_ptr<const Oracle> inner, StratifierSpec x) : inner_(std::move(inner)), x_(std::move(x)) {}
  bool answer(const OracleKey& key) const override;

 private:
  std::shared_ptr<const Oracle> inner_;
  StratifierSpec x_;
};

/// Indexed queries K^a phi are answered as inner answers K phi-.
class LowerMinusOracle : public Oracle {
 public:
  explicit LowerMinusOracle(std::shared_ptr<const Oracle> inner) : inner_(std::move(inner)) {}
  bool answer(const OracleKey& key) const override;

 private:
  std::shared_ptr<const Oracle> inner_;
};

/// Indexed queries K^a phi are answered as inner answers h(K^a phi).
class MappedOracle : public Oracle {
 public:
  MappedOracle(std::shared_ptr<const Oracle> inner, OrdinalMap h) : inner_(std::move(inner)), h_(std::move(h)) {}
  bool answer(const OracleKey& key) const override;

 private:
  std::shared_ptr<const Oracle> inner_;
  OrdinalMap h_;
};

/// Arithmetic table families over {0, ..., n-1}: results reduced mod n,
/// clamped at n-1, or sent to 0 when they reach n.
enum class TableFamily { kCyclic, kSaturating, kTruncated };
/// In(a, b) as: never, always, a = b, a < b.
enum class InFamily { kEmpty, kFull, kDiagonal, kLess };

std::string to_string(TableFamily f);
std::string to_string(InFamily f);

class FiniteStructure {
 public:
  FiniteStructure(Natural size, TableFamily tables, InFamily in, std::shared_ptr<const Oracle> oracle);
  /// Explicit tables, row-major for the binary ones. Throws PreconditionError
  /// on a wrong size or an entry outside the universe.
  FiniteStructure(Natural size, Natural zero, std::vector<Natural> succ, std::vector<Natural> plus,
                  std::vector<Natural> times, std::vector<bool> in, std::shared_ptr<const Oracle> oracle);

  Natural size() const { return size_; }
  Natural zero() const { return zero_; }
  Natural succ(Natural a) const { return succ_[a]; }
  Natural plus(Natural a, Natural b) const { return plus_[a * size_ + b]; }
  Natural times(Natural a, Natural b) const { return times_[a * size_ + b]; }
  bool in(Natural a, Natural b) const { return in_[a * size_ + b]; }

  const Oracle& oracle() const { return *oracle_; }
  const std::shared_ptr<const Oracle>& oracle_ptr() const { return oracle_; }
  FiniteStructure with_oracle(std::shared_ptr<const Oracle> oracle) const;

  /// Family names when built from families, "custom" otherwise.
  const std::string& description() const { return description_; }

 private:
  Natural size_;
  Natural zero_ = 0;
  std::vector<Natural> succ_, plus_, times_;
  std::vector<bool> in_;
  std::shared_ptr<const Oracle> oracle_;
  std::string description_;
};

/// Classical satisfaction. Throws PreconditionError when s misses a free
/// variable and on abstraction predicates.
bool eval(const FiniteStructure& m, const Formula& phi, const EvalAssignment& s = {});
Natural eval_term(const FiniteStructure& m, const Term& t, const EvalAssignment& s = {});

/// M+ over X.
FiniteStructure lift_plus(const FiniteStructure& m, const StratifierSpec& x);
/// M-.
FiniteStructure lower_minus(const FiniteStructure& m);
/// h(M).
FiniteStructure map_structure(const FiniteStructure& m, const OrdinalMap& h);

/// Arithmetic parts tried by countermodel search, in search order: sizes
/// 1..max, then table family, then In family. Oracles are left null.
std::vector<FiniteStructure> candidate_structures(Natural max_universe);

struct Countermodel {
  FiniteStructure structure;
  EvalAssignment assignment;
};

struct SearchOptions {
  Natural max_universe = 3;
  /// Oracle branching nodes allowed per candidate structure.
  std::size_t node_budget = 1000;
  bool parallel = true;
};

struct SearchResult {
  std::optional<Countermodel> found;
  std::size_t nodes = 0;
  /// Some candidate ran out of nodes, so not-found is inconclusive there.
  bool budget_hit = false;
};

/// A structure and assignment falsifying phi, the first in the order of
/// candidate_structures, then assignments, then oracle branching (true
/// before false). The oracle of a result lists the branched keys and
/// answers false elsewhere; the result is re-checked with eval.
SearchResult countermodel_search(const Formula& phi, const SearchOptions& options = {});

/// Line-based structure files:
///
///   universe: 2
///   zero: 0
///   family: cyclic               (or explicit succ/plus/times tables)
///   in-family: less              (or an explicit 0/1 in table)
///   succ: 1 0
///   plus: 0 1; 1 0
///   in: 0 1; 0 0
///   default: false
///   oracle: K (x=y); 3 3; true   (operator formula; values of its free
///                                 variables in order; answer)
FiniteStructure parse_structure(std::string_view text);
/// Requires a TableOracle; other oracles render as a comment.
std::string render_structure(const FiniteStructure& m);

}  // namespace stratum
