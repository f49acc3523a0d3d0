#pragma once

// Bounded approximations of the intended structures: K^a phi [s] holds when
// the members of a finite pool below a entail phi^s. Every verdict is backed
// by a proof or a countermodel; anything else is reported as unknown.

#include <array>
#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "stratum/prove.hpp"
#include "stratum/stratify.hpp"
#include "stratum/theory.hpp"

namespace stratum {

enum class Verdict { kHolds, kFails, kUnknown };
std::string to_string(Verdict v);

struct Knowledge {
  Verdict verdict = Verdict::kUnknown;
  ProofReport report;
};

class BoundedIntendedStructure {
 public:
  /// `quantifier_bound` is how many numerals eval3 tries before a universal
  /// claim has to be settled by the prover.
  BoundedIntendedStructure(StratifiedFragment pool, Budget budget, Natural quantifier_bound = 4);

  /// K^a phi [s]: restrict(pool, a) entails phi^s. Plain K consults the
  /// whole pool. Throws PreconditionError when s misses a free variable.
  Knowledge knows(OperatorTag tag, const Formula& phi, const Assignment& s = {}) const;

  /// A sentence over the standard numbers: ground arithmetic is computed,
  /// In is unknown, universal claims are false on a failing numeral below
  /// the quantifier bound and true when valid, operators go through knows.
  /// Connectives follow the strong three-valued tables.
  Verdict eval3(const Formula& sentence) const;

  const StratifiedFragment& pool() const { return pool_; }
  const Budget& budget() const { return budget_; }
  std::size_t cache_size() const;

 private:
  Verdict eval3_at(const Formula& f, NodeId i) const;

  StratifiedFragment pool_;
  Budget budget_;
  Natural quantifier_bound_;
  mutable std::mutex mutex_;
  mutable std::map<std::pair<OperatorTag, Formula>, Knowledge> cache_;
};

struct E2Query {
  Formula query;  // K^a phi
  Knowledge answer;
};

struct E2Report {
  Formula theta;
  Formula theta_plus;
  StratifierSpec x = StratifierSpec::all_from({});
  std::vector<StratifierSpec> specs;
  std::size_t theory_size = 0;
  std::size_t pool_size = 0;
  /// The two antecedents and the conclusion of theta+.
  std::vector<E2Query> queries;
  Verdict theta_plus_value = Verdict::kUnknown;
  std::string e2prime_rejection;  // empty when E2prime accepted the operands
  Formula admissible_plus;
  Verdict admissible_value = Verdict::kUnknown;
  std::vector<std::string> trace;

  /// Every sub-query resolved and theta+ false.
  bool conclusive() const;
};

/// Builds T from K(1=0), K(1=0) -> (1=0) and E2 over {1=0, K(1=0)}, closes it
/// under K twice, samples T+ over three stratifiers, and evaluates
/// theta+ for theta = K(K(1=0) -> (1=0)) -> KK(1=0) -> K(1=0) under the
/// stratifier X = {0, 1, 2, ...}.
E2Report check_e2_counterexample(const Budget& budget = {});

enum class WalkCase { kBase = 1, kClosure = 2, kTruthfulness = 3 };

struct WalkMember {
  Formula sigma;
  Formula theta;  // the member of T that sigma stratifies
  WalkCase which = WalkCase::kBase;
  Ordinal level;  // least grid level at or above every superscript of sigma
  Verdict outcome = Verdict::kUnknown;  // kFails marks a violation
  std::string note;
};

struct WalkLevel {
  Ordinal alpha;
  std::size_t members = 0;
  std::array<std::size_t, 3> cases{};
  std::size_t unknown = 0;
  std::size_t violations = 0;
};

struct WalkReport {
  std::vector<StratifierSpec> specs;
  std::vector<Ordinal> grid;
  std::size_t base_size = 0;
  std::size_t e3_size = 0;
  std::size_t theory_size = 0;
  std::size_t pool_size = 0;
  std::vector<WalkLevel> levels;
  std::vector<WalkMember> members;
  std::array<std::size_t, 3> cases{};
  std::size_t unknown = 0;
  std::vector<WalkMember> violations;

  bool ok() const { return violations.empty(); }
};

/// The stratifiers the walk samples T+ with.
std::vector<StratifierSpec> walk_specs();

/// Offsets 0..3 above each limit up to alpha_max.
std::vector<Ordinal> walk_grid(Ordinal alpha_max);

/// T0 is the presentation without E3; T1 adds E3 over the sentence operands
/// (the base sentences when there are none); T is T1 closed under K to the
/// presentation's depth. Members of the T+ sample are visited level by level,
/// level alpha taking those whose superscripts are all at most alpha, and
/// checked by the case of the main theorem's induction they fall under.
WalkReport truth_induction_walk(const TheoryPresentation& t0, Ordinal alpha_max, const Budget& budget = {});

/// Human-readable reports; the E2 trace ends with the verdict line.
std::string render_e2_report(const E2Report& r);
std::string render_walk_report(const WalkReport& r);

}  // namespace stratum
