#pragma once

// Operator abstraction into first-order logic, a propositional certifier, a
// bounded tableau prover with equality, and the entailment pipelines built on
// them.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stratum/semantics.hpp"
#include "stratum/stratify.hpp"
#include "stratum/syntax.hpp"
#include "stratum/theory.hpp"

namespace stratum {

/// An operator subformula up to alphabetic variance: the body's free
/// variables become v0, v1, ... in order of first occurrence and its bound
/// variables b0, b1, ... by nesting depth.
struct PredicateKey {
  OperatorTag tag;
  Formula body;

  friend bool operator==(const PredicateKey&, const PredicateKey&) = default;
  friend auto operator<=>(const PredicateKey&, const PredicateKey&) = default;
};

PredicateKey predicate_key(const Formula& op_formula);

struct AbstractedFormula {
  Formula formula;
  std::map<PredicateKey, Symbol> key_table;
};

/// Replaces maximal operator subformulas by fresh predicates. One instance
/// shares its key table across every formula it abstracts.
class Abstractor {
 public:
  Formula abstract(const Formula& phi);
  const std::map<PredicateKey, Symbol>& key_table() const { return table_; }

 private:
  std::map<PredicateKey, Symbol> table_;
};

/// Each maximal K phi becomes P<k>(FV(phi) in first-occurrence order).
AbstractedFormula abstract_operators(const Formula& phi);

/// Whether the propositional skeleton is a tautology. Atoms are atomic
/// formulas and maximal quantified subformulas, the latter up to alphabetic
/// variance. Operators are abstracted first when present.
bool taut_check(const Formula& phi);
bool taut_check(const AbstractedFormula& phi);

enum class ProofStatus { kProved, kRefuted, kUnknown };
std::string to_string(ProofStatus s);

struct Budget {
  std::size_t steps = 20000;  // tableau rule applications per run
  std::size_t gamma = 2000;   // quantifier instantiations per run
  std::size_t countermodel_nodes = 1000;
  Natural max_universe = 3;

  Budget() = default;
  /// Every counter set to n.
  explicit Budget(std::size_t n) : steps(n), gamma(n), countermodel_nodes(n) {}
};

struct BudgetSpent {
  std::size_t steps = 0;
  std::size_t gamma = 0;
  std::size_t countermodel_nodes = 0;
  std::size_t tableau_runs = 0;
};

struct ProofReport {
  ProofStatus status = ProofStatus::kUnknown;
  /// Indices into the premise list and the premises themselves; set when proved.
  std::vector<std::size_t> used_indices;
  std::vector<Formula> used_premises;
  /// A structure satisfying the premises and falsifying the goal; set when refuted.
  std::optional<Countermodel> countermodel;
  BudgetSpent spent;
};

/// Status, witness premises, countermodel table and counters as text.
std::string render_report(const ProofReport& r);

/// entails({}, phi).
ProofReport prove_bounded(const Formula& phi, const Budget& budget = {});

/// Whether the premises entail phi. Proved reports carry a minimal premise
/// subset, first by size and then lexicographically among the premises of a
/// first proof; refuted reports carry a checked countermodel to
/// tau_1 -> ... -> tau_n -> phi. Throws PreconditionError unless every input
/// is a sentence.
ProofReport entails(const std::vector<Formula>& premises, const Formula& phi, const Budget& budget = {});

struct UpwardReport {
  ProofReport plain;
  ProofReport stratified;
  /// One side proved while the other was refuted.
  bool violation = false;
};

/// entails(T, phi) against entails(T+, phi+).
UpwardReport upward_check(const std::vector<Formula>& premises, const Formula& phi, const StratifierSpec& x,
                          const Budget& budget = {});

enum class CollapseOutcome { kVerified, kNoCore, kOutsideFragment, kReproofFailed };
std::string to_string(CollapseOutcome o);

struct CollapseReport {
  CollapseOutcome outcome = CollapseOutcome::kNoCore;
  OrdinalMap h;
  /// The core premises after h, in core order.
  std::vector<Formula> rewritten;
  ProofReport original;
  ProofReport reproof;
};

/// Finds a proof core, collapses its superscripts with collapse_map(., n),
/// checks the rewritten premises lie in restrict(premises, w*n), and proves
/// phi again from them. Throws PreconditionError when On(phi) reaches w*n
/// or n = 0.
CollapseReport verify_collapse(const StratifiedFragment& premises, const Formula& phi, Natural n,
                               const Budget& budget = {});

}  // namespace stratum
