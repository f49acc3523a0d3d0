#pragma once

// Schema instances for the background theories, K-closure, sampled T(+)
// fragments, T cap alpha, and pool-relative uniformity.

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "stratum/stratify.hpp"
#include "stratum/syntax.hpp"

namespace stratum {

enum class SchemaId {
  kE1,
  kE2,
  kE2prime,
  kE3,
  kE4,
  kAssignedValidity,
  kMechanicalness,
  kEAInduction,
  kPAAxiom,
};

/// Accepts the names printed by to_string ("E1", "E2prime", "PAAxiom", ...).
SchemaId parse_schema_id(std::string_view text);
std::string to_string(SchemaId id);

struct SchemaArgs {
  Formula phi;
  std::optional<Formula> psi;  // E2, E2prime
  std::optional<Assignment> s;  // AssignedValidity
  /// Order of the universal closure; empty means free variables in order of
  /// first occurrence.
  std::vector<Symbol> closure_vars;
  Symbol induction_var{"x"};     // EAInduction
  Symbol index_var{"e"};         // Mechanicalness
  Symbol element_var{"x"};       // Mechanicalness
  std::size_t pa_index = 0;      // PAAxiom
  /// When set, E1 and AssignedValidity reject a phi it reports invalid.
  std::function<bool(const Formula&)> validity;
};

/// The schema instance as a sentence. Throws PreconditionError on a side
/// condition: depth(phi) > depth(psi) for E2prime, e free in phi for
/// Mechanicalness, a missing psi or s, or a phi the validity check rejects.
Formula instantiate_schema(SchemaId id, const SchemaArgs& args);

/// The fixed presentation of the Peano axioms other than induction.
const std::vector<Formula>& pa_axioms();

/// Finite sets of sentences, ordered for deterministic iteration.
using StratifiedFragment = std::set<Formula>;

/// F together with K applied up to `steps` times to each member.
std::set<Formula> k_close(const std::set<Formula>& fragment, std::size_t steps);

/// {stratify(phi, X) : X in specs}.
StratifiedFragment oplus_sample(const Formula& phi, const std::vector<StratifierSpec>& specs);

/// T cap alpha: members all of whose superscripts are below alpha.
StratifiedFragment restrict(const StratifiedFragment& fragment, Ordinal alpha);

struct UniformViolation {
  Formula member;
  OrdinalMap h;
  Formula missing;
};

/// Every member whose superscripts lie in the pool, mapped by every
/// order-preserving h from On(member) into the pool, must be a member.
std::vector<UniformViolation> check_uniform(const StratifiedFragment& fragment, const std::set<Ordinal>& pool);

/// Least superset of the fragment that check_uniform accepts over the pool.
StratifiedFragment uniform_closure(const StratifiedFragment& fragment, const std::set<Ordinal>& pool);

// ---------------------------------------------------------------------------
// Theory presentations

struct SchemaUse {
  SchemaId id;
  /// Explicit instance; when absent the schema ranges over the operand pool.
  std::optional<SchemaArgs> args;
};

struct TheoryPresentation {
  std::vector<Formula> sentences;
  std::vector<SchemaUse> schemas;
  std::vector<Formula> operands;
  std::size_t k_closure_depth = 0;
};

/// Line-based format:
///
///   # comment
///   sentence: <formula>
///   operand: <formula>
///   schema: E2; phi = <formula>; psi = <formula>
///   schema: AssignedValidity; phi = (x=x); s = x:3
///   schema: EAInduction; phi = <formula>; var = x
///   schema: PAAxiom; index = 2
///   schema: E3                 (ranges over the operands)
///   k-closure: 2
///
/// Throws ParseError with the byte offset of the offending line.
TheoryPresentation parse_theory(std::string_view text);

/// Instances of one schema over the operand pool. E1 and AssignedValidity
/// keep only operands the validity check accepts (none without one);
/// EAInduction ranges over every free variable of each operand; PAAxiom
/// yields the whole list.
std::vector<Formula> pool_instances(SchemaId id, const std::vector<Formula>& operands,
                                    const std::function<bool(const Formula&)>& validity = {});

/// Sentences, then schema instances, then the K-closure; duplicates removed,
/// order of first appearance kept.
std::vector<Formula> expand(const TheoryPresentation& t, const std::function<bool(const Formula&)>& validity = {});

}  // namespace stratum
