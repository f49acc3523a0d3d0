#pragma once

// Terms and formulas of the base logic over the arithmetic signature
// (0, S, +, *, =) plus the uninterpreted binary relation In, with plain (K)
// and ordinal-indexed (K^a) operators.
//
// Expressions are stored as a flat post-order array of nodes. The subtree of
// node i occupies the contiguous range [nodes[i].first, i], so a unary node's
// child is i-1, a binary node's right child is i-1 and its left child ends
// just before the right child's subtree. Whole-formula passes are plain loops
// over the array; values are cheap to copy and free of pointer chains.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stratum/ordinal.hpp"
#include "stratum/symbol.hpp"

namespace stratum {

enum class Kind : std::uint8_t {
  // terms
  kVar,
  kZero,
  kSucc,
  kPlus,
  kTimes,
  // atomic formulas
  kEq,
  kIn,
  kPred,  // fresh predicate introduced by operator abstraction
  // compound formulas
  kNot,
  kImplies,
  kForall,
  kOp,
};

constexpr bool is_term_kind(Kind k) { return k <= Kind::kTimes; }
constexpr bool is_atomic_kind(Kind k) { return k == Kind::kEq || k == Kind::kIn || k == Kind::kPred; }

/// Either the plain operator K or an indexed operator K^level.
struct OperatorTag {
  bool indexed = false;
  Ordinal level{};

  static constexpr OperatorTag plain() { return {}; }
  static constexpr OperatorTag at(Ordinal level) { return {true, level}; }

  friend bool operator==(const OperatorTag&, const OperatorTag&) = default;
  friend auto operator<=>(const OperatorTag&, const OperatorTag&) = default;
};

/// "K" or "K^{ordinal}".
std::string to_string(const OperatorTag& tag);

using NodeId = std::uint32_t;

struct Node {
  Kind kind = Kind::kZero;
  std::uint32_t arity = 0;  // kPred only
  NodeId first = 0;         // first index of this node's subtree
  Symbol symbol{};          // kVar name, kForall binder, kPred name
  OperatorTag tag{};        // kOp only

  friend bool operator==(const Node&, const Node&) = default;
  friend auto operator<=>(const Node&, const Node&) = default;
};

/// Read-only view shared by Term and Formula.
class Expr {
 public:
  std::span<const Node> nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  NodeId root() const { return static_cast<NodeId>(nodes_.size() - 1); }
  const Node& operator[](NodeId i) const { return nodes_[i]; }
  Kind kind(NodeId i) const { return nodes_[i].kind; }

  /// Sole child of a unary node (S, ~, forall, K).
  NodeId child(NodeId i) const { return i - 1; }
  NodeId lhs(NodeId i) const { return nodes_[i - 1].first - 1; }
  NodeId rhs(NodeId i) const { return i - 1; }

  /// Children of `i` in left-to-right order.
  void children(NodeId i, std::vector<NodeId>& out) const;

  std::size_t hash() const;

  /// Copy of the subtree rooted at i with indices rebased to zero.
  std::vector<Node> slice(NodeId i) const;

 protected:
  Expr() = default;
  explicit Expr(std::vector<Node> nodes) : nodes_(std::move(nodes)) {}

  std::vector<Node> nodes_;

  friend class Builder;
};

class Term : public Expr {
 public:
  /// The term 0.
  Term();

  static Term var(Symbol name);
  static Term var(std::string_view name) { return var(Symbol(name)); }
  static Term zero() { return Term(); }
  static Term succ(const Term& t);
  static Term plus(const Term& a, const Term& b);
  static Term times(const Term& a, const Term& b);
  /// S(S(...S(0))) with n applications.
  static Term numeral(Natural n);

  /// Subterm rooted at i of any expression.
  static Term at(const Expr& e, NodeId i);

  friend bool operator==(const Term& a, const Term& b) { return a.nodes_ == b.nodes_; }
  friend auto operator<=>(const Term& a, const Term& b) { return a.nodes_ <=> b.nodes_; }

 private:
  explicit Term(std::vector<Node> nodes) : Expr(std::move(nodes)) {}
  friend class Builder;
};

class Formula : public Expr {
 public:
  /// The formula 0=0.
  Formula();

  static Formula equal(const Term& a, const Term& b);
  static Formula in(const Term& a, const Term& b);
  static Formula negate(const Formula& f);
  static Formula implies(const Formula& a, const Formula& b);
  static Formula forall(Symbol x, const Formula& body);
  static Formula forall(std::string_view x, const Formula& body) { return forall(Symbol(x), body); }
  static Formula op(OperatorTag tag, const Formula& body);
  /// K applied to body.
  static Formula know(const Formula& body) { return op(OperatorTag::plain(), body); }

  /// Subformula rooted at i.
  static Formula at(const Expr& e, NodeId i);

  friend bool operator==(const Formula& a, const Formula& b) { return a.nodes_ == b.nodes_; }
  friend auto operator<=>(const Formula& a, const Formula& b) { return a.nodes_ <=> b.nodes_; }

 private:
  explicit Formula(std::vector<Node> nodes) : Expr(std::move(nodes)) {}
  friend class Builder;
};

/// Appends nodes in post-order. Every constructor expects its children to be
/// the subtrees immediately preceding it, in left-to-right order, and throws
/// std::logic_error otherwise.
class Builder {
 public:
  Builder() = default;
  void reserve(std::size_t n) { nodes_.reserve(n); }
  std::size_t size() const { return nodes_.size(); }
  const Node& operator[](NodeId i) const { return nodes_[i]; }
  NodeId last() const { return static_cast<NodeId>(nodes_.size() - 1); }

  NodeId var(Symbol name);
  NodeId zero();
  NodeId numeral(Natural n);
  NodeId succ(NodeId t);
  NodeId plus(NodeId a, NodeId b);
  NodeId times(NodeId a, NodeId b);
  NodeId eq(NodeId a, NodeId b);
  NodeId in(NodeId a, NodeId b);
  /// Predicate whose `arity` argument terms are the preceding subtrees.
  NodeId pred(Symbol name, std::uint32_t arity);
  NodeId negate(NodeId f);
  NodeId implies(NodeId a, NodeId b);
  NodeId forall(Symbol x, NodeId body);
  NodeId op(OperatorTag tag, NodeId body);

  /// Appends a copy of the subtree of `e` rooted at `i`.
  NodeId append(const Expr& e, NodeId i);
  NodeId append(const Expr& e) { return append(e, e.root()); }
  /// Appends a copy of one of this builder's own subtrees.
  NodeId duplicate(NodeId i);

  /// Appends a node whose children are already in place; `first` is computed.
  NodeId push_like(const Node& node, NodeId subtree_first);

  Formula formula() &&;
  Term term() &&;

 private:
  NodeId leaf(Node n);
  NodeId unary(Node n, NodeId child);
  NodeId binary(Node n, NodeId a, NodeId b);

  std::vector<Node> nodes_;
};

// ---------------------------------------------------------------------------
// Traversal

enum class Visit { kEnter, kBetween, kLeave };

/// Depth-first, left-to-right walk with an explicit stack.
///
/// `visit(Visit::kEnter, id, 0)` returns whether to descend into `id`; when it
/// returns false neither the children nor the matching kLeave are visited.
/// kBetween fires before the k-th child (k >= 1).
template <class Visitor>
void traverse(const Expr& e, NodeId root, Visitor&& visit) {
  struct Frame {
    NodeId id;
    Visit phase;
    std::uint32_t index;
  };
  std::vector<Frame> stack{{root, Visit::kEnter, 0}};
  std::vector<NodeId> kids;
  while (!stack.empty()) {
    const Frame frame = stack.back();
    stack.pop_back();
    if (frame.phase != Visit::kEnter) {
      visit(frame.phase, frame.id, frame.index);
      continue;
    }
    if (!visit(Visit::kEnter, frame.id, 0u)) continue;
    e.children(frame.id, kids);
    stack.push_back({frame.id, Visit::kLeave, 0});
    for (std::size_t k = kids.size(); k-- > 0;) {
      stack.push_back({kids[k], Visit::kEnter, 0});
      if (k > 0) stack.push_back({frame.id, Visit::kBetween, static_cast<std::uint32_t>(k)});
    }
  }
}

// ---------------------------------------------------------------------------
// Syntactic operations

/// Natural-number assignment to variables, as used for phi^s.
using Assignment = std::map<Symbol, Natural>;

/// Free variables in order of first (left-to-right) occurrence.
std::vector<Symbol> free_vars(const Formula& f);
std::vector<Symbol> free_vars(const Term& t);

bool is_sentence(const Formula& f);

/// f(x|u). Throws CaptureError when a free occurrence of x sits under a
/// binder of a variable of u.
Formula substitute(const Formula& f, Symbol x, const Term& u);

/// True iff g is an alphabetic variant of f.
bool alpha_equal(const Formula& f, const Formula& g);

/// phi^s: every free variable replaced by the numeral of its value. Throws
/// PreconditionError when s misses a free variable.
Formula assign_substitute(const Formula& f, const Assignment& s);

/// forall vars[0] ... forall vars[n-1] f. Throws PreconditionError when a
/// free variable of f is missing from vars.
Formula universal_closure(const Formula& f, std::span<const Symbol> vars);
/// Closure over the free variables in first-occurrence order.
Formula universal_closure(const Formula& f);

/// Sugar with the parser's expansions: ~(a -> ~b), ~((a -> b) -> ~(b -> a)),
/// and ~forall x. ~f.
Formula conjunction(const Formula& a, const Formula& b);
Formula biconditional(const Formula& a, const Formula& b);
Formula exists(Symbol x, const Formula& f);

/// Height of a term tree (variables and 0 have height 0).
std::size_t term_height(const Expr& e, NodeId i);

/// Nesting depth of operators; indexed and plain operators count alike.
std::size_t depth(const Formula& f);

/// Superscripts of the indexed operators occurring in f.
std::set<Ordinal> on_set(const Formula& f);

/// No operators at all.
bool is_arithmetic(const Formula& f);
/// Only plain operators.
bool is_epistemic(const Formula& f);
/// Only indexed operators.
bool is_stratified(const Formula& f);

/// Number of operator nodes.
std::size_t operator_count(const Formula& f);

/// Renames bound variables to `bound_prefix` + binder nesting depth and free
/// variables through `free_names` (unmapped free variables keep their name).
/// Alphabetic variants map to identical results.
Formula canonical_rename(const Formula& f, const std::map<Symbol, Symbol>& free_names,
                         std::string_view bound_prefix);

/// Renders f canonically (see parse.hpp for the grammar).
std::string render(const Formula& f);
std::string render(const Term& t);

}  // namespace stratum

template <>
struct std::hash<stratum::Formula> {
  std::size_t operator()(const stratum::Formula& f) const noexcept { return f.hash(); }
};

template <>
struct std::hash<stratum::Term> {
  std::size_t operator()(const stratum::Term& t) const noexcept { return t.hash(); }
};
