#include "stratum/syntax.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "stratum/error.hpp"

namespace stratum {

std::string to_string(const OperatorTag& tag) {
  if (!tag.indexed) return "K";
  return "K^{" + to_string(tag.level) + "}";
}

// ---------------------------------------------------------------------------
// Expr

void Expr::children(NodeId i, std::vector<NodeId>& out) const {
  out.clear();
  const Node& n = nodes_[i];
  if (n.first == i) return;
  // Walk right to left over the child subtrees, then restore the order.
  for (NodeId c = i - 1;; c = nodes_[c].first - 1) {
    out.push_back(c);
    if (nodes_[c].first == n.first) break;
  }
  std::reverse(out.begin(), out.end());
}

std::vector<Node> Expr::slice(NodeId i) const {
  const NodeId base = nodes_[i].first;
  std::vector<Node> out(nodes_.begin() + base, nodes_.begin() + i + 1);
  if (base != 0)
    for (Node& n : out) n.first -= base;
  return out;
}

std::size_t Expr::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t v) {
    h ^= v + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
  };
  for (const Node& n : nodes_) {
    mix(static_cast<std::uint64_t>(n.kind) | (static_cast<std::uint64_t>(n.arity) << 8) |
        (static_cast<std::uint64_t>(n.first) << 32));
    mix(n.symbol.id());
    if (n.kind == Kind::kOp) mix(n.tag.indexed ? std::hash<Ordinal>{}(n.tag.level) + 1 : 0);
  }
  return static_cast<std::size_t>(h);
}

Term::Term() : Expr({Node{Kind::kZero, 0, 0, {}, {}}}) {}

Term Term::var(Symbol name) {
  Builder b;
  b.var(name);
  return std::move(b).term();
}

Term Term::succ(const Term& t) {
  Builder b;
  b.succ(b.append(t));
  return std::move(b).term();
}

Term Term::plus(const Term& a, const Term& c) {
  Builder b;
  const NodeId x = b.append(a);
  b.plus(x, b.append(c));
  return std::move(b).term();
}

Term Term::times(const Term& a, const Term& c) {
  Builder b;
  const NodeId x = b.append(a);
  b.times(x, b.append(c));
  return std::move(b).term();
}

Term Term::numeral(Natural n) {
  Builder b;
  b.numeral(n);
  return std::move(b).term();
}

Term Term::at(const Expr& e, NodeId i) {
  if (!is_term_kind(e.kind(i))) throw std::logic_error("Term::at on a formula node");
  return Term(e.slice(i));
}

Formula::Formula() {
  Builder b;
  const NodeId z = b.zero();
  b.eq(z, b.zero());
  *this = std::move(b).formula();
}

Formula Formula::equal(const Term& a, const Term& c) {
  Builder b;
  const NodeId x = b.append(a);
  b.eq(x, b.append(c));
  return std::move(b).formula();
}

Formula Formula::in(const Term& a, const Term& c) {
  Builder b;
  const NodeId x = b.append(a);
  b.in(x, b.append(c));
  return std::move(b).formula();
}

Formula Formula::negate(const Formula& f) {
  Builder b;
  b.negate(b.append(f));
  return std::move(b).formula();
}

Formula Formula::implies(const Formula& a, const Formula& c) {
  Builder b;
  b.reserve(a.size() + c.size() + 1);
  const NodeId x = b.append(a);
  b.implies(x, b.append(c));
  return std::move(b).formula();
}

Formula Formula::forall(Symbol x, const Formula& body) {
  Builder b;
  b.forall(x, b.append(body));
  return std::move(b).formula();
}

Formula Formula::op(OperatorTag tag, const Formula& body) {
  Builder b;
  b.op(tag, b.append(body));
  return std::move(b).formula();
}

Formula Formula::at(const Expr& e, NodeId i) {
  if (is_term_kind(e.kind(i))) throw std::logic_error("Formula::at on a term node");
  return Formula(e.slice(i));
}

// ---------------------------------------------------------------------------
// Builder

namespace {

void expect(bool ok, const char* what) {
  if (!ok) throw std::logic_error(what);
}

}  // namespace

NodeId Builder::leaf(Node n) {
  n.first = static_cast<NodeId>(nodes_.size());
  nodes_.push_back(n);
  return last();
}

NodeId Builder::unary(Node n, NodeId child) {
  expect(!nodes_.empty() && child == last(), "unary node: child must be the last subtree");
  n.first = nodes_[child].first;
  nodes_.push_back(n);
  return last();
}

NodeId Builder::binary(Node n, NodeId a, NodeId b) {
  expect(!nodes_.empty() && b == last() && nodes_[b].first >= 1 && a == nodes_[b].first - 1,
         "binary node: children must be the two last subtrees");
  n.first = nodes_[a].first;
  nodes_.push_back(n);
  return last();
}

NodeId Builder::var(Symbol name) { return leaf({Kind::kVar, 0, 0, name, {}}); }
NodeId Builder::zero() { return leaf({Kind::kZero, 0, 0, {}, {}}); }

NodeId Builder::numeral(Natural n) {
  NodeId t = zero();
  for (Natural k = 0; k < n; ++k) t = succ(t);
  return t;
}

NodeId Builder::succ(NodeId t) { return unary({Kind::kSucc, 0, 0, {}, {}}, t); }
NodeId Builder::plus(NodeId a, NodeId b) { return binary({Kind::kPlus, 0, 0, {}, {}}, a, b); }
NodeId Builder::times(NodeId a, NodeId b) { return binary({Kind::kTimes, 0, 0, {}, {}}, a, b); }
NodeId Builder::eq(NodeId a, NodeId b) { return binary({Kind::kEq, 0, 0, {}, {}}, a, b); }
NodeId Builder::in(NodeId a, NodeId b) { return binary({Kind::kIn, 0, 0, {}, {}}, a, b); }
NodeId Builder::negate(NodeId f) { return unary({Kind::kNot, 0, 0, {}, {}}, f); }
NodeId Builder::implies(NodeId a, NodeId b) { return binary({Kind::kImplies, 0, 0, {}, {}}, a, b); }
NodeId Builder::forall(Symbol x, NodeId body) { return unary({Kind::kForall, 0, 0, x, {}}, body); }
NodeId Builder::op(OperatorTag tag, NodeId body) { return unary({Kind::kOp, 0, 0, {}, tag}, body); }

NodeId Builder::pred(Symbol name, std::uint32_t arity) {
  NodeId first = static_cast<NodeId>(nodes_.size());
  for (std::uint32_t k = 0; k < arity; ++k) {
    expect(first > 0, "predicate: not enough argument subtrees");
    first = nodes_[first - 1].first;
  }
  nodes_.push_back({Kind::kPred, arity, first, name, {}});
  return last();
}

NodeId Builder::append(const Expr& e, NodeId i) {
  const NodeId base = e[i].first;
  const auto offset = static_cast<std::int64_t>(nodes_.size()) - static_cast<std::int64_t>(base);
  for (NodeId k = base; k <= i; ++k) {
    Node n = e[k];
    n.first = static_cast<NodeId>(n.first + offset);
    nodes_.push_back(n);
  }
  return last();
}

NodeId Builder::duplicate(NodeId i) {
  const NodeId base = nodes_[i].first;
  std::vector<Node> copy(nodes_.begin() + base, nodes_.begin() + i + 1);
  const NodeId offset = static_cast<NodeId>(nodes_.size()) - base;
  for (Node& n : copy) n.first += offset;
  nodes_.insert(nodes_.end(), copy.begin(), copy.end());
  return last();
}

NodeId Builder::push_like(const Node& node, NodeId subtree_first) {
  Node n = node;
  n.first = subtree_first;
  nodes_.push_back(n);
  return last();
}

Formula Builder::formula() && {
  expect(!nodes_.empty() && !is_term_kind(nodes_.back().kind) && nodes_.back().first == 0,
         "builder does not hold exactly one formula");
  return Formula(std::move(nodes_));
}

Term Builder::term() && {
  expect(!nodes_.empty() && is_term_kind(nodes_.back().kind) && nodes_.back().first == 0,
         "builder does not hold exactly one term");
  return Term(std::move(nodes_));
}

// ---------------------------------------------------------------------------
// Free variables and substitution

namespace {

/// Tracks how many enclosing binders bind each symbol.
class Scope {
 public:
  void bind(Symbol x) { ++counts_[x]; }
  void unbind(Symbol x) {
    if (--counts_[x] == 0) counts_.erase(x);
  }
  bool bound(Symbol x) const { return counts_.contains(x); }

 private:
  std::unordered_map<Symbol, int> counts_;
};

std::vector<Symbol> collect_free(const Expr& e) {
  std::vector<Symbol> out;
  std::unordered_set<Symbol> seen;
  Scope scope;
  traverse(e, e.root(), [&](Visit v, NodeId i, std::uint32_t) {
    const Node& n = e[i];
    if (n.kind == Kind::kForall) {
      if (v == Visit::kEnter) scope.bind(n.symbol);
      if (v == Visit::kLeave) scope.unbind(n.symbol);
    } else if (n.kind == Kind::kVar && v == Visit::kEnter && !scope.bound(n.symbol) &&
               seen.insert(n.symbol).second) {
      out.push_back(n.symbol);
    }
    return true;
  });
  return out;
}

/// Rebuilds `f` replacing free variable occurrences via `replacement`, which
/// returns null when the occurrence stays. `on_free` is called with the scope
/// first, so it can reject captures.
template <class Replace>
Formula rebuild_free_vars(const Formula& f, Replace&& replacement) {
  Builder out;
  out.reserve(f.size());
  std::vector<NodeId> start(f.size());
  Scope scope;
  traverse(f, f.root(), [&](Visit v, NodeId i, std::uint32_t) {
    const Node& n = f[i];
    if (v == Visit::kEnter) {
      start[i] = static_cast<NodeId>(out.size());
      if (n.kind == Kind::kForall) scope.bind(n.symbol);
      return true;
    }
    if (v == Visit::kLeave) {
      if (n.kind == Kind::kForall) scope.unbind(n.symbol);
      const Term* u = (n.kind == Kind::kVar && !scope.bound(n.symbol)) ? replacement(n.symbol, scope) : nullptr;
      if (u != nullptr)
        out.append(*u);
      else
        out.push_like(n, start[i]);
    }
    return true;
  });
  return std::move(out).formula();
}

}  // namespace

std::vector<Symbol> free_vars(const Formula& f) { return collect_free(f); }
std::vector<Symbol> free_vars(const Term& t) { return collect_free(t); }

bool is_sentence(const Formula& f) { return free_vars(f).empty(); }

Formula substitute(const Formula& f, Symbol x, const Term& u) {
  const std::vector<Symbol> u_vars = free_vars(u);
  return rebuild_free_vars(f, [&](Symbol v, const Scope& scope) -> const Term* {
    if (v != x) return nullptr;
    for (Symbol y : u_vars)
      if (scope.bound(y)) throw CaptureError(x.name(), y.name());
    return &u;
  });
}

Formula assign_substitute(const Formula& f, const Assignment& s) {
  std::map<Symbol, Term> numerals;
  for (Symbol x : free_vars(f)) {
    auto it = s.find(x);
    if (it == s.end()) throw PreconditionError("assignment misses free variable '" + x.name() + "'");
    numerals.emplace(x, Term::numeral(it->second));
  }
  if (numerals.empty()) return f;
  return rebuild_free_vars(f, [&](Symbol v, const Scope&) -> const Term* { return &numerals.at(v); });
}

Formula universal_closure(const Formula& f, std::span<const Symbol> vars) {
  for (Symbol x : free_vars(f))
    if (std::find(vars.begin(), vars.end(), x) == vars.end())
      throw PreconditionError("closure variables miss free variable '" + x.name() + "'");
  Builder b;
  b.reserve(f.size() + vars.size());
  NodeId body = b.append(f);
  for (std::size_t k = vars.size(); k-- > 0;) body = b.forall(vars[k], body);
  return std::move(b).formula();
}

Formula universal_closure(const Formula& f) {
  const std::vector<Symbol> vars = free_vars(f);
  return universal_closure(f, vars);
}

Formula canonical_rename(const Formula& f, const std::map<Symbol, Symbol>& free_names,
                         std::string_view bound_prefix) {
  std::vector<Node> nodes(f.nodes().begin(), f.nodes().end());
  std::vector<std::pair<Symbol, Symbol>> binders;  // (original, canonical)
  std::vector<Symbol> depth_names;
  traverse(f, f.root(), [&](Visit v, NodeId i, std::uint32_t) {
    Node& n = nodes[i];
    if (n.kind == Kind::kForall) {
      if (v == Visit::kEnter) {
        const std::size_t d = binders.size();
        if (depth_names.size() <= d) depth_names.emplace_back(std::string(bound_prefix) + std::to_string(d));
        binders.emplace_back(n.symbol, depth_names[d]);
        n.symbol = depth_names[d];
      } else if (v == Visit::kLeave) {
        binders.pop_back();
      }
    } else if (n.kind == Kind::kVar && v == Visit::kEnter) {
      auto it = std::find_if(binders.rbegin(), binders.rend(), [&](const auto& b) { return b.first == n.symbol; });
      if (it != binders.rend()) {
        n.symbol = it->second;
      } else if (auto m = free_names.find(n.symbol); m != free_names.end()) {
        n.symbol = m->second;
      }
    }
    return true;
  });
  Builder b;
  b.reserve(nodes.size());
  for (const Node& n : nodes) b.push_like(n, n.first);
  return std::move(b).formula();
}

bool alpha_equal(const Formula& f, const Formula& g) {
  if (f.size() != g.size()) return false;
  static const std::map<Symbol, Symbol> keep;
  return canonical_rename(f, keep, "#b") == canonical_rename(g, keep, "#b");
}

Formula conjunction(const Formula& a, const Formula& b) {
  return Formula::negate(Formula::implies(a, Formula::negate(b)));
}

Formula biconditional(const Formula& a, const Formula& b) {
  return conjunction(Formula::implies(a, b), Formula::implies(b, a));
}

Formula exists(Symbol x, const Formula& f) { return Formula::negate(Formula::forall(x, Formula::negate(f))); }

std::size_t term_height(const Expr& e, NodeId i) {
  std::size_t best = 0;
  std::vector<std::pair<NodeId, std::size_t>> stack{{i, 0}};
  std::vector<NodeId> kids;
  while (!stack.empty()) {
    const auto [id, h] = stack.back();
    stack.pop_back();
    best = std::max(best, h);
    e.children(id, kids);
    for (NodeId k : kids) stack.emplace_back(k, h + 1);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Depth, superscripts, language membership

std::size_t depth(const Formula& f) {
  std::vector<std::uint32_t> d(f.size(), 0);
  for (NodeId i = 0; i < f.size(); ++i) {
    switch (f.kind(i)) {
      case Kind::kNot:
      case Kind::kForall:
        d[i] = d[i - 1];
        break;
      case Kind::kImplies:
        d[i] = std::max(d[f.lhs(i)], d[f.rhs(i)]);
        break;
      case Kind::kOp:
        d[i] = d[i - 1] + 1;
        break;
      default:
        break;
    }
  }
  return d[f.root()];
}

std::set<Ordinal> on_set(const Formula& f) {
  std::set<Ordinal> out;
  for (const Node& n : f.nodes())
    if (n.kind == Kind::kOp && n.tag.indexed) out.insert(n.tag.level);
  return out;
}

bool is_arithmetic(const Formula& f) { return operator_count(f) == 0; }

bool is_epistemic(const Formula& f) {
  return std::none_of(f.nodes().begin(), f.nodes().end(),
                      [](const Node& n) { return n.kind == Kind::kOp && n.tag.indexed; });
}

bool is_stratified(const Formula& f) {
  return std::none_of(f.nodes().begin(), f.nodes().end(),
                      [](const Node& n) { return n.kind == Kind::kOp && !n.tag.indexed; });
}

std::size_t operator_count(const Formula& f) {
  return static_cast<std::size_t>(
      std::count_if(f.nodes().begin(), f.nodes().end(), [](const Node& n) { return n.kind == Kind::kOp; }));
}

}  // namespace stratum
