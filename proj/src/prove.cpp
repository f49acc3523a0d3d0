#include "stratum/prove.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <set>
#include <stdexcept>

#include "stratum/error.hpp"
#include "stratum/parse.hpp"

namespace stratum {

// ---------------------------------------------------------------------------
// Abstraction

namespace {

Symbol slot_symbol(std::size_t k) { return Symbol("v" + std::to_string(k)); }

// Maximal subtrees whose root satisfies `is_root`, as (first, root) pairs in
// ascending order.
template <class Pred>
std::vector<std::pair<NodeId, NodeId>> maximal_ranges(const Formula& f, Pred is_root) {
  std::vector<std::pair<NodeId, NodeId>> out;
  for (std::int64_t i = f.root(); i >= 0;) {
    const auto id = static_cast<NodeId>(i);
    if (is_root(id)) {
      out.emplace_back(f[id].first, id);
      i = static_cast<std::int64_t>(f[id].first) - 1;
    } else {
      --i;
    }
  }
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace

PredicateKey predicate_key(const Formula& op_formula) {
  if (op_formula.kind(op_formula.root()) != Kind::kOp) throw PreconditionError("operator formula expected");
  const Formula body = Formula::at(op_formula, op_formula.child(op_formula.root()));
  std::map<Symbol, Symbol> slots;
  const auto fv = free_vars(body);
  for (std::size_t k = 0; k < fv.size(); ++k) slots.emplace(fv[k], slot_symbol(k));
  return {op_formula[op_formula.root()].tag, canonical_rename(body, slots, "b")};
}

Formula Abstractor::abstract(const Formula& phi) {
  const auto ranges = maximal_ranges(phi, [&](NodeId i) { return phi.kind(i) == Kind::kOp; });
  if (ranges.empty()) return phi;
  Builder out;
  out.reserve(phi.size());
  std::vector<NodeId> start(phi.size(), 0);
  std::size_t next_range = 0;
  for (NodeId i = 0; i < phi.size(); ++i) {
    if (next_range < ranges.size() && ranges[next_range].first == i) {
      const NodeId root = ranges[next_range++].second;
      start[i] = static_cast<NodeId>(out.size());
      const Formula op = Formula::at(phi, root);
      PredicateKey key = predicate_key(op);
      auto it = table_.find(key);
      if (it == table_.end()) it = table_.emplace(std::move(key), Symbol("P" + std::to_string(table_.size()))).first;
      const auto fv = free_vars(Formula::at(op, op.child(op.root())));
      for (Symbol v : fv) out.var(v);
      out.pred(it->second, static_cast<std::uint32_t>(fv.size()));
      i = root;
      continue;
    }
    start[i] = static_cast<NodeId>(out.size());
    out.push_like(phi[i], start[phi[i].first]);
  }
  return std::move(out).formula();
}

AbstractedFormula abstract_operators(const Formula& phi) {
  Abstractor a;
  Formula f = a.abstract(phi);
  return {std::move(f), a.key_table()};
}

// ---------------------------------------------------------------------------
// Propositional skeleton

namespace {

// Clauses over variables 1..n; a literal is +v or -v.
class Dpll {
 public:
  int new_var() { return ++vars_; }
  void clause(std::vector<int> c) { clauses_.push_back(std::move(c)); }

  bool satisfiable() {
    value_.assign(static_cast<std::size_t>(vars_) + 1, 0);
    struct Decision {
      std::size_t trail_size;
      int lit;
      bool flipped;
    };
    std::vector<Decision> decisions;
    std::vector<int> trail;
    auto assign = [&](int lit) {
      value_[static_cast<std::size_t>(std::abs(lit))] = lit > 0 ? 1 : -1;
      trail.push_back(lit);
    };
    for (;;) {
      if (!propagate(trail, assign)) {
        for (;;) {
          if (decisions.empty()) return false;
          Decision d = decisions.back();
          decisions.pop_back();
          while (trail.size() > d.trail_size) {
            value_[static_cast<std::size_t>(std::abs(trail.back()))] = 0;
            trail.pop_back();
          }
          if (!d.flipped) {
            decisions.push_back({d.trail_size, -d.lit, true});
            assign(-d.lit);
            break;
          }
        }
        continue;
      }
      int pick = 0;
      for (int v = 1; v <= vars_ && !pick; ++v)
        if (value_[static_cast<std::size_t>(v)] == 0) pick = v;
      if (!pick) return true;
      decisions.push_back({trail.size(), pick, false});
      assign(pick);
    }
  }

 private:
  int lit_value(int lit) const {
    const int v = value_[static_cast<std::size_t>(std::abs(lit))];
    return lit > 0 ? v : -v;
  }

  template <class Assign>
  bool propagate(std::vector<int>&, Assign&& assign) {
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto& c : clauses_) {
        int unassigned = 0, last = 0;
        bool sat = false;
        for (int lit : c) {
          const int v = lit_value(lit);
          if (v > 0) {
            sat = true;
            break;
          }
          if (v == 0) {
            ++unassigned;
            last = lit;
          }
        }
        if (sat) continue;
        if (unassigned == 0) return false;
        if (unassigned == 1) {
          assign(last);
          changed = true;
        }
      }
    }
    return true;
  }

  int vars_ = 0;
  std::vector<std::vector<int>> clauses_;
  std::vector<int> value_;
};

bool skeleton_tautology(const Formula& f) {
  const auto quantified = maximal_ranges(f, [&](NodeId i) { return f.kind(i) == Kind::kForall; });
  Dpll sat;
  std::map<Formula, int> atoms;
  auto atom = [&](Formula key) {
    auto it = atoms.find(key);
    if (it == atoms.end()) it = atoms.emplace(std::move(key), sat.new_var()).first;
    return it->second;
  };
  std::vector<int> lit(f.size(), 0);
  std::size_t next_range = 0;
  for (NodeId i = 0; i < f.size(); ++i) {
    if (next_range < quantified.size() && quantified[next_range].first == i) {
      i = quantified[next_range++].second;
      lit[i] = atom(canonical_rename(Formula::at(f, i), {}, "#b"));
      continue;
    }
    switch (f.kind(i)) {
      case Kind::kEq:
      case Kind::kIn:
      case Kind::kPred: lit[i] = atom(Formula::at(f, i)); break;
      case Kind::kNot: lit[i] = -lit[f.child(i)]; break;
      case Kind::kImplies: {
        const int a = lit[f.lhs(i)], b = lit[f.rhs(i)], v = sat.new_var();
        sat.clause({-v, -a, b});
        sat.clause({a, v});
        sat.clause({-b, v});
        lit[i] = v;
        break;
      }
      case Kind::kOp: throw std::logic_error("skeleton_tautology: operator left after abstraction");
      default: break;  // terms
    }
  }
  sat.clause({-lit[f.root()]});
  return !sat.satisfiable();
}

}  // namespace

bool taut_check(const AbstractedFormula& phi) { return skeleton_tautology(phi.formula); }

bool taut_check(const Formula& phi) { return skeleton_tautology(Abstractor().abstract(phi)); }

// ---------------------------------------------------------------------------
// Tableau

namespace {

using Origin = std::vector<std::uint32_t>;  // sorted premise indices

Origin unite(const Origin& a, const Origin& b) {
  Origin out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

struct Signed {
  bool sign;  // true: the formula holds on the branch
  Formula f;
  Origin origin;
};

// Formulas, terms and origins are interned per run, so a branch is a few
// flat arrays of ids and copying one at a split is cheap.
using Id = std::uint32_t;
constexpr Id kNone = std::numeric_limits<Id>::max();

struct Entry {
  bool sign;
  Id f;
  Id origin;
};

struct GammaEntry {
  Id f;
  Id origin;
  std::size_t next = 0;
};

struct Branch {
  std::deque<Entry> linear;
  std::vector<Entry> beta;
  std::vector<GammaEntry> gammas;
  std::size_t gamma_cursor = 0;
  std::vector<Id> seen;  // origin of (f, sign) at 2f + sign, kNone when absent
  std::vector<Id> universe;
  std::vector<char> in_universe;
  std::optional<Id> clash;
};

class Tableau {
 public:
  enum class Result { kClosed, kOpen, kExhausted };

  Tableau(const Budget& budget, std::size_t height_cap) : budget_(budget), cap_(height_cap) {}

  Result run(std::vector<Signed> initial) {
    if (budget_.steps == 0) return Result::kExhausted;
    std::vector<Branch> stack(1);
    add_term(stack[0], term_id(Term::zero()));
    for (Signed& s : initial) {
      const Id f = formula_id(s.f);
      for (Id t : info_[f].ground_terms) add_term(stack[0], t);
      add(stack[0], {s.sign, f, origin_id(s.origin)});
    }
    Id core = origin_id({});
    while (!stack.empty()) {
      Branch b = std::move(stack.back());
      stack.pop_back();
      for (;;) {
        if (b.clash) {
          core = unite_ids(core, *b.clash);
          break;
        }
        if (steps_ >= budget_.steps) return Result::kExhausted;
        if (!b.linear.empty()) {
          ++steps_;
          const Entry s = b.linear.front();
          b.linear.pop_front();
          expand(b, s);
          continue;
        }
        if (auto split = pick_beta(b)) {
          ++steps_;
          const Entry s = b.beta[*split];
          b.beta.erase(b.beta.begin() + static_cast<std::ptrdiff_t>(*split));
          Branch other = b;
          add(other, {true, info_[s.f].rhs, s.origin});
          add(b, {false, info_[s.f].lhs, s.origin});
          stack.push_back(std::move(other));
          continue;
        }
        if (gamma_step(b)) continue;
        if (gamma_ >= budget_.gamma && has_pending_gamma(b)) return Result::kExhausted;
        return Result::kOpen;
      }
    }
    core_ = origins_[core];
    return Result::kClosed;
  }

  const Origin& core() const { return core_; }
  std::size_t steps() const { return steps_; }
  std::size_t gamma() const { return gamma_; }

 private:
  struct Info {
    Kind kind = Kind::kZero;
    Id lhs = kNone;  // child for ~ and forall, left side for ->
    Id rhs = kNone;
    bool reflexive_eq = false;
    std::vector<Id> ground_terms;
  };

  Id formula_id(const Formula& f) {
    if (auto it = formula_ids_.find(f); it != formula_ids_.end()) return it->second;
    const NodeId r = f.root();
    Info info;
    info.kind = f.kind(r);
    switch (info.kind) {
      case Kind::kNot: info.lhs = formula_id(Formula::at(f, f.child(r))); break;
      case Kind::kImplies:
        info.lhs = formula_id(Formula::at(f, f.lhs(r)));
        info.rhs = formula_id(Formula::at(f, f.rhs(r)));
        break;
      case Kind::kForall: break;
      case Kind::kEq: info.reflexive_eq = Term::at(f, f.lhs(r)) == Term::at(f, f.rhs(r)); [[fallthrough]];
      default:
        if (is_atomic_kind(info.kind)) info.ground_terms = ground_terms(f);
        break;
    }
    const Id id = static_cast<Id>(formulas_.size());
    formulas_.push_back(f);
    info_.push_back(std::move(info));
    formula_ids_.emplace(f, id);
    return id;
  }

  Id term_id(const Term& t) {
    auto [it, fresh] = term_ids_.emplace(t, static_cast<Id>(terms_.size()));
    if (fresh) terms_.push_back(t);
    return it->second;
  }

  Id origin_id(const Origin& o) {
    auto [it, fresh] = origin_ids_.emplace(o, static_cast<Id>(origins_.size()));
    if (fresh) origins_.push_back(o);
    return it->second;
  }

  Id unite_ids(Id a, Id b) {
    if (a == b) return a;
    const auto key = std::minmax(a, b);
    if (auto it = unions_.find(key); it != unions_.end()) return it->second;
    const Id u = origin_id(unite(origins_[a], origins_[b]));
    unions_.emplace(key, u);
    return u;
  }

  // Ground subterms up to the height cap. Parameters are the only free
  // variables that reach a branch.
  std::vector<Id> ground_terms(const Formula& f) {
    std::vector<Id> out;
    std::vector<char> ground(f.size(), 1);
    for (NodeId i = 0; i < f.size(); ++i) {
      const Kind k = f.kind(i);
      if (!is_term_kind(k)) continue;
      if (k == Kind::kVar) ground[i] = f[i].symbol.name().starts_with("#c");
      else if (k == Kind::kSucc) ground[i] = ground[f.child(i)];
      else if (k == Kind::kPlus || k == Kind::kTimes) ground[i] = ground[f.lhs(i)] && ground[f.rhs(i)];
      if (ground[i] && term_height(f, i) <= cap_) out.push_back(term_id(Term::at(f, i)));
    }
    return out;
  }

  static Id seen_at(const Branch& b, std::size_t slot) { return slot < b.seen.size() ? b.seen[slot] : kNone; }
  static bool seen(const Branch& b, bool sign, Id f) { return seen_at(b, 2 * std::size_t{f} + sign) != kNone; }

  void add(Branch& b, Entry s) {
    if (b.clash) return;
    const std::size_t slot = 2 * std::size_t{s.f} + s.sign;
    if (seen_at(b, slot) != kNone) return;
    if (const Id other = seen_at(b, slot ^ 1); other != kNone) {
      b.clash = unite_ids(other, s.origin);
      return;
    }
    const Info& info = info_[s.f];
    if (!s.sign && info.reflexive_eq) {
      b.clash = s.origin;
      return;
    }
    if (b.seen.size() <= slot) b.seen.resize(std::max(slot + 1, 2 * formulas_.size()), kNone);
    b.seen[slot] = s.origin;
    if (is_atomic_kind(info.kind)) {
      for (Id t : info.ground_terms) add_term(b, t);
      return;
    }
    if (s.sign && info.kind == Kind::kImplies) b.beta.push_back(s);
    else if (s.sign && info.kind == Kind::kForall) b.gammas.push_back({s.f, s.origin, 0});
    else b.linear.push_back(s);
  }

  void expand(Branch& b, const Entry& s) {
    const Info& info = info_[s.f];
    switch (info.kind) {
      case Kind::kNot: add(b, {!s.sign, info.lhs, s.origin}); break;
      case Kind::kImplies:  // false implication
        add(b, {true, info.lhs, s.origin});
        add(b, {false, info.rhs, s.origin});
        break;
      case Kind::kForall: {  // false universal
        const Term c = Term::var(Symbol("#c" + std::to_string(params_++)));
        const Id t = term_id(c);
        add_term(b, t);
        add(b, {false, instance(s.f, t), s.origin});
        break;
      }
      default:
        throw std::logic_error("tableau: unexpected formula " + render(formulas_[s.f]));
    }
  }

  Id instance(Id f, Id t) {
    if (auto it = instances_.find({f, t}); it != instances_.end()) return it->second;
    const Formula& g = formulas_[f];
    const NodeId r = g.root();
    const Id id = formula_id(substitute(Formula::at(g, g.child(r)), g[r].symbol, terms_[t]));
    instances_.emplace(std::make_pair(f, t), id);
    return id;
  }

  // A beta formula whose split closes a side at once, else the oldest one.
  // Formulas already satisfied on the branch are dropped.
  std::optional<std::size_t> pick_beta(Branch& b) {
    std::optional<std::size_t> first;
    for (std::size_t k = 0; k < b.beta.size();) {
      const Info& info = info_[b.beta[k].f];
      if (seen(b, false, info.lhs) || seen(b, true, info.rhs)) {
        b.beta.erase(b.beta.begin() + static_cast<std::ptrdiff_t>(k));
        continue;
      }
      if (seen(b, true, info.lhs) || seen(b, false, info.rhs)) return k;
      if (!first) first = k;
      ++k;
    }
    return first;
  }

  bool has_pending_gamma(const Branch& b) const {
    return std::any_of(b.gammas.begin(), b.gammas.end(),
                       [&](const GammaEntry& g) { return g.next < b.universe.size(); });
  }

  bool gamma_step(Branch& b) {
    if (gamma_ >= budget_.gamma) return false;
    const std::size_t n = b.gammas.size();
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t idx = (b.gamma_cursor + k) % n;
      GammaEntry& g = b.gammas[idx];
      if (g.next >= b.universe.size()) continue;
      const Id t = b.universe[g.next++];
      b.gamma_cursor = idx + 1;
      ++gamma_;
      ++steps_;
      const Id origin = g.origin;
      add(b, {true, instance(g.f, t), origin});
      return true;
    }
    return false;
  }

  static void add_term(Branch& b, Id t) {
    if (b.in_universe.size() <= t) b.in_universe.resize(std::size_t{t} + 1, 0);
    if (b.in_universe[t]) return;
    b.in_universe[t] = 1;
    b.universe.push_back(t);
  }

  Budget budget_;
  std::size_t cap_;
  std::size_t steps_ = 0;
  std::size_t gamma_ = 0;
  std::size_t params_ = 0;
  Origin core_;

  std::vector<Formula> formulas_;
  std::vector<Info> info_;
  std::map<Formula, Id> formula_ids_;
  std::vector<Term> terms_;
  std::map<Term, Id> term_ids_;
  std::vector<Origin> origins_;
  std::map<Origin, Id> origin_ids_;
  std::map<std::pair<Id, Id>, Id> unions_;
  std::map<std::pair<Id, Id>, Id> instances_;
};

// Reflexivity, symmetry, transitivity and congruence for the function and
// relation symbols that occur.
std::vector<Formula> equality_axioms(const std::vector<Formula>& inputs) {
  bool eq = false, succ = false, plus = false, times = false, in = false;
  std::map<Symbol, std::uint32_t> preds;
  for (const Formula& f : inputs)
    for (const Node& n : f.nodes()) {
      switch (n.kind) {
        case Kind::kEq: eq = true; break;
        case Kind::kSucc: succ = true; break;
        case Kind::kPlus: plus = true; break;
        case Kind::kTimes: times = true; break;
        case Kind::kIn: in = true; break;
        case Kind::kPred:
          if (n.arity > 0) preds.emplace(n.symbol, n.arity);
          break;
        default: break;
      }
    }
  std::vector<Formula> out;
  if (!eq) return out;
  out.push_back(parse_formula("forall x. (x=x)"));
  out.push_back(parse_formula("forall x. forall y. ((x=y) -> (y=x))"));
  out.push_back(parse_formula("forall x. forall y. forall z. ((x=y) -> ((y=z) -> (x=z)))"));
  if (succ) out.push_back(parse_formula("forall x. forall y. ((x=y) -> (S(x)=S(y)))"));
  if (plus) out.push_back(parse_formula("forall x. forall y. forall u. forall v. ((x=y) -> ((u=v) -> ((x+u)=(y+v))))"));
  if (times)
    out.push_back(parse_formula("forall x. forall y. forall u. forall v. ((x=y) -> ((u=v) -> ((x*u)=(y*v))))"));
  if (in) out.push_back(parse_formula("forall x. forall y. forall u. forall v. ((x=y) -> ((u=v) -> (In(x,u) -> In(y,v))))"));
  for (const auto& [name, arity] : preds) {
    std::vector<Symbol> xs, ys;
    for (std::uint32_t k = 0; k < arity; ++k) {
      xs.emplace_back("x" + std::to_string(k));
      ys.emplace_back("y" + std::to_string(k));
    }
    auto atom = [&](const std::vector<Symbol>& args) {
      Builder b;
      for (Symbol v : args) b.var(v);
      b.pred(name, arity);
      return std::move(b).formula();
    };
    Formula f = Formula::implies(atom(xs), atom(ys));
    for (std::size_t k = arity; k-- > 0;) {
      Formula e = Formula::equal(Term::var(xs[k]), Term::var(ys[k]));
      f = Formula::implies(e, f);
    }
    for (std::size_t k = arity; k-- > 0;) f = Formula::forall(ys[k], f);
    for (std::size_t k = arity; k-- > 0;) f = Formula::forall(xs[k], f);
    out.push_back(std::move(f));
  }
  return out;
}

std::size_t max_term_height(const Formula& f) {
  std::size_t h = 0;
  for (NodeId i = 0; i < f.size(); ++i)
    if (is_term_kind(f.kind(i))) h = std::max(h, term_height(f, i));
  return h;
}

// One tableau run over a subset of the abstracted premises.
struct Attempt {
  Tableau::Result result;
  Origin core;
};

Formula chain(const std::vector<Formula>& premises, const Formula& goal) {
  Formula f = goal;
  for (std::size_t k = premises.size(); k-- > 0;) f = Formula::implies(premises[k], f);
  return f;
}

// Nodes for the finite-model filter that runs before each tableau attempt.
constexpr std::size_t kFilterNodes = 64;

class Prover {
 public:
  Prover(const std::vector<Formula>& premises, const Formula& goal, const Budget& budget, BudgetSpent& spent)
      : budget_(budget), spent_(spent), original_(premises), original_goal_(goal) {
    Abstractor abs;
    for (const Formula& p : premises) premises_.push_back(abs.abstract(p));
    goal_ = abs.abstract(goal);
    std::vector<Formula> all = premises_;
    all.push_back(goal_);
    axioms_ = equality_axioms(all);
    for (const Formula& f : all) cap_ = std::max(cap_, max_term_height(f));
  }

  Attempt attempt(const std::vector<std::size_t>& subset) {
    std::vector<Signed> initial;
    for (std::size_t k : subset) initial.push_back({true, premises_[k], {static_cast<std::uint32_t>(k)}});
    initial.push_back({false, goal_, {}});
    for (const Formula& a : axioms_) initial.push_back({true, a, {}});
    Tableau t(budget_, cap_);
    const auto result = t.run(std::move(initial));
    spent_.steps += t.steps();
    spent_.gamma += t.gamma();
    ++spent_.tableau_runs;
    return {result, result == Tableau::Result::kClosed ? t.core() : Origin{}};
  }

  /// A small finite countermodel rules the subset out without a tableau run;
  /// soundness means such a subset could never close.
  bool closes(const std::vector<std::size_t>& subset) {
    std::vector<Formula> chosen;
    for (std::size_t k : subset) chosen.push_back(original_[k]);
    SearchOptions filter;
    filter.max_universe = budget_.max_universe;
    filter.node_budget = kFilterNodes;
    filter.parallel = false;
    const auto search = countermodel_search(chain(chosen, original_goal_), filter);
    spent_.countermodel_nodes += search.nodes;
    if (search.found) return false;
    return attempt(subset).result == Tableau::Result::kClosed;
  }

  std::size_t size() const { return premises_.size(); }

 private:
  Budget budget_;
  BudgetSpent& spent_;
  std::vector<Formula> premises_;
  Formula goal_;
  std::vector<Formula> axioms_;
  std::size_t cap_ = 0;
  const std::vector<Formula>& original_;
  Formula original_goal_;
};

constexpr std::size_t kExhaustiveCore = 12;

// Smallest closing subset of core, by size then lexicographically.
std::optional<std::vector<std::size_t>> minimize(Prover& prover, const std::vector<std::size_t>& core) {
  if (core.size() <= kExhaustiveCore) {
    for (std::size_t k = 0; k <= core.size(); ++k) {
      std::vector<std::size_t> pick(k);
      for (std::size_t j = 0; j < k; ++j) pick[j] = j;
      for (;;) {
        std::vector<std::size_t> subset;
        for (std::size_t j : pick) subset.push_back(core[j]);
        if (prover.closes(subset)) return subset;
        std::size_t j = k;
        while (j > 0 && pick[j - 1] == core.size() - k + j - 1) --j;
        if (j == 0) break;
        ++pick[j - 1];
        for (std::size_t m = j; m < k; ++m) pick[m] = pick[m - 1] + 1;
      }
    }
    return std::nullopt;
  }
  std::vector<std::size_t> current = core;
  if (!prover.closes(current)) return std::nullopt;
  for (std::size_t k = 0; k < current.size();) {
    std::vector<std::size_t> without = current;
    without.erase(without.begin() + static_cast<std::ptrdiff_t>(k));
    if (prover.closes(without)) current = std::move(without);
    else ++k;
  }
  return current;
}


}  // namespace

std::string to_string(ProofStatus s) {
  switch (s) {
    case ProofStatus::kProved: return "proved";
    case ProofStatus::kRefuted: return "refuted";
    case ProofStatus::kUnknown: return "unknown";
  }
  return "?";
}

ProofReport entails(const std::vector<Formula>& premises, const Formula& phi, const Budget& budget) {
  for (const Formula& p : premises)
    if (!is_sentence(p)) throw PreconditionError("premise is not a sentence: " + render(p));
  if (!is_sentence(phi)) throw PreconditionError("goal is not a sentence: " + render(phi));

  ProofReport report;
  Prover prover(premises, phi, budget, report.spent);
  std::vector<std::size_t> all(premises.size());
  for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
  const Attempt first = prover.attempt(all);
  if (first.result == Tableau::Result::kClosed) {
    const std::vector<std::size_t> core(first.core.begin(), first.core.end());
    report.status = ProofStatus::kProved;
    report.used_indices = minimize(prover, core).value_or(all);
    for (std::size_t k : report.used_indices) report.used_premises.push_back(premises[k]);
    return report;
  }

  SearchOptions options;
  options.max_universe = budget.max_universe;
  options.node_budget = budget.countermodel_nodes;
  const auto search = countermodel_search(chain(premises, phi), options);
  report.spent.countermodel_nodes += search.nodes;
  if (search.found) {
    report.status = ProofStatus::kRefuted;
    report.countermodel = search.found;
  }
  return report;
}

ProofReport prove_bounded(const Formula& phi, const Budget& budget) { return entails({}, phi, budget); }

UpwardReport upward_check(const std::vector<Formula>& premises, const Formula& phi, const StratifierSpec& x,
                          const Budget& budget) {
  UpwardReport r;
  r.plain = entails(premises, phi, budget);
  std::vector<Formula> lifted;
  for (const Formula& p : premises) lifted.push_back(stratify(p, x));
  r.stratified = entails(lifted, stratify(phi, x), budget);
  auto opposed = [](ProofStatus a, ProofStatus b) {
    return (a == ProofStatus::kProved && b == ProofStatus::kRefuted) ||
           (a == ProofStatus::kRefuted && b == ProofStatus::kProved);
  };
  r.violation = opposed(r.plain.status, r.stratified.status);
  return r;
}

std::string to_string(CollapseOutcome o) {
  switch (o) {
    case CollapseOutcome::kVerified: return "verified";
    case CollapseOutcome::kNoCore: return "no-core";
    case CollapseOutcome::kOutsideFragment: return "outside-fragment";
    case CollapseOutcome::kReproofFailed: return "reproof-failed";
  }
  return "?";
}

CollapseReport verify_collapse(const StratifiedFragment& premises, const Formula& phi, Natural n,
                               const Budget& budget) {
  if (n == 0) throw PreconditionError("collapse needs n >= 1");
  const Ordinal bound = omega_times(n);
  std::set<Ordinal> supers = on_set(phi);
  if (!supers.empty() && !(*supers.rbegin() < bound))
    throw PreconditionError("goal superscript " + to_string(*supers.rbegin()) + " is not below " + to_string(bound));

  CollapseReport r;
  const std::vector<Formula> list(premises.begin(), premises.end());
  r.original = entails(list, phi, budget);
  if (r.original.status != ProofStatus::kProved) return r;
  for (const Formula& p : r.original.used_premises)
    for (Ordinal a : on_set(p)) supers.insert(a);
  r.h = collapse_map(supers, n);
  const StratifiedFragment allowed = restrict(premises, bound);
  for (const Formula& p : r.original.used_premises) r.rewritten.push_back(apply_ordinal_map(p, r.h));
  for (const Formula& p : r.rewritten)
    if (!allowed.contains(p)) {
      r.outcome = CollapseOutcome::kOutsideFragment;
      return r;
    }
  r.reproof = entails(r.rewritten, phi, budget);
  r.outcome = r.reproof.status == ProofStatus::kProved ? CollapseOutcome::kVerified : CollapseOutcome::kReproofFailed;
  return r;
}

std::string render_report(const ProofReport& r) {
  std::string out = "status: " + to_string(r.status) + "\n";
  if (r.status == ProofStatus::kProved) {
    out += "used premises: " + std::to_string(r.used_indices.size()) + "\n";
    for (std::size_t k = 0; k < r.used_indices.size(); ++k)
      out += "  [" + std::to_string(r.used_indices[k]) + "] " + render(r.used_premises[k]) + "\n";
  }
  if (r.countermodel) {
    out += "countermodel:\n";
    out += "assignment:";
    if (r.countermodel->assignment.empty()) out += " (none)";
    for (const auto& [v, a] : r.countermodel->assignment) out += " " + v.name() + "=" + std::to_string(a);
    out += "\n" + render_structure(r.countermodel->structure);
  }
  out += "spent: steps=" + std::to_string(r.spent.steps) + " gamma=" + std::to_string(r.spent.gamma) +
         " countermodel-nodes=" + std::to_string(r.spent.countermodel_nodes) +
         " tableau-runs=" + std::to_string(r.spent.tableau_runs) + "\n";
  return out;
}

}  // namespace stratum
