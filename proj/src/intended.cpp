#include "stratum/intended.hpp"

#include <algorithm>
#include <limits>
#include <optional>

#include "stratum/error.hpp"
#include "stratum/parse.hpp"

namespace stratum {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kHolds: return "holds";
    case Verdict::kFails: return "fails";
    case Verdict::kUnknown: return "unknown";
  }
  return "?";
}

BoundedIntendedStructure::BoundedIntendedStructure(StratifiedFragment pool, Budget budget, Natural quantifier_bound)
    : pool_(std::move(pool)), budget_(budget), quantifier_bound_(quantifier_bound) {}

std::size_t BoundedIntendedStructure::cache_size() const {
  std::lock_guard lock(mutex_);
  return cache_.size();
}

Knowledge BoundedIntendedStructure::knows(OperatorTag tag, const Formula& phi, const Assignment& s) const {
  auto key = std::make_pair(tag, assign_substitute(phi, s));
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  const StratifiedFragment premises = tag.indexed ? restrict(pool_, tag.level) : pool_;
  Knowledge k;
  k.report = entails(std::vector<Formula>(premises.begin(), premises.end()), key.second, budget_);
  k.verdict = k.report.status == ProofStatus::kProved    ? Verdict::kHolds
              : k.report.status == ProofStatus::kRefuted ? Verdict::kFails
                                                         : Verdict::kUnknown;
  std::lock_guard lock(mutex_);
  // A concurrent writer may have stored the same query first; keep its answer.
  return cache_.emplace(std::move(key), std::move(k)).first->second;
}

namespace {

Verdict kleene_not(Verdict v) {
  if (v == Verdict::kHolds) return Verdict::kFails;
  if (v == Verdict::kFails) return Verdict::kHolds;
  return v;
}

// A ground term over the standard numbers; nullopt on overflow.
std::optional<Natural> standard_value(const Formula& f, NodeId root) {
  constexpr Natural kMax = std::numeric_limits<Natural>::max();
  std::vector<std::optional<Natural>> value(root + 1);
  for (NodeId i = f[root].first; i <= root; ++i) {
    switch (f.kind(i)) {
      case Kind::kZero: value[i] = 0; break;
      case Kind::kSucc: {
        const auto a = value[f.child(i)];
        if (a && *a < kMax) value[i] = *a + 1;
        break;
      }
      case Kind::kPlus: {
        const auto a = value[f.lhs(i)], b = value[f.rhs(i)];
        if (a && b && *a <= kMax - *b) value[i] = *a + *b;
        break;
      }
      case Kind::kTimes: {
        const auto a = value[f.lhs(i)], b = value[f.rhs(i)];
        if (a && b && (*a == 0 || *b <= kMax / *a)) value[i] = *a * *b;
        break;
      }
      default: throw PreconditionError("eval3 needs a sentence");
    }
  }
  return value[root];
}

}  // namespace

Verdict BoundedIntendedStructure::eval3(const Formula& sentence) const {
  if (!is_sentence(sentence)) throw PreconditionError("eval3 needs a sentence: " + render(sentence));
  return eval3_at(sentence, sentence.root());
}

Verdict BoundedIntendedStructure::eval3_at(const Formula& f, NodeId i) const {
  const Node& n = f[i];
  switch (n.kind) {
    case Kind::kEq: {
      const auto a = standard_value(f, f.lhs(i)), b = standard_value(f, f.rhs(i));
      if (!a || !b) return Verdict::kUnknown;
      return *a == *b ? Verdict::kHolds : Verdict::kFails;
    }
    case Kind::kIn: return Verdict::kUnknown;
    case Kind::kNot: return kleene_not(eval3_at(f, f.child(i)));
    case Kind::kImplies: {
      const Verdict a = eval3_at(f, f.lhs(i));
      if (a == Verdict::kFails) return Verdict::kHolds;
      const Verdict b = eval3_at(f, f.rhs(i));
      if (b == Verdict::kHolds) return Verdict::kHolds;
      if (a == Verdict::kHolds && b == Verdict::kFails) return Verdict::kFails;
      return Verdict::kUnknown;
    }
    case Kind::kForall: {
      const Formula body = Formula::at(f, f.child(i));
      for (Natural k = 0; k < quantifier_bound_; ++k) {
        const Formula instance = substitute(body, n.symbol, Term::numeral(k));
        if (eval3_at(instance, instance.root()) == Verdict::kFails) return Verdict::kFails;
      }
      if (prove_bounded(Formula::at(f, i), budget_).status == ProofStatus::kProved) return Verdict::kHolds;
      return Verdict::kUnknown;
    }
    case Kind::kOp: return knows(n.tag, Formula::at(f, f.child(i))).verdict;
    default: throw PreconditionError("eval3: unexpected node in " + render(f));
  }
}

// ---------------------------------------------------------------------------
// E2

bool E2Report::conclusive() const {
  return theta_plus_value == Verdict::kFails &&
         std::all_of(queries.begin(), queries.end(),
                     [](const E2Query& q) { return q.answer.verdict != Verdict::kUnknown; });
}

namespace {

std::string describe(const Knowledge& k, const Formula& query) {
  const Node& root = query[query.root()];
  std::string where = "T+ cap " + (root.tag.indexed ? to_string(root.tag.level) : std::string("(all)"));
  switch (k.verdict) {
    case Verdict::kHolds: {
      std::string out = "holds: " + where + " proves it from " + std::to_string(k.report.used_premises.size()) +
                        " premise(s)";
      for (const Formula& p : k.report.used_premises) out += "; " + render(p);
      return out;
    }
    case Verdict::kFails:
      return "fails: " + where + " has a countermodel over universe " +
             std::to_string(k.report.countermodel->structure.size());
    case Verdict::kUnknown: return "unknown at budget";
  }
  return "?";
}

std::vector<NodeId> operator_children(const Formula& f) {
  // theta+ = A -> (B -> C); the three operator formulas A, B, C.
  const NodeId r = f.root();
  const NodeId rest = f.rhs(r);
  return {f.lhs(r), f.lhs(rest), f.rhs(rest)};
}

}  // namespace

E2Report check_e2_counterexample(const Budget& budget) {
  E2Report r;
  const Formula k10 = parse_formula("K(1=0)");
  const Formula falsity = parse_formula("1=0");
  std::vector<Formula> base{k10, Formula::implies(k10, falsity)};
  for (const Formula& inst : pool_instances(SchemaId::kE2, {falsity, k10})) base.push_back(inst);
  const std::set<Formula> theory = k_close(std::set<Formula>(base.begin(), base.end()), 2);
  r.theory_size = theory.size();
  r.specs = {StratifierSpec::all_from({}), StratifierSpec::all_from({0, 1}), StratifierSpec::limits_from(1)};
  StratifiedFragment pool;
  for (const Formula& t : theory) pool.merge(oplus_sample(t, r.specs));
  r.pool_size = pool.size();
  const BoundedIntendedStructure m(pool, budget);

  r.theta = parse_formula("(K(K(1=0) -> (1=0)) -> (K K(1=0) -> K(1=0)))");
  r.theta_plus = stratify(r.theta, r.x);
  r.trace.push_back("T: K-closure (2 steps) of K (1=0), (K (1=0) -> (1=0)) and E2 over {(1=0), K (1=0)}: " +
                    std::to_string(r.theory_size) + " sentences");
  std::string spec_list;
  for (const auto& x : r.specs) spec_list += (spec_list.empty() ? "" : ", ") + to_string(x);
  r.trace.push_back("T+ sample over " + spec_list + ": " + std::to_string(r.pool_size) + " members");
  r.trace.push_back("theta  = " + render(r.theta));
  r.trace.push_back("X = " + to_string(r.x));
  r.trace.push_back("theta+ = " + render(r.theta_plus));
  for (NodeId id : operator_children(r.theta_plus)) {
    const Formula q = Formula::at(r.theta_plus, id);
    E2Query entry{q, m.knows(q[q.root()].tag, Formula::at(q, q.child(q.root())))};
    r.trace.push_back(render(q) + ": " + describe(entry.answer, q));
    r.queries.push_back(std::move(entry));
  }
  r.theta_plus_value = m.eval3(r.theta_plus);

  SchemaArgs bad;
  bad.phi = k10;
  bad.psi = falsity;
  try {
    instantiate_schema(SchemaId::kE2prime, bad);
  } catch (const PreconditionError& e) {
    r.e2prime_rejection = e.what();
  }
  r.trace.push_back("E2prime with phi = K (1=0), psi = (1=0): " +
                    (r.e2prime_rejection.empty() ? std::string("accepted") : "rejected, " + r.e2prime_rejection));

  SchemaArgs good;
  good.phi = k10;
  good.psi = Formula::implies(k10, falsity);
  r.admissible_plus = stratify(instantiate_schema(SchemaId::kE2prime, good), r.x);
  r.admissible_value = m.eval3(r.admissible_plus);
  std::string levels;
  for (NodeId id : operator_children(r.admissible_plus))
    levels += (levels.empty() ? "" : ", ") + to_string(r.admissible_plus[id].tag.level);
  r.trace.push_back("E2prime instance with psi = (K (1=0) -> (1=0)): " + render(r.admissible_plus) + " (levels " +
                    levels + ") evaluates " + to_string(r.admissible_value));

  if (r.conclusive()) r.trace.push_back("theta+ evaluates FALSE");
  else r.trace.push_back("theta+ is inconclusive at this budget (" + to_string(r.theta_plus_value) + ")");
  return r;
}

std::string render_e2_report(const E2Report& r) {
  std::string out;
  for (const auto& line : r.trace) out += line + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Truth-induction walk

std::vector<StratifierSpec> walk_specs() {
  return {StratifierSpec::all_from({0, 0}), StratifierSpec::all_from({0, 2}), StratifierSpec::all_from({1, 0}),
          StratifierSpec::all_from({1, 1}), StratifierSpec::limits_from(1), StratifierSpec::all_from({2, 0})};
}

std::vector<Ordinal> walk_grid(Ordinal alpha_max) {
  std::vector<Ordinal> grid;
  for (Natural limit = 0; limit <= alpha_max.limit; ++limit)
    for (Natural offset = 0; offset <= 3; ++offset)
      if (Ordinal a{limit, offset}; !(alpha_max < a)) grid.push_back(a);
  return grid;
}

namespace {

// The least grid-independent rank: 0 without superscripts, else 1 + max.
std::pair<int, Ordinal> rank(const Formula& f) {
  const auto on = on_set(f);
  if (on.empty()) return {0, Ordinal{}};
  return {1, *on.rbegin()};
}

void tally(WalkReport& r, WalkLevel& level, WalkMember member) {
  const auto c = static_cast<std::size_t>(member.which) - 1;
  ++level.cases[c];
  ++r.cases[c];
  if (member.outcome == Verdict::kUnknown) {
    ++level.unknown;
    ++r.unknown;
  } else if (member.outcome == Verdict::kFails) {
    ++level.violations;
    r.violations.push_back(member);
  }
  r.members.push_back(std::move(member));
}

}  // namespace

WalkReport truth_induction_walk(const TheoryPresentation& t0, Ordinal alpha_max, const Budget& budget) {
  WalkReport r;
  r.specs = walk_specs();
  r.grid = walk_grid(alpha_max);

  TheoryPresentation base_p = t0;
  std::erase_if(base_p.schemas, [](const SchemaUse& u) { return u.id == SchemaId::kE3; });
  base_p.k_closure_depth = 0;
  const std::vector<Formula> base = expand(base_p);
  std::vector<Formula> operands;
  for (const Formula& f : t0.operands)
    if (is_sentence(f)) operands.push_back(f);
  if (operands.empty()) operands = base;
  const std::vector<Formula> e3 = pool_instances(SchemaId::kE3, operands);
  r.base_size = base.size();
  r.e3_size = e3.size();

  std::set<Formula> t1(base.begin(), base.end());
  t1.insert(e3.begin(), e3.end());
  const std::set<Formula> theory = k_close(t1, t0.k_closure_depth);
  r.theory_size = theory.size();

  // Provenance in order: base members, E3 instances, the rest of the closure.
  const std::set<Formula> base_set(base.begin(), base.end());
  const std::set<Formula> e3_set(e3.begin(), e3.end());
  std::vector<std::pair<Formula, WalkCase>> ordered;
  for (const Formula& f : base) ordered.emplace_back(f, WalkCase::kBase);
  for (const Formula& f : e3)
    if (!base_set.contains(f)) ordered.emplace_back(f, WalkCase::kTruthfulness);
  for (const Formula& f : theory)
    if (!base_set.contains(f) && !e3_set.contains(f)) ordered.emplace_back(f, WalkCase::kClosure);

  std::map<Formula, std::pair<Formula, WalkCase>> provenance;
  StratifiedFragment pool;
  for (const auto& [theta, which] : ordered)
    for (const Formula& sigma : oplus_sample(theta, r.specs)) {
      provenance.emplace(sigma, std::make_pair(theta, which));
      pool.insert(sigma);
    }
  r.pool_size = pool.size();
  const BoundedIntendedStructure m(pool, budget);

  std::set<Formula> seen, verified;
  for (Ordinal alpha : r.grid) {
    WalkLevel level;
    level.alpha = alpha;
    std::vector<Formula> fresh;
    for (const Formula& f : restrict(pool, alpha.successor()))
      if (!seen.contains(f)) fresh.push_back(f);
    std::stable_sort(fresh.begin(), fresh.end(),
                     [](const Formula& a, const Formula& b) { return rank(a) < rank(b); });
    for (const Formula& sigma : fresh) {
      seen.insert(sigma);
      ++level.members;
      const auto& [theta, which] = provenance.at(sigma);
      WalkMember w{sigma, theta, which, alpha, Verdict::kUnknown, {}};
      switch (which) {
        case WalkCase::kBase: {
          w.outcome = m.eval3(sigma);
          w.note = "evaluates " + to_string(w.outcome);
          break;
        }
        case WalkCase::kClosure: {
          const Node& root = sigma[sigma.root()];
          const Formula body = Formula::at(sigma, sigma.child(sigma.root()));
          if (root.kind != Kind::kOp || !root.tag.indexed) {
            w.outcome = Verdict::kFails;
            w.note = "closure member is not an indexed operator formula";
            break;
          }
          if (!restrict(pool, root.tag.level).contains(body)) {
            w.outcome = Verdict::kFails;
            w.note = "body missing from the pool below " + to_string(root.tag.level);
            break;
          }
          w.outcome = m.knows(root.tag, body).verdict;
          w.note = "body is in the pool below " + to_string(root.tag.level) + "; knowledge " + to_string(w.outcome);
          break;
        }
        case WalkCase::kTruthfulness: {
          const NodeId r0 = sigma.root();
          const NodeId ante = sigma.lhs(r0);
          if (sigma.kind(r0) != Kind::kImplies || sigma.kind(ante) != Kind::kOp || !sigma[ante].tag.indexed) {
            w.outcome = Verdict::kFails;
            w.note = "not of the form K^a phi -> phi";
            break;
          }
          const Ordinal a0 = sigma[ante].tag.level;
          const Formula phi = Formula::at(sigma, sigma.rhs(r0));
          if (alpha < a0) {
            w.outcome = Verdict::kFails;
            w.note = "operator level " + to_string(a0) + " is above " + to_string(alpha);
            break;
          }
          const Knowledge k = m.knows(sigma[ante].tag, phi);
          if (k.verdict == Verdict::kFails) {
            w.outcome = Verdict::kHolds;
            w.note = "antecedent K^{" + to_string(a0) + "} fails";
          } else if (k.verdict == Verdict::kUnknown) {
            w.note = "antecedent unknown at budget";
          } else if (!std::all_of(k.report.used_premises.begin(), k.report.used_premises.end(),
                                  [&](const Formula& p) { return verified.contains(p); })) {
            w.note = "a witness premise below " + to_string(a0) + " is not verified";
          } else if (m.eval3(phi) == Verdict::kFails) {
            w.outcome = Verdict::kFails;
            w.note = "consequent false although its witness premises are verified";
          } else {
            w.outcome = Verdict::kHolds;
            w.note = "consequent follows from " + std::to_string(k.report.used_premises.size()) +
                     " verified premise(s) below " + to_string(a0);
          }
          break;
        }
      }
      if (w.outcome == Verdict::kHolds) verified.insert(sigma);
      tally(r, level, std::move(w));
    }
    r.levels.push_back(level);
  }
  return r;
}

std::string render_walk_report(const WalkReport& r) {
  std::string out = "T0: " + std::to_string(r.base_size) + " sentences; E3: " + std::to_string(r.e3_size) +
                    " instances; T: " + std::to_string(r.theory_size) + " sentences\n";
  std::string spec_list;
  for (const auto& x : r.specs) spec_list += (spec_list.empty() ? "" : ", ") + to_string(x);
  out += "T+ sample over " + spec_list + ": " + std::to_string(r.pool_size) + " members\n";
  for (const WalkLevel& l : r.levels)
    out += "level " + to_string(l.alpha) + ": " + std::to_string(l.members) + " new members (case 1: " +
           std::to_string(l.cases[0]) + ", case 2: " + std::to_string(l.cases[1]) + ", case 3: " +
           std::to_string(l.cases[2]) + "), unknown " + std::to_string(l.unknown) + ", violations " +
           std::to_string(l.violations) + "\n";
  out += "total: case 1: " + std::to_string(r.cases[0]) + ", case 2: " + std::to_string(r.cases[1]) +
         ", case 3: " + std::to_string(r.cases[2]) + ", unknown " + std::to_string(r.unknown) + ", violations " +
         std::to_string(r.violations.size()) + "\n";
  for (const WalkMember& v : r.violations)
    out += "violation at level " + to_string(v.level) + " (case " + std::to_string(static_cast<int>(v.which)) +
           "): " + render(v.sigma) + ": " + v.note + "\n";
  return out;
}

}  // namespace stratum
