#include "stratum/semantics.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <functional>
#include <limits>
#include <stdexcept>

#include "stratum/error.hpp"
#include "stratum/parse.hpp"

namespace stratum {

namespace {

Symbol slot_name(std::size_t k) {
  static const std::vector<Symbol> names = [] {
    std::vector<Symbol> v;
    for (std::size_t i = 0; i < 64; ++i) v.emplace_back("v" + std::to_string(i));
    return v;
  }();
  return k < names.size() ? names[k] : Symbol("v" + std::to_string(k));
}

OracleKey make_key(OperatorTag tag, const Formula& body, const std::vector<Symbol>& fv,
                   const std::vector<Natural>& values) {
  std::map<Symbol, Symbol> rename;
  std::vector<Natural> distinct;
  for (std::size_t i = 0; i < fv.size(); ++i) {
    auto it = std::find(distinct.begin(), distinct.end(), values[i]);
    const std::size_t slot = static_cast<std::size_t>(it - distinct.begin());
    if (it == distinct.end()) distinct.push_back(values[i]);
    rename.emplace(fv[i], slot_name(slot));
  }
  return {tag, canonical_rename(body, rename, "b"), std::move(distinct)};
}

std::uint64_t mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

OracleKey oracle_key(OperatorTag tag, const Formula& body, const EvalAssignment& s) {
  const auto fv = free_vars(body);
  std::vector<Natural> values;
  for (Symbol v : fv) {
    auto it = s.find(v);
    if (it == s.end()) throw PreconditionError("assignment misses variable '" + v.name() + "'");
    values.push_back(it->second);
  }
  return make_key(tag, body, fv, values);
}

std::string to_string(const OracleKey& key) {
  std::string out = render(Formula::op(key.tag, key.body)) + " @";
  for (Natural a : key.args) out += " " + std::to_string(a);
  return out;
}

bool TableOracle::answer(const OracleKey& key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? fallback_ : it->second;
}

bool HashOracle::answer(const OracleKey& key) const {
  std::uint64_t h = mix(seed_ ^ key.body.hash());
  h = mix(h ^ (key.tag.indexed ? 1 + key.tag.level.limit * 1000003 + key.tag.level.offset : 0));
  for (Natural a : key.args) h = mix(h ^ a);
  return h & 1;
}

bool LiftPlusOracle::answer(const OracleKey& key) const {
  if (key.tag.indexed) return inner_->answer(key);
  Formula body = stratify(key.body, x_);
  const Ordinal alpha = least_excluding(x_, on_set(body));
  return inner_->answer({OperatorTag::at(alpha), std::move(body), key.args});
}

bool LowerMinusOracle::answer(const OracleKey& key) const {
  if (!key.tag.indexed) return inner_->answer(key);
  return inner_->answer({OperatorTag::plain(), destratify(key.body, false), key.args});
}

bool MappedOracle::answer(const OracleKey& key) const {
  OperatorTag tag = key.tag;
  if (tag.indexed) tag.level = h_(tag.level);
  return inner_->answer({tag, apply_ordinal_map(key.body, h_), key.args});
}

// ---------------------------------------------------------------------------
// Structures

std::string to_string(TableFamily f) {
  switch (f) {
    case TableFamily::kCyclic: return "cyclic";
    case TableFamily::kSaturating: return "saturating";
    case TableFamily::kTruncated: return "truncated";
  }
  return "?";
}

std::string to_string(InFamily f) {
  switch (f) {
    case InFamily::kEmpty: return "empty";
    case InFamily::kFull: return "full";
    case InFamily::kDiagonal: return "diagonal";
    case InFamily::kLess: return "less";
  }
  return "?";
}

namespace {

Natural reduce(TableFamily f, Natural r, Natural n) {
  if (r < n) return r;
  switch (f) {
    case TableFamily::kCyclic: return r % n;
    case TableFamily::kSaturating: return n - 1;
    case TableFamily::kTruncated: return 0;
  }
  return 0;
}

bool in_family(InFamily f, Natural a, Natural b) {
  switch (f) {
    case InFamily::kEmpty: return false;
    case InFamily::kFull: return true;
    case InFamily::kDiagonal: return a == b;
    case InFamily::kLess: return a < b;
  }
  return false;
}

}  // namespace

FiniteStructure::FiniteStructure(Natural size, TableFamily tables, InFamily in, std::shared_ptr<const Oracle> oracle)
    : size_(size), oracle_(std::move(oracle)) {
  if (size_ == 0) throw PreconditionError("universe must be non-empty");
  succ_.resize(size_);
  plus_.resize(size_ * size_);
  times_.resize(size_ * size_);
  in_.resize(size_ * size_);
  for (Natural a = 0; a < size_; ++a) {
    succ_[a] = reduce(tables, a + 1, size_);
    for (Natural b = 0; b < size_; ++b) {
      plus_[a * size_ + b] = reduce(tables, a + b, size_);
      times_[a * size_ + b] = reduce(tables, a * b, size_);
      in_[a * size_ + b] = in_family(in, a, b);
    }
  }
  description_ = "universe " + std::to_string(size_) + ", " + to_string(tables) + " tables, In " + to_string(in);
}

FiniteStructure::FiniteStructure(Natural size, Natural zero, std::vector<Natural> succ, std::vector<Natural> plus,
                                 std::vector<Natural> times, std::vector<bool> in,
                                 std::shared_ptr<const Oracle> oracle)
    : size_(size),
      zero_(zero),
      succ_(std::move(succ)),
      plus_(std::move(plus)),
      times_(std::move(times)),
      in_(std::move(in)),
      oracle_(std::move(oracle)),
      description_("universe " + std::to_string(size) + ", custom tables") {
  if (size_ == 0) throw PreconditionError("universe must be non-empty");
  if (zero_ >= size_) throw PreconditionError("zero outside the universe");
  if (succ_.size() != size_) throw PreconditionError("successor table has the wrong size");
  if (plus_.size() != size_ * size_ || times_.size() != size_ * size_ || in_.size() != size_ * size_)
    throw PreconditionError("binary table has the wrong size");
  auto inside = [&](Natural v) { return v < size_; };
  if (!std::all_of(succ_.begin(), succ_.end(), inside) || !std::all_of(plus_.begin(), plus_.end(), inside) ||
      !std::all_of(times_.begin(), times_.end(), inside))
    throw PreconditionError("table entry outside the universe");
}

FiniteStructure FiniteStructure::with_oracle(std::shared_ptr<const Oracle> oracle) const {
  FiniteStructure m = *this;
  m.oracle_ = std::move(oracle);
  return m;
}

namespace {

enum class Tri : std::uint8_t { kFalse, kTrue, kUnknown };

Tri tri(bool b) { return b ? Tri::kTrue : Tri::kFalse; }

/// Evaluates one formula, possibly many times, under a (partial) oracle.
class Evaluator {
 public:
  /// Oracle lookup; nullopt marks an unanswered key.
  using Lookup = std::function<std::optional<bool>(const OracleKey&)>;

  struct Out {
    Tri value;
    const OracleKey* pending;  // an unanswered key the value depends on
  };

  explicit Evaluator(const Formula& f) : f_(f) {
    for (NodeId i = 0; i < f.size(); ++i) {
      if (f.kind(i) == Kind::kPred) throw PreconditionError("abstraction predicates have no semantics");
      if (f.kind(i) == Kind::kOp) {
        Formula body = Formula::at(f, f.child(i));
        auto fv = free_vars(body);
        ops_.emplace(i, OpInfo{std::move(body), std::move(fv)});
      }
    }
  }

  Out run(const FiniteStructure& m, const EvalAssignment& s, const Lookup& lookup) {
    m_ = &m;
    lookup_ = &lookup;
    env_.assign(s.begin(), s.end());
    return formula(f_.root());
  }

  Natural term(const FiniteStructure& m, const EvalAssignment& s) {
    m_ = &m;
    env_.assign(s.begin(), s.end());
    return term(f_.root());
  }

 private:
  struct OpInfo {
    Formula body;
    std::vector<Symbol> fv;
  };

  Natural var(Symbol x) const {
    for (auto it = env_.rbegin(); it != env_.rend(); ++it)
      if (it->first == x) return it->second;
    throw PreconditionError("assignment misses variable '" + x.name() + "'");
  }

  Natural term(NodeId i) {
    switch (f_.kind(i)) {
      case Kind::kVar: return var(f_[i].symbol);
      case Kind::kZero: return m_->zero();
      case Kind::kSucc: return m_->succ(term(f_.child(i)));
      case Kind::kPlus: return m_->plus(term(f_.lhs(i)), term(f_.rhs(i)));
      case Kind::kTimes: return m_->times(term(f_.lhs(i)), term(f_.rhs(i)));
      default: throw std::logic_error("term expected");
    }
  }

  Out formula(NodeId i) {
    const Node& n = f_[i];
    switch (n.kind) {
      case Kind::kEq: return {tri(term(f_.lhs(i)) == term(f_.rhs(i))), nullptr};
      case Kind::kIn: return {tri(m_->in(term(f_.lhs(i)), term(f_.rhs(i)))), nullptr};
      case Kind::kNot: {
        Out a = formula(f_.child(i));
        if (a.value != Tri::kUnknown) a.value = a.value == Tri::kTrue ? Tri::kFalse : Tri::kTrue;
        return a;
      }
      case Kind::kImplies: {
        const Out a = formula(f_.lhs(i));
        if (a.value == Tri::kFalse) return {Tri::kTrue, nullptr};
        const Out b = formula(f_.rhs(i));
        if (b.value == Tri::kTrue) return {Tri::kTrue, nullptr};
        if (a.value == Tri::kTrue && b.value == Tri::kFalse) return {Tri::kFalse, nullptr};
        return {Tri::kUnknown, a.value == Tri::kUnknown ? a.pending : b.pending};
      }
      case Kind::kForall: {
        const OracleKey* pending = nullptr;
        env_.emplace_back(n.symbol, 0);
        for (Natural a = 0; a < m_->size(); ++a) {
          env_.back().second = a;
          const Out b = formula(f_.child(i));
          if (b.value == Tri::kFalse) {
            env_.pop_back();
            return b;
          }
          if (b.value == Tri::kUnknown && !pending) pending = b.pending;
        }
        env_.pop_back();
        return {pending ? Tri::kUnknown : Tri::kTrue, pending};
      }
      case Kind::kOp: {
        const OracleKey& key = key_for(i);
        const auto answer = (*lookup_)(key);
        if (!answer) return {Tri::kUnknown, &key};
        return {tri(*answer), nullptr};
      }
      default:
        throw std::logic_error("formula expected");
    }
  }

  const OracleKey& key_for(NodeId i) {
    const OpInfo& info = ops_.at(i);
    std::vector<Natural> values;
    values.reserve(info.fv.size());
    for (Symbol v : info.fv) values.push_back(var(v));
    auto slot = cache_.find({i, values});
    if (slot == cache_.end())
      slot = cache_.emplace(std::make_pair(i, values), make_key(f_[i].tag, info.body, info.fv, values)).first;
    return slot->second;
  }

  const Formula& f_;
  const FiniteStructure* m_ = nullptr;
  const Lookup* lookup_ = nullptr;
  std::vector<std::pair<Symbol, Natural>> env_;
  std::map<NodeId, OpInfo> ops_;
  std::map<std::pair<NodeId, std::vector<Natural>>, OracleKey> cache_;
};

}  // namespace

bool eval(const FiniteStructure& m, const Formula& phi, const EvalAssignment& s) {
  Evaluator ev(phi);
  const Evaluator::Lookup lookup = [&m](const OracleKey& key) -> std::optional<bool> {
    return m.oracle().answer(key);
  };
  return ev.run(m, s, lookup).value == Tri::kTrue;
}

Natural eval_term(const FiniteStructure& m, const Term& t, const EvalAssignment& s) {
  for (Symbol v : free_vars(t))
    if (!s.contains(v)) throw PreconditionError("assignment misses variable '" + v.name() + "'");
  std::vector<Natural> value(t.size());
  for (NodeId i = 0; i < t.size(); ++i) {
    switch (t.kind(i)) {
      case Kind::kVar: value[i] = s.at(t[i].symbol); break;
      case Kind::kZero: value[i] = m.zero(); break;
      case Kind::kSucc: value[i] = m.succ(value[t.child(i)]); break;
      case Kind::kPlus: value[i] = m.plus(value[t.lhs(i)], value[t.rhs(i)]); break;
      default: value[i] = m.times(value[t.lhs(i)], value[t.rhs(i)]); break;
    }
  }
  return value[t.root()];
}

FiniteStructure lift_plus(const FiniteStructure& m, const StratifierSpec& x) {
  return m.with_oracle(std::make_shared<LiftPlusOracle>(m.oracle_ptr(), x));
}

FiniteStructure lower_minus(const FiniteStructure& m) {
  return m.with_oracle(std::make_shared<LowerMinusOracle>(m.oracle_ptr()));
}

FiniteStructure map_structure(const FiniteStructure& m, const OrdinalMap& h) {
  return m.with_oracle(std::make_shared<MappedOracle>(m.oracle_ptr(), h));
}

std::vector<FiniteStructure> candidate_structures(Natural max_universe) {
  std::vector<FiniteStructure> out;
  for (Natural n = 1; n <= max_universe; ++n)
    for (TableFamily t : {TableFamily::kCyclic, TableFamily::kSaturating, TableFamily::kTruncated})
      for (InFamily r : {InFamily::kEmpty, InFamily::kFull, InFamily::kDiagonal, InFamily::kLess})
        out.emplace_back(n, t, r, nullptr);
  return out;
}

// ---------------------------------------------------------------------------
// Countermodel search

namespace {

struct CandidateResult {
  std::optional<std::pair<std::map<OracleKey, bool>, EvalAssignment>> found;
  std::size_t nodes = 0;
  bool budget_hit = false;
};

class OracleSearch {
 public:
  OracleSearch(const Formula& phi, const FiniteStructure& m, std::size_t budget)
      : ev_(phi), m_(m), budget_(budget) {
    lookup_ = [this](const OracleKey& key) -> std::optional<bool> {
      auto it = partial_.find(key);
      if (it == partial_.end()) return std::nullopt;
      return it->second;
    };
  }

  /// Searches oracle valuations under assignment s.
  bool refute(const EvalAssignment& s) {
    s_ = &s;
    partial_.clear();
    return branch();
  }

  const std::map<OracleKey, bool>& partial() const { return partial_; }
  std::size_t nodes() const { return nodes_; }
  bool budget_hit() const { return budget_hit_; }

 private:
  bool branch() {
    const auto out = ev_.run(m_, *s_, lookup_);
    if (out.value == Tri::kFalse) return true;
    if (out.value == Tri::kTrue) return false;
    if (nodes_ >= budget_) {
      budget_hit_ = true;
      return false;
    }
    ++nodes_;
    const OracleKey key = *out.pending;
    for (bool value : {true, false}) {
      partial_[key] = value;
      if (branch()) return true;
      partial_.erase(key);
      if (budget_hit_) return false;
    }
    return false;
  }

  Evaluator ev_;
  const FiniteStructure& m_;
  std::size_t budget_;
  const EvalAssignment* s_ = nullptr;
  std::map<OracleKey, bool> partial_;
  Evaluator::Lookup lookup_;
  std::size_t nodes_ = 0;
  bool budget_hit_ = false;
};

CandidateResult search_candidate(const Formula& phi, const std::vector<Symbol>& fv, const FiniteStructure& m,
                                 std::size_t budget) {
  CandidateResult r;
  OracleSearch search(phi, m, budget);
  std::vector<Natural> digits(fv.size(), 0);
  for (;;) {
    EvalAssignment s;
    for (std::size_t k = 0; k < fv.size(); ++k) s[fv[k]] = digits[k];
    if (search.refute(s)) {
      r.found.emplace(search.partial(), std::move(s));
      break;
    }
    if (search.budget_hit()) break;
    std::size_t pos = fv.size();
    while (pos > 0 && ++digits[pos - 1] == m.size()) digits[--pos] = 0;
    if (pos == 0) break;
  }
  r.nodes = search.nodes();
  r.budget_hit = search.budget_hit();
  return r;
}

}  // namespace

SearchResult countermodel_search(const Formula& phi, const SearchOptions& options) {
  const auto candidates = candidate_structures(options.max_universe);
  const auto fv = free_vars(phi);
  std::vector<CandidateResult> results(candidates.size());
  std::atomic<std::size_t> first_found{candidates.size()};
  const auto count = static_cast<std::int64_t>(candidates.size());
  std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic, 1) if (options.parallel)
  for (std::int64_t k = 0; k < count; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    if (idx > first_found.load()) continue;
    try {
      results[idx] = search_candidate(phi, fv, candidates[idx], options.node_budget);
    } catch (...) {
#pragma omp critical(countermodel_failure)
      if (!failure) failure = std::current_exception();
    }
    if (results[idx].found) {
      std::size_t cur = first_found.load();
      while (idx < cur && !first_found.compare_exchange_weak(cur, idx)) {
      }
    }
  }
  if (failure) std::rethrow_exception(failure);

  SearchResult out;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    // Candidates after the first hit may or may not have run; only count
    // the deterministic prefix.
    if (k > first_found.load()) break;
    out.nodes += results[k].nodes;
    out.budget_hit = out.budget_hit || results[k].budget_hit;
    if (results[k].found) {
      auto& [entries, s] = *results[k].found;
      FiniteStructure m = candidates[k].with_oracle(std::make_shared<TableOracle>(std::move(entries), false));
      if (eval(m, phi, s)) throw std::logic_error("countermodel_search: found structure does not refute the formula");
      out.found = Countermodel{std::move(m), std::move(s)};
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Structure files

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<Natural> naturals(std::string_view text, std::size_t offset) {
  std::vector<Natural> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[pos])) || text[pos] == ';') {
      ++pos;
      continue;
    }
    Natural v = 0;
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), v);
    if (ec != std::errc() || ptr == text.data() + pos) throw ParseError("expected a natural number", offset + pos);
    out.push_back(v);
    pos = static_cast<std::size_t>(ptr - text.data());
  }
  return out;
}

bool boolean(std::string_view text, std::size_t offset) {
  text = trim(text);
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ParseError("expected true or false", offset);
}

}  // namespace

FiniteStructure parse_structure(std::string_view text) {
  std::optional<Natural> size;
  Natural zero = 0;
  std::optional<TableFamily> family;
  std::optional<InFamily> in_fam;
  std::optional<std::vector<Natural>> succ, plus, times, in;
  bool fallback = false;
  struct Entry {
    Formula op;
    std::vector<Natural> values;
    bool answer;
    std::size_t at;
  };
  std::vector<Entry> entries;

  std::size_t line_start = 0;
  while (line_start < text.size()) {
    std::size_t line_end = text.find('\n', line_start);
    if (line_end == std::string_view::npos) line_end = text.size();
    std::string_view line = text.substr(line_start, line_end - line_start);
    const std::size_t at = line_start;
    line_start = line_end + 1;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (trim(line).empty()) continue;
    const std::size_t colon = line.find(':');
    if (colon == std::string_view::npos) throw ParseError("expected 'key: value'", at);
    const std::string_view key = trim(line.substr(0, colon));
    const std::string_view value = line.substr(colon + 1);
    const std::size_t vat = at + colon + 1;
    if (key == "universe") {
      const auto v = naturals(value, vat);
      if (v.size() != 1 || v[0] == 0) throw ParseError("universe needs one positive size", vat);
      size = v[0];
    } else if (key == "zero") {
      const auto v = naturals(value, vat);
      if (v.size() != 1) throw ParseError("zero needs one element", vat);
      zero = v[0];
    } else if (key == "family") {
      const auto name = trim(value);
      if (name == "cyclic") family = TableFamily::kCyclic;
      else if (name == "saturating") family = TableFamily::kSaturating;
      else if (name == "truncated") family = TableFamily::kTruncated;
      else throw ParseError("unknown table family", vat);
    } else if (key == "in-family") {
      const auto name = trim(value);
      if (name == "empty") in_fam = InFamily::kEmpty;
      else if (name == "full") in_fam = InFamily::kFull;
      else if (name == "diagonal") in_fam = InFamily::kDiagonal;
      else if (name == "less") in_fam = InFamily::kLess;
      else throw ParseError("unknown In family", vat);
    } else if (key == "succ") {
      succ = naturals(value, vat);
    } else if (key == "plus") {
      plus = naturals(value, vat);
    } else if (key == "times") {
      times = naturals(value, vat);
    } else if (key == "in") {
      in = naturals(value, vat);
    } else if (key == "default") {
      fallback = boolean(value, vat);
    } else if (key == "oracle") {
      const std::size_t s1 = value.find(';');
      const std::size_t s2 = s1 == std::string_view::npos ? s1 : value.find(';', s1 + 1);
      if (s2 == std::string_view::npos) throw ParseError("oracle entry needs 'formula; values; answer'", vat);
      Formula op;
      try {
        op = parse_formula(value.substr(0, s1));
      } catch (const ParseError& e) {
        throw ParseError(std::string("bad oracle formula: ") + e.what(), vat + e.position());
      }
      if (op.kind(op.root()) != Kind::kOp) throw ParseError("oracle entry must be an operator formula", vat);
      entries.push_back({std::move(op), naturals(value.substr(s1 + 1, s2 - s1 - 1), vat + s1 + 1),
                         boolean(value.substr(s2 + 1), vat + s2 + 1), vat});
    } else {
      throw ParseError("unknown key '" + std::string(key) + "'", at);
    }
  }
  if (!size) throw ParseError("structure needs a universe size", 0);
  const Natural n = *size;

  auto oracle = std::make_shared<TableOracle>(fallback);
  for (const Entry& e : entries) {
    const Formula body = Formula::at(e.op, e.op.child(e.op.root()));
    const auto fv = free_vars(body);
    if (fv.size() != e.values.size())
      throw ParseError("oracle entry needs one value per free variable (" + std::to_string(fv.size()) + ")", e.at);
    EvalAssignment s;
    for (std::size_t k = 0; k < fv.size(); ++k) {
      if (e.values[k] >= n) throw ParseError("oracle value outside the universe", e.at);
      s[fv[k]] = e.values[k];
    }
    oracle->set(oracle_key(e.op[e.op.root()].tag, body, s), e.answer);
  }

  const TableFamily fam = family.value_or(TableFamily::kCyclic);
  const FiniteStructure base(n, fam, in_fam.value_or(InFamily::kEmpty), nullptr);
  if (!family && !in_fam && !succ && !plus && !times && !in && zero == 0)
    return base.with_oracle(oracle);
  auto table = [&](const std::optional<std::vector<Natural>>& given, auto fill) {
    if (given) return *given;
    std::vector<Natural> v;
    fill(v);
    return v;
  };
  std::vector<Natural> s_tab = table(succ, [&](auto& v) {
    for (Natural a = 0; a < n; ++a) v.push_back(base.succ(a));
  });
  std::vector<Natural> p_tab = table(plus, [&](auto& v) {
    for (Natural a = 0; a < n; ++a)
      for (Natural b = 0; b < n; ++b) v.push_back(base.plus(a, b));
  });
  std::vector<Natural> t_tab = table(times, [&](auto& v) {
    for (Natural a = 0; a < n; ++a)
      for (Natural b = 0; b < n; ++b) v.push_back(base.times(a, b));
  });
  std::vector<Natural> i_tab = table(in, [&](auto& v) {
    for (Natural a = 0; a < n; ++a)
      for (Natural b = 0; b < n; ++b) v.push_back(base.in(a, b));
  });
  std::vector<bool> in_bits;
  for (Natural v : i_tab) {
    if (v > 1) throw ParseError("In table entries must be 0 or 1", 0);
    in_bits.push_back(v == 1);
  }
  try {
    return FiniteStructure(n, zero, std::move(s_tab), std::move(p_tab), std::move(t_tab), std::move(in_bits), oracle);
  } catch (const PreconditionError& e) {
    throw ParseError(e.what(), 0);
  }
}

std::string render_structure(const FiniteStructure& m) {
  const Natural n = m.size();
  std::string out = "# " + m.description() + "\n";
  out += "universe: " + std::to_string(n) + "\n";
  out += "zero: " + std::to_string(m.zero()) + "\n";
  auto row_table = [&](const char* name, auto cell) {
    out += name;
    out += ":";
    for (Natural a = 0; a < n; ++a) {
      if (a) out += ";";
      for (Natural b = 0; b < n; ++b) out += " " + std::to_string(cell(a, b));
    }
    out += "\n";
  };
  out += "succ:";
  for (Natural a = 0; a < n; ++a) out += " " + std::to_string(m.succ(a));
  out += "\n";
  row_table("plus", [&](Natural a, Natural b) { return m.plus(a, b); });
  row_table("times", [&](Natural a, Natural b) { return m.times(a, b); });
  row_table("in", [&](Natural a, Natural b) { return m.in(a, b) ? 1 : 0; });
  if (const auto* table = dynamic_cast<const TableOracle*>(m.oracle_ptr().get())) {
    out += std::string("default: ") + (table->fallback() ? "true" : "false") + "\n";
    for (const auto& [key, value] : table->entries()) {
      out += "oracle: " + render(Formula::op(key.tag, key.body)) + ";";
      for (Natural a : key.args) out += " " + std::to_string(a);
      out += std::string("; ") + (value ? "true" : "false") + "\n";
    }
  } else {
    out += "# oracle is not a finite table\n";
  }
  return out;
}

}  // namespace stratum
