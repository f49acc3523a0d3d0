#include "stratum/stratify.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "stratum/error.hpp"

namespace stratum {

// ---------------------------------------------------------------------------
// StratifierSpec

StratifierSpec::StratifierSpec(std::vector<Ordinal> seed, Tail tail, Ordinal from)
    : seed_(std::move(seed)), tail_(tail), from_(from) {
  if (tail_ == Tail::kLimitsFrom && from_.offset != 0)
    throw PreconditionError("limits tail must start at a multiple of w");
  for (std::size_t i = 0; i < seed_.size(); ++i) {
    if (i > 0 && !(seed_[i - 1] < seed_[i])) throw PreconditionError("stratifier seed must be strictly increasing");
    if (!(seed_[i] < from_)) throw PreconditionError("stratifier seed must lie below the tail");
  }
}

bool StratifierSpec::contains(Ordinal a) const {
  if (a < from_) return std::binary_search(seed_.begin(), seed_.end(), a);
  return tail_ == Tail::kAllFrom || a.offset == 0;
}

Ordinal StratifierSpec::nth(std::size_t i) const {
  if (i < seed_.size()) return seed_[i];
  const Natural j = i - seed_.size();
  if (tail_ == Tail::kAllFrom) return {from_.limit, from_.offset + j};
  return omega_times(from_.limit + j);
}

namespace {

class SpecReader {
 public:
  explicit SpecReader(std::string_view text) : text_(text) {}

  StratifierSpec read() {
    std::vector<Ordinal> seed;
    skip_space();
    if (accept("seed:")) {
      expect("[");
      skip_space();
      if (!accept("]")) {
        for (;;) {
          seed.push_back(ordinal_until(",]"));
          if (accept("]")) break;
          expect(",");
        }
      }
    }
    skip_space();
    accept("tail:");
    skip_space();
    std::optional<StratifierSpec> out;
    const std::size_t at = pos_;
    try {
      if (accept("all-from(")) {
        const Ordinal from = ordinal_until(")");
        expect(")");
        out = StratifierSpec::all_from(from, std::move(seed));
      } else if (accept("limits-from(")) {
        const Ordinal k = ordinal_until(")");
        expect(")");
        if (!k.is_finite()) throw ParseError("limits-from expects a natural number", at);
        out = StratifierSpec::limits_from(k.offset, std::move(seed));
      } else {
        throw ParseError("expected 'all-from(' or 'limits-from('", pos_);
      }
    } catch (const PreconditionError& e) {
      throw ParseError(e.what(), at);
    }
    skip_space();
    if (pos_ != text_.size()) throw ParseError("trailing characters in stratifier spec", pos_);
    return *out;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(std::string_view word) {
    skip_space();
    if (text_.substr(pos_, word.size()) != word) return false;
    pos_ += word.size();
    return true;
  }

  void expect(std::string_view word) {
    if (!accept(word)) throw ParseError("expected '" + std::string(word) + "' in stratifier spec", pos_);
  }

  Ordinal ordinal_until(std::string_view stops) {
    const std::size_t end = text_.find_first_of(stops, pos_);
    if (end == std::string_view::npos) throw ParseError("unterminated ordinal in stratifier spec", pos_);
    const std::size_t start = pos_;
    pos_ = end;
    try {
      return parse_ordinal(text_.substr(start, end - start));
    } catch (const ParseError& e) {
      throw ParseError("bad ordinal in stratifier spec", start + e.position());
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

StratifierSpec parse_spec(std::string_view text) { return SpecReader(text).read(); }

std::string to_string(const StratifierSpec& x) {
  std::string out;
  if (!x.seed().empty()) {
    out = "seed:[";
    for (std::size_t i = 0; i < x.seed().size(); ++i) {
      if (i) out += ',';
      out += to_string(x.seed()[i]);
    }
    out += "] ";
  }
  if (x.tail() == StratifierSpec::Tail::kAllFrom)
    out += "tail:all-from(" + to_string(x.tail_start()) + ")";
  else
    out += "tail:limits-from(" + std::to_string(x.tail_start().limit) + ")";
  return out;
}

Ordinal least_excluding(const StratifierSpec& x, const std::set<Ordinal>& s) {
  for (std::size_t i = 0;; ++i) {
    const Ordinal a = x.nth(i);
    if (!s.contains(a)) return a;
  }
}

// ---------------------------------------------------------------------------
// Stratification

namespace {

/// On(psi+) of a stratified subformula, with X[0..prefix) known to lie in it.
struct OnSet {
  std::set<Ordinal> members;
  std::size_t prefix = 0;

  void settle(const StratifierSpec& x) {
    while (members.contains(x.nth(prefix))) ++prefix;
  }
};

}  // namespace

Formula stratify(const Formula& phi, const StratifierSpec& x) {
  std::vector<Node> nodes(phi.nodes().begin(), phi.nodes().end());
  std::vector<OnSet> stack;
  for (NodeId i = 0; i < nodes.size(); ++i) {
    Node& n = nodes[i];
    switch (n.kind) {
      case Kind::kEq:
      case Kind::kIn:
      case Kind::kPred:
        stack.emplace_back();
        break;
      case Kind::kImplies: {
        OnSet b = std::move(stack.back());
        stack.pop_back();
        OnSet& a = stack.back();
        if (a.members.size() < b.members.size()) std::swap(a, b);
        a.members.merge(b.members);
        a.prefix = std::max(a.prefix, b.prefix);
        a.settle(x);
        break;
      }
      case Kind::kOp: {
        if (n.tag.indexed) throw PreconditionError("stratify expects plain operators, found " + to_string(n.tag));
        OnSet& body = stack.back();
        const Ordinal alpha = x.nth(body.prefix);
        n.tag = OperatorTag::at(alpha);
        body.members.insert(alpha);
        body.settle(x);
        break;
      }
      default:
        break;
    }
  }
  Builder b;
  b.reserve(nodes.size());
  for (const Node& n : nodes) b.push_like(n, n.first);
  return std::move(b).formula();
}

Formula destratify(const Formula& phi, bool strict) {
  Builder b;
  b.reserve(phi.size());
  for (const Node& n : phi.nodes()) {
    Node m = n;
    if (m.kind == Kind::kOp) {
      if (strict && !m.tag.indexed) throw PreconditionError("destratify expects indexed operators, found K");
      m.tag = OperatorTag::plain();
    }
    b.push_like(m, m.first);
  }
  return std::move(b).formula();
}

namespace reference {

namespace {

Formula stratify_at(const Formula& phi, NodeId i, const StratifierSpec& x) {
  const Node& n = phi[i];
  switch (n.kind) {
    case Kind::kNot:
      return Formula::negate(stratify_at(phi, phi.child(i), x));
    case Kind::kImplies:
      return Formula::implies(stratify_at(phi, phi.lhs(i), x), stratify_at(phi, phi.rhs(i), x));
    case Kind::kForall:
      return Formula::forall(n.symbol, stratify_at(phi, phi.child(i), x));
    case Kind::kOp: {
      if (n.tag.indexed) throw PreconditionError("stratify expects plain operators");
      const Formula body = stratify_at(phi, phi.child(i), x);
      const std::set<Ordinal> used = on_set(body);
      std::size_t k = 0;
      while (used.contains(x.nth(k))) ++k;
      return Formula::op(OperatorTag::at(x.nth(k)), body);
    }
    default:
      return Formula::at(phi, i);
  }
}

}  // namespace

Formula stratify(const Formula& phi, const StratifierSpec& x) { return stratify_at(phi, phi.root(), x); }

}  // namespace reference

// ---------------------------------------------------------------------------
// Ordinal maps

OrdinalMap::OrdinalMap(std::map<Ordinal, Ordinal> pairs) : pairs_(std::move(pairs)) {
  std::set<Ordinal> seen;
  const std::pair<const Ordinal, Ordinal>* prev = nullptr;
  for (const auto& p : pairs_) {
    if (prev && !(prev->second < p.second)) order_preserving_ = false;
    if (!seen.insert(p.second).second) injective_ = false;
    prev = &p;
  }
}

OrdinalMap OrdinalMap::identity(const std::set<Ordinal>& domain) {
  std::map<Ordinal, Ordinal> m;
  for (Ordinal a : domain) m.emplace(a, a);
  return OrdinalMap(std::move(m));
}

std::set<Ordinal> OrdinalMap::domain() const {
  std::set<Ordinal> out;
  for (const auto& p : pairs_) out.insert(p.first);
  return out;
}

std::set<Ordinal> OrdinalMap::range() const {
  std::set<Ordinal> out;
  for (const auto& p : pairs_) out.insert(p.second);
  return out;
}

Ordinal OrdinalMap::operator()(Ordinal a) const {
  auto it = pairs_.find(a);
  return it == pairs_.end() ? a : it->second;
}

OrdinalMap OrdinalMap::inverse() const {
  if (!injective_) throw PreconditionError("inverse of a non-injective ordinal map");
  std::map<Ordinal, Ordinal> m;
  for (const auto& [a, b] : pairs_) m.emplace(b, a);
  return OrdinalMap(std::move(m));
}

OrdinalMap parse_ordinal_map(std::string_view text) {
  std::map<Ordinal, Ordinal> m;
  std::size_t pos = 0;
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos == text.size()) return OrdinalMap();
  for (;;) {
    const std::size_t colon = text.find(':', pos);
    if (colon == std::string_view::npos) throw ParseError("expected ':' in ordinal map", pos);
    std::size_t comma = text.find(',', colon);
    if (comma == std::string_view::npos) comma = text.size();
    Ordinal a, b;
    try {
      a = parse_ordinal(text.substr(pos, colon - pos));
    } catch (const ParseError& e) {
      throw ParseError("bad ordinal in map", pos + e.position());
    }
    try {
      b = parse_ordinal(text.substr(colon + 1, comma - colon - 1));
    } catch (const ParseError& e) {
      throw ParseError("bad ordinal in map", colon + 1 + e.position());
    }
    if (!m.emplace(a, b).second) throw ParseError("ordinal " + to_string(a) + " mapped twice", pos);
    if (comma == text.size()) break;
    pos = comma + 1;
  }
  return OrdinalMap(std::move(m));
}

std::string to_string(const OrdinalMap& h) {
  std::string out;
  for (const auto& [a, b] : h.pairs()) {
    if (!out.empty()) out += ',';
    out += to_string(a) + ":" + to_string(b);
  }
  return out;
}

Formula apply_ordinal_map(const Formula& phi, const OrdinalMap& h) {
  Builder b;
  b.reserve(phi.size());
  for (const Node& n : phi.nodes()) {
    Node m = n;
    if (m.kind == Kind::kOp && m.tag.indexed) m.tag.level = h(m.tag.level);
    b.push_like(m, m.first);
  }
  return std::move(b).formula();
}

StratifierSpec compose_stratifier(const StratifierSpec& x, const OrdinalMap& h, const Formula& phi) {
  if (!h.order_preserving()) throw PreconditionError("compose_stratifier needs an order-preserving map");
  const Formula plus = stratify(phi, x);
  std::vector<Ordinal> seed;
  for (Ordinal a : on_set(plus)) {
    if (!h.contains(a)) throw PreconditionError("ordinal map undefined on " + to_string(a));
    seed.push_back(h(a));
  }
  const Ordinal from = seed.empty() ? Ordinal{} : seed.back().successor();
  StratifierSpec y = StratifierSpec::all_from(from, std::move(seed));
  if (stratify(phi, y) != apply_ordinal_map(plus, h))
    throw std::logic_error("compose_stratifier: composed stratifier does not reproduce h(phi+)");
  return y;
}

OrdinalMap collapse_map(const std::set<Ordinal>& s, Natural n) {
  if (n == 0) throw PreconditionError("collapse_map needs n >= 1");
  const Ordinal bound = omega_times(n);
  std::map<Ordinal, Ordinal> m;
  Ordinal next{};
  for (Ordinal a : s) {
    if (a < bound) {
      m.emplace(a, a);
      next = a.successor();
    } else {
      m.emplace(a, next);
      next = next.successor();
    }
  }
  return OrdinalMap(std::move(m));
}

std::optional<StratifierSpec> recognize_stratified(const Formula& sigma) {
  if (!is_stratified(sigma)) throw PreconditionError("recognize_stratified expects indexed operators");
  const std::set<Ordinal> on = on_set(sigma);
  std::vector<Ordinal> seed(on.begin(), on.end());
  const Ordinal from = seed.empty() ? Ordinal{} : seed.back().successor();
  StratifierSpec x = StratifierSpec::all_from(from, std::move(seed));
  if (stratify(destratify(sigma), x) == sigma) return x;
  return std::nullopt;
}

}  // namespace stratum
