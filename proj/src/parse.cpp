#include "stratum/parse.hpp"

#include <cctype>
#include <charconv>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "stratum/error.hpp"

namespace stratum {

namespace {

enum class Tok {
  kLParen,
  kRParen,
  kComma,
  kEq,
  kPlus,
  kStar,
  kArrow,
  kIff,
  kAnd,
  kOr,
  kNot,
  kDot,
  kOp,
  kSucc,
  kIn,
  kForall,
  kExists,
  kIdent,
  kNumber,
  kEnd,
};

struct Token {
  Tok type;
  std::size_t pos;
  std::string_view text;
  OperatorTag tag{};         // kOp
  Natural number = 0;        // kNumber
  bool formula_group = false;  // kLParen: parenthesizes a formula rather than a term
};

bool ident_start(char c) { return std::islower(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto emit = [&](Tok t, std::size_t len) {
    out.push_back({t, i, s.substr(i, len)});
    i += len;
  };
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    switch (c) {
      case '(': emit(Tok::kLParen, 1); continue;
      case ')': emit(Tok::kRParen, 1); continue;
      case ',': emit(Tok::kComma, 1); continue;
      case '=': emit(Tok::kEq, 1); continue;
      case '+': emit(Tok::kPlus, 1); continue;
      case '*': emit(Tok::kStar, 1); continue;
      case '&': emit(Tok::kAnd, 1); continue;
      case '|': emit(Tok::kOr, 1); continue;
      case '~': emit(Tok::kNot, 1); continue;
      case '.': emit(Tok::kDot, 1); continue;
      default: break;
    }
    if (s.compare(i, 2, "->") == 0) {
      emit(Tok::kArrow, 2);
      continue;
    }
    if (s.compare(i, 3, "<->") == 0) {
      emit(Tok::kIff, 3);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      Natural value = 0;
      auto [ptr, ec] = std::from_chars(s.data() + i, s.data() + s.size(), value);
      const auto len = static_cast<std::size_t>(ptr - (s.data() + i));
      if (ec != std::errc() || value > kMaxNumeralLiteral) throw ParseError("numeral literal too large", i);
      out.push_back({Tok::kNumber, i, s.substr(i, len), {}, value});
      i += len;
      continue;
    }
    if (c == 'K') {
      if (i + 1 < s.size() && s[i + 1] == '^') {
        if (i + 2 >= s.size() || s[i + 2] != '{') throw ParseError("expected '{' after 'K^'", i + 2);
        const std::size_t close = s.find('}', i + 3);
        if (close == std::string_view::npos) throw ParseError("unterminated operator superscript", i);
        Ordinal level;
        try {
          level = parse_ordinal(s.substr(i + 3, close - i - 3));
        } catch (const ParseError& e) {
          throw ParseError("bad ordinal superscript", i + 3 + e.position());
        }
        out.push_back({Tok::kOp, i, s.substr(i, close + 1 - i), OperatorTag::at(level)});
        i = close + 1;
      } else {
        out.push_back({Tok::kOp, i, s.substr(i, 1), OperatorTag::plain()});
        ++i;
      }
      continue;
    }
    if (c == 'S') {
      emit(Tok::kSucc, 1);
      continue;
    }
    if (s.compare(i, 2, "In") == 0 && (i + 2 >= s.size() || !ident_char(s[i + 2]))) {
      emit(Tok::kIn, 2);
      continue;
    }
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < s.size() && ident_char(s[j])) ++j;
      const std::string_view word = s.substr(i, j - i);
      const Tok t = word == "forall" ? Tok::kForall : word == "exists" ? Tok::kExists : Tok::kIdent;
      emit(t, j - i);
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", i);
  }
  out.push_back({Tok::kEnd, s.size(), {}});

  // A parenthesis groups a formula when it directly encloses a formula-level
  // token or another formula group.
  std::vector<std::size_t> open;
  for (std::size_t k = 0; k < out.size(); ++k) {
    switch (out[k].type) {
      case Tok::kLParen:
        open.push_back(k);
        break;
      case Tok::kRParen:
        if (open.empty()) throw ParseError("unbalanced ')'", out[k].pos);
        if (out[open.back()].formula_group && open.size() > 1) out[open[open.size() - 2]].formula_group = true;
        open.pop_back();
        break;
      case Tok::kEq:
      case Tok::kArrow:
      case Tok::kIff:
      case Tok::kAnd:
      case Tok::kOr:
      case Tok::kNot:
      case Tok::kOp:
      case Tok::kIn:
      case Tok::kForall:
      case Tok::kExists:
        if (!open.empty()) out[open.back()].formula_group = true;
        break;
      default:
        break;
    }
  }
  if (!open.empty()) throw ParseError("unbalanced '('", out[open.back()].pos);
  return out;
}

const char* describe(Tok t) {
  switch (t) {
    case Tok::kLParen: return "'('";
    case Tok::kRParen: return "')'";
    case Tok::kComma: return "','";
    case Tok::kEq: return "'='";
    case Tok::kDot: return "'.'";
    case Tok::kEnd: return "end of input";
    default: return "token";
  }
}

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(tokenize(text)) { out_.reserve(tokens_.size()); }

  Formula parse_formula() {
    formula();
    expect(Tok::kEnd);
    return std::move(out_).formula();
  }

  Term parse_term() {
    term();
    expect(Tok::kEnd);
    return std::move(out_).term();
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }

  bool accept(Tok t) {
    if (peek().type != t) return false;
    ++pos_;
    return true;
  }

  const Token& expect(Tok t) {
    if (peek().type != t) throw ParseError(std::string("expected ") + describe(t), peek().pos);
    return tokens_[pos_++];
  }

  NodeId formula() {
    const NodeId a = implication();
    if (!accept(Tok::kIff)) return a;
    const NodeId b = formula();
    // (a -> b) & (b -> a) == ~((a -> b) -> ~(b -> a))
    const NodeId ab = out_.implies(a, b);
    const NodeId b2 = out_.duplicate(b);
    const NodeId a2 = out_.duplicate(a);
    const NodeId ba = out_.implies(b2, a2);
    const NodeId not_ba = out_.negate(ba);
    return out_.negate(out_.implies(ab, not_ba));
  }

  NodeId implication() {
    std::size_t operands = 1;
    NodeId r = disjunction();
    while (accept(Tok::kArrow)) {
      r = disjunction();
      ++operands;
    }
    // Right fold over the contiguous operand subtrees.
    for (std::size_t k = 1; k < operands; ++k) r = out_.implies(out_[r].first - 1, r);
    return r;
  }

  NodeId disjunction() {
    NodeId d = conjunction();
    while (accept(Tok::kOr)) {
      const NodeId not_d = out_.negate(d);
      d = out_.implies(not_d, conjunction());
    }
    return d;
  }

  NodeId conjunction() {
    NodeId c = unary();
    while (accept(Tok::kAnd)) {
      const NodeId not_e = out_.negate(unary());
      c = out_.negate(out_.implies(c, not_e));
    }
    return c;
  }

  NodeId unary() {
    struct Prefix {
      Tok kind;
      OperatorTag tag;
      Symbol var;
    };
    std::vector<Prefix> prefixes;
    for (;;) {
      const Token& t = peek();
      if (t.type == Tok::kNot || t.type == Tok::kOp) {
        prefixes.push_back({t.type, t.tag, {}});
        ++pos_;
      } else if (t.type == Tok::kForall || t.type == Tok::kExists) {
        ++pos_;
        const Token& v = expect(Tok::kIdent);
        expect(Tok::kDot);
        prefixes.push_back({t.type, {}, Symbol(v.text)});
      } else {
        break;
      }
    }
    NodeId f = atom();
    for (auto it = prefixes.rbegin(); it != prefixes.rend(); ++it) {
      switch (it->kind) {
        case Tok::kNot: f = out_.negate(f); break;
        case Tok::kOp: f = out_.op(it->tag, f); break;
        case Tok::kForall: f = out_.forall(it->var, f); break;
        default: f = out_.negate(out_.forall(it->var, out_.negate(f))); break;
      }
    }
    return f;
  }

  NodeId atom() {
    const Token& t = peek();
    if (t.type == Tok::kLParen && t.formula_group) {
      ++pos_;
      const NodeId f = formula();
      expect(Tok::kRParen);
      return f;
    }
    if (accept(Tok::kIn)) {
      expect(Tok::kLParen);
      const NodeId a = term();
      expect(Tok::kComma);
      const NodeId b = term();
      expect(Tok::kRParen);
      return out_.in(a, b);
    }
    if (t.type == Tok::kEnd || t.type == Tok::kRParen) throw ParseError("expected a formula", t.pos);
    const NodeId a = term();
    expect(Tok::kEq);
    return out_.eq(a, term());
  }

  NodeId term() {
    const Token& t = peek();
    switch (t.type) {
      case Tok::kIdent:
        ++pos_;
        return out_.var(Symbol(t.text));
      case Tok::kNumber:
        ++pos_;
        return out_.numeral(t.number);
      case Tok::kSucc: {
        ++pos_;
        expect(Tok::kLParen);
        const NodeId a = term();
        expect(Tok::kRParen);
        return out_.succ(a);
      }
      case Tok::kLParen: {
        ++pos_;
        const NodeId a = term();
        NodeId r = a;
        if (accept(Tok::kPlus))
          r = out_.plus(a, term());
        else if (accept(Tok::kStar))
          r = out_.times(a, term());
        expect(Tok::kRParen);
        return r;
      }
      default:
        throw ParseError("expected a term", t.pos);
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  Builder out_;
};

// ---------------------------------------------------------------------------
// Rendering

/// numeral_length[i] is n when the subtree at i is the numeral n.
std::vector<std::optional<Natural>> numeral_lengths(const Expr& e) {
  std::vector<std::optional<Natural>> n(e.size());
  for (NodeId i = 0; i < e.size(); ++i) {
    if (e.kind(i) == Kind::kZero)
      n[i] = 0;
    else if (e.kind(i) == Kind::kSucc && n[i - 1])
      n[i] = *n[i - 1] + 1;
  }
  return n;
}

std::string render_expr(const Expr& e) {
  const auto numerals = numeral_lengths(e);
  std::string out;
  out.reserve(e.size() * 4);
  traverse(e, e.root(), [&](Visit v, NodeId i, std::uint32_t) {
    const Node& n = e[i];
    switch (n.kind) {
      case Kind::kVar:
        out += n.symbol.name();
        return false;
      case Kind::kZero:
        out += '0';
        return false;
      case Kind::kSucc:
        if (v == Visit::kEnter && numerals[i]) {
          out += std::to_string(*numerals[i]);
          return false;
        }
        out += v == Visit::kEnter ? "S(" : ")";
        return true;
      case Kind::kPlus:
      case Kind::kTimes:
      case Kind::kEq:
        if (v == Visit::kEnter)
          out += '(';
        else if (v == Visit::kBetween)
          out += n.kind == Kind::kPlus ? '+' : n.kind == Kind::kTimes ? '*' : '=';
        else
          out += ')';
        return true;
      case Kind::kIn:
        out += v == Visit::kEnter ? "In(" : v == Visit::kBetween ? "," : ")";
        return true;
      case Kind::kPred:
        if (v == Visit::kEnter) {
          out += n.symbol.name();
          if (n.arity == 0) return false;
          out += '(';
        } else {
          out += v == Visit::kBetween ? "," : ")";
        }
        return true;
      case Kind::kNot:
        if (v == Visit::kEnter) out += '~';
        return true;
      case Kind::kImplies:
        out += v == Visit::kEnter ? "(" : v == Visit::kBetween ? " -> " : ")";
        return true;
      case Kind::kForall:
        if (v == Visit::kEnter) {
          out += "forall ";
          out += n.symbol.name();
          out += ". ";
        }
        return true;
      case Kind::kOp:
        if (v == Visit::kEnter) {
          out += to_string(n.tag);
          out += ' ';
        }
        return true;
    }
    return true;
  });
  return out;
}

}  // namespace

Formula parse_formula(std::string_view text) { return Parser(text).parse_formula(); }
Term parse_term(std::string_view text) { return Parser(text).parse_term(); }

std::string render(const Formula& f) { return render_expr(f); }
std::string render(const Term& t) { return render_expr(t); }

}  // namespace stratum
