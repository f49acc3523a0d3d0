#pragma once

// Textual formula grammar (whitespace-insensitive between tokens):
//
//   term    := var | "0" | nat | "S(" term ")" | "(" term "+" term ")" | "(" term "*" term ")"
//   formula := term "=" term | "In(" term "," term ")" | "~" formula
//            | "(" formula "->" formula ")" | "forall" var "." formula
//            | "K" formula | "K^{" ordinal "}" formula
//
// with sugar expanded at parse time:
//   a & b   == ~(a -> ~b)      a | b == (~a -> b)
//   a <-> b == (a -> b) & (b -> a)
//   exists x. a == ~forall x. ~a
//   n (decimal literal) == S(...S(0))
//
// Prefix operators (~, K, quantifiers) bind tighter than the binary
// connectives; "->" associates to the right; parentheses may group any
// formula. Variables start with a lowercase letter or '_'.

#include <string_view>

#include "stratum/syntax.hpp"

namespace stratum {

/// Throws ParseError with the offending byte offset.
Formula parse_formula(std::string_view text);
Term parse_term(std::string_view text);

/// Largest decimal literal accepted (literals expand to unary numerals).
inline constexpr Natural kMaxNumeralLiteral = 1'000'000;

}  // namespace stratum
