// The Peano axioms used for the PAAxiom schema. Induction is generated per
// formula by the EAInduction schema.

#include <array>

#include "stratum/parse.hpp"
#include "stratum/theory.hpp"

namespace stratum {

namespace {

constexpr std::array kPeano = {
    "forall x. ~(S(x)=0)",
    "forall x. forall y. (S(x)=S(y) -> x=y)",
    "forall x. ((x+0)=x)",
    "forall x. forall y. ((x+S(y))=S((x+y)))",
    "forall x. ((x*0)=0)",
    "forall x. forall y. ((x*S(y))=((x*y)+x))",
};

}  // namespace

const std::vector<Formula>& pa_axioms() {
  static const std::vector<Formula> axioms = [] {
    std::vector<Formula> out;
    for (const char* text : kPeano) out.push_back(parse_formula(text));
    return out;
  }();
  return axioms;
}

}  // namespace stratum
