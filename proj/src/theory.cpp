#include "stratum/theory.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>

#include "stratum/error.hpp"
#include "stratum/parse.hpp"

namespace stratum {

namespace {

constexpr std::array<std::pair<SchemaId, std::string_view>, 9> kSchemaNames{{
    {SchemaId::kE1, "E1"},
    {SchemaId::kE2, "E2"},
    {SchemaId::kE2prime, "E2prime"},
    {SchemaId::kE3, "E3"},
    {SchemaId::kE4, "E4"},
    {SchemaId::kAssignedValidity, "AssignedValidity"},
    {SchemaId::kMechanicalness, "Mechanicalness"},
    {SchemaId::kEAInduction, "EAInduction"},
    {SchemaId::kPAAxiom, "PAAxiom"},
}};

Formula close(const Formula& f, const std::vector<Symbol>& vars) {
  return vars.empty() ? universal_closure(f) : universal_closure(f, vars);
}

Formula K(const Formula& f) { return Formula::know(f); }

}  // namespace

SchemaId parse_schema_id(std::string_view text) {
  for (const auto& [id, name] : kSchemaNames)
    if (name == text) return id;
  throw ParseError("unknown schema '" + std::string(text) + "'", 0);
}

std::string to_string(SchemaId id) {
  for (const auto& [k, name] : kSchemaNames)
    if (k == id) return std::string(name);
  return "?";
}

Formula instantiate_schema(SchemaId id, const SchemaArgs& a) {
  const Formula& phi = a.phi;
  switch (id) {
    case SchemaId::kE1:
      if (a.validity && !a.validity(phi)) throw PreconditionError("E1 needs a valid formula");
      return close(K(phi), a.closure_vars);
    case SchemaId::kE2:
    case SchemaId::kE2prime: {
      if (!a.psi) throw PreconditionError(to_string(id) + " needs psi");
      const Formula& psi = *a.psi;
      if (id == SchemaId::kE2prime && depth(phi) > depth(psi))
        throw PreconditionError("E2prime needs depth(phi) <= depth(psi), got " + std::to_string(depth(phi)) + " > " +
                                std::to_string(depth(psi)));
      return close(Formula::implies(K(Formula::implies(phi, psi)), Formula::implies(K(phi), K(psi))),
                   a.closure_vars);
    }
    case SchemaId::kE3:
      return close(Formula::implies(K(phi), phi), a.closure_vars);
    case SchemaId::kE4:
      return close(Formula::implies(K(phi), K(K(phi))), a.closure_vars);
    case SchemaId::kAssignedValidity:
      if (!a.s) throw PreconditionError("AssignedValidity needs an assignment");
      if (a.validity && !a.validity(phi)) throw PreconditionError("AssignedValidity needs a valid formula");
      return assign_substitute(phi, *a.s);
    case SchemaId::kMechanicalness: {
      const auto fv = free_vars(phi);
      if (std::find(fv.begin(), fv.end(), a.index_var) != fv.end())
        throw PreconditionError("Mechanicalness needs " + a.index_var.name() + " not free in phi");
      const Formula member = Formula::in(Term::var(a.element_var), Term::var(a.index_var));
      const Formula body = exists(a.index_var, Formula::forall(a.element_var, biconditional(K(phi), member)));
      return close(body, a.closure_vars);
    }
    case SchemaId::kEAInduction: {
      const Symbol x = a.induction_var;
      const Formula base = substitute(phi, x, Term::zero());
      const Formula step = Formula::forall(x, Formula::implies(phi, substitute(phi, x, Term::succ(Term::var(x)))));
      return close(Formula::implies(base, Formula::implies(step, Formula::forall(x, phi))), a.closure_vars);
    }
    case SchemaId::kPAAxiom:
      if (a.pa_index >= pa_axioms().size()) throw PreconditionError("no Peano axiom " + std::to_string(a.pa_index));
      return pa_axioms()[a.pa_index];
  }
  throw PreconditionError("unknown schema");
}

std::set<Formula> k_close(const std::set<Formula>& fragment, std::size_t steps) {
  std::set<Formula> out = fragment;
  std::vector<Formula> layer(fragment.begin(), fragment.end());
  for (std::size_t k = 0; k < steps; ++k) {
    for (Formula& f : layer) {
      f = K(f);
      out.insert(f);
    }
  }
  return out;
}

StratifiedFragment oplus_sample(const Formula& phi, const std::vector<StratifierSpec>& specs) {
  if (!is_sentence(phi)) throw PreconditionError("oplus_sample needs a sentence");
  StratifiedFragment out;
  for (const auto& x : specs) out.insert(stratify(phi, x));
  return out;
}

StratifiedFragment restrict(const StratifiedFragment& fragment, Ordinal alpha) {
  StratifiedFragment out;
  for (const Formula& f : fragment) {
    const auto on = on_set(f);
    if (on.empty() || *on.rbegin() < alpha) out.insert(f);
  }
  return out;
}

namespace {

/// Calls visit(h) for every order-preserving h from `domain` into `pool`.
template <class Visit>
void for_each_increasing_map(const std::vector<Ordinal>& domain, const std::vector<Ordinal>& pool, Visit&& visit) {
  const std::size_t k = domain.size(), n = pool.size();
  if (k > n) return;
  std::vector<std::size_t> pick(k);
  for (std::size_t i = 0; i < k; ++i) pick[i] = i;
  for (;;) {
    std::map<Ordinal, Ordinal> m;
    for (std::size_t i = 0; i < k; ++i) m.emplace(domain[i], pool[pick[i]]);
    visit(OrdinalMap(std::move(m)));
    std::size_t i = k;
    while (i > 0 && pick[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++pick[i - 1];
    for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
}

bool within(const std::set<Ordinal>& on, const std::set<Ordinal>& pool) {
  return std::includes(pool.begin(), pool.end(), on.begin(), on.end());
}

}  // namespace

std::vector<UniformViolation> check_uniform(const StratifiedFragment& fragment, const std::set<Ordinal>& pool) {
  std::vector<UniformViolation> out;
  const std::vector<Ordinal> targets(pool.begin(), pool.end());
  for (const Formula& f : fragment) {
    const auto on = on_set(f);
    if (!within(on, pool)) continue;
    for_each_increasing_map({on.begin(), on.end()}, targets, [&](const OrdinalMap& h) {
      Formula image = apply_ordinal_map(f, h);
      if (!fragment.contains(image)) out.push_back({f, h, std::move(image)});
    });
  }
  return out;
}

StratifiedFragment uniform_closure(const StratifiedFragment& fragment, const std::set<Ordinal>& pool) {
  StratifiedFragment out = fragment;
  const std::vector<Ordinal> targets(pool.begin(), pool.end());
  std::vector<Formula> work(fragment.begin(), fragment.end());
  while (!work.empty()) {
    const Formula f = std::move(work.back());
    work.pop_back();
    const auto on = on_set(f);
    if (!within(on, pool)) continue;
    for_each_increasing_map({on.begin(), on.end()}, targets, [&](const OrdinalMap& h) {
      Formula image = apply_ordinal_map(f, h);
      if (out.insert(image).second) work.push_back(std::move(image));
    });
  }
  return out;
}

// ---------------------------------------------------------------------------
// Presentations

std::vector<Formula> pool_instances(SchemaId id, const std::vector<Formula>& operands,
                                    const std::function<bool(const Formula&)>& validity) {
  std::vector<Formula> out;
  SchemaArgs args;
  switch (id) {
    case SchemaId::kE2:
    case SchemaId::kE2prime:
      for (const Formula& phi : operands)
        for (const Formula& psi : operands) {
          if (id == SchemaId::kE2prime && depth(phi) > depth(psi)) continue;
          args.phi = phi;
          args.psi = psi;
          out.push_back(instantiate_schema(id, args));
        }
      break;
    case SchemaId::kE1:
    case SchemaId::kAssignedValidity:
      if (!validity) break;
      for (const Formula& phi : operands) {
        if (!validity(phi)) continue;
        args.phi = phi;
        Assignment zero;
        for (Symbol v : free_vars(phi)) zero[v] = 0;
        args.s = zero;
        out.push_back(instantiate_schema(id, args));
      }
      break;
    case SchemaId::kEAInduction:
      for (const Formula& phi : operands)
        for (Symbol x : free_vars(phi)) {
          args.phi = phi;
          args.induction_var = x;
          out.push_back(instantiate_schema(id, args));
        }
      break;
    case SchemaId::kMechanicalness:
      for (const Formula& phi : operands) {
        const auto fv = free_vars(phi);
        if (std::find(fv.begin(), fv.end(), args.index_var) != fv.end()) continue;
        args.phi = phi;
        out.push_back(instantiate_schema(id, args));
      }
      break;
    case SchemaId::kPAAxiom:
      out = pa_axioms();
      break;
    default:
      for (const Formula& phi : operands) {
        args.phi = phi;
        out.push_back(instantiate_schema(id, args));
      }
      break;
  }
  return out;
}

std::vector<Formula> expand(const TheoryPresentation& t, const std::function<bool(const Formula&)>& validity) {
  std::vector<Formula> layer;
  std::set<Formula> seen;
  auto add = [&](const Formula& f) {
    if (seen.insert(f).second) layer.push_back(f);
  };
  for (const Formula& f : t.sentences) add(f);
  for (const SchemaUse& use : t.schemas) {
    if (use.args) {
      SchemaArgs args = *use.args;
      if (!args.validity) args.validity = validity;
      add(instantiate_schema(use.id, args));
    } else {
      for (const Formula& f : pool_instances(use.id, t.operands, validity)) add(f);
    }
  }
  std::vector<Formula> out = layer;
  for (std::size_t k = 0; k < t.k_closure_depth; ++k) {
    std::vector<Formula> next;
    for (const Formula& f : layer) {
      Formula g = K(f);
      if (seen.insert(g).second) {
        out.push_back(g);
        next.push_back(std::move(g));
      }
    }
    layer = std::move(next);
  }
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

Formula formula_at(std::string_view text, std::size_t offset) {
  try {
    return parse_formula(text);
  } catch (const ParseError& e) {
    throw ParseError(std::string("bad formula: ") + e.what(), offset + e.position());
  }
}

Natural natural_at(std::string_view text, std::size_t offset) {
  text = trim(text);
  Natural v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) throw ParseError("expected a natural number", offset);
  return v;
}

Assignment assignment_at(std::string_view text, std::size_t offset) {
  Assignment s;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    const std::string_view item = trim(text.substr(pos, comma - pos));
    if (!item.empty()) {
      const std::size_t colon = item.find(':');
      if (colon == std::string_view::npos) throw ParseError("expected var:value", offset + pos);
      s[Symbol(trim(item.substr(0, colon)))] = natural_at(item.substr(colon + 1), offset + pos);
    }
    pos = comma + 1;
  }
  return s;
}

}  // namespace

TheoryPresentation parse_theory(std::string_view text) {
  TheoryPresentation t;
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
    const std::size_t value_at = at + colon + 1;
    if (key == "sentence") {
      Formula f = formula_at(value, value_at);
      if (!is_sentence(f)) throw ParseError("theory sentences must be closed", value_at);
      t.sentences.push_back(std::move(f));
    } else if (key == "operand") {
      t.operands.push_back(formula_at(value, value_at));
    } else if (key == "k-closure") {
      t.k_closure_depth = natural_at(value, value_at);
    } else if (key == "schema") {
      std::size_t pos = 0;
      std::size_t semi = value.find(';');
      const std::string_view name = trim(value.substr(0, semi));
      SchemaUse use{SchemaId::kE1, std::nullopt};
      try {
        use.id = parse_schema_id(name);
      } catch (const ParseError& e) {
        throw ParseError(e.what(), value_at);
      }
      bool have_phi = false;
      SchemaArgs args;
      bool explicit_fields = false;
      while (semi != std::string_view::npos) {
        pos = semi + 1;
        semi = value.find(';', pos);
        const std::string_view field = value.substr(pos, semi == std::string_view::npos ? semi : semi - pos);
        const std::size_t eq = field.find('=');
        if (eq == std::string_view::npos) throw ParseError("expected 'field = value'", value_at + pos);
        const std::string_view fkey = trim(field.substr(0, eq));
        const std::string_view fval = field.substr(eq + 1);
        const std::size_t fat = value_at + pos + eq + 1;
        explicit_fields = true;
        if (fkey == "phi") {
          args.phi = formula_at(fval, fat);
          have_phi = true;
        } else if (fkey == "psi") {
          args.psi = formula_at(fval, fat);
        } else if (fkey == "s") {
          args.s = assignment_at(fval, fat);
        } else if (fkey == "var") {
          args.induction_var = Symbol(trim(fval));
        } else if (fkey == "index") {
          args.pa_index = natural_at(fval, fat);
        } else if (fkey == "vars") {
          std::string_view rest = fval;
          while (!trim(rest).empty()) {
            const std::size_t comma = rest.find(',');
            args.closure_vars.emplace_back(trim(rest.substr(0, comma)));
            rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
          }
        } else {
          throw ParseError("unknown schema field '" + std::string(fkey) + "'", value_at + pos);
        }
      }
      if (explicit_fields) {
        if (!have_phi && use.id != SchemaId::kPAAxiom) throw ParseError("schema instance needs phi", value_at);
        try {
          SchemaArgs probe = args;
          instantiate_schema(use.id, probe);
        } catch (const Error& e) {
          throw ParseError(e.what(), value_at);
        }
        use.args = std::move(args);
      }
      t.schemas.push_back(std::move(use));
    } else {
      throw ParseError("unknown key '" + std::string(key) + "'", at);
    }
  }
  return t;
}

}  // namespace stratum
