#include "stratum/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <ostream>
#include <set>
#include <sstream>

#include "stratum/error.hpp"
#include "stratum/intended.hpp"
#include "stratum/parse.hpp"
#include "stratum/prove.hpp"
#include "stratum/semantics.hpp"
#include "stratum/stratify.hpp"
#include "stratum/theory.hpp"

namespace stratum::cli {

namespace {

using json = nlohmann::json;

/// Raised for inputs the user has to fix; maps to kUsage.
struct UsageError : Error {
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string text_arg(const std::string& arg) { return arg.starts_with("@") ? read_file(arg.substr(1)) : arg; }

Formula formula_arg(const std::string& arg) { return parse_formula(text_arg(arg)); }

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(sep, start);
    if (end == std::string_view::npos) end = text.size();
    std::string item(text.substr(start, end - start));
    const auto b = item.find_first_not_of(" \t\r");
    const auto e = item.find_last_not_of(" \t\r");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
    start = end + 1;
  }
  return out;
}

std::set<Ordinal> ordinal_list(const std::string& text) {
  std::set<Ordinal> out;
  for (const auto& item : split(text, ',')) out.insert(parse_ordinal(item));
  return out;
}

/// "x:1,y:2".
Assignment assignment_arg(const std::string& text) {
  Assignment s;
  for (const auto& item : split(text, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw UsageError("assignment entries look like x:3, got '" + item + "'");
    const std::string value = item.substr(colon + 1);
    if (value.empty() || value.find_first_not_of("0123456789") != std::string::npos)
      throw UsageError("assignment value must be a natural number, got '" + value + "'");
    s[Symbol(item.substr(0, colon))] = std::stoull(value);
  }
  return s;
}

/// One formula per line; blank lines and '#' comments are skipped.
StratifiedFragment fragment_file(const std::string& arg) {
  const std::string text = read_file(arg.starts_with("@") ? arg.substr(1) : arg);
  StratifiedFragment out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.insert(parse_formula(line));
  }
  return out;
}

std::string ordinals_text(const std::set<Ordinal>& s) {
  std::string out = "{";
  for (Ordinal a : s) out += (out.size() > 1 ? ", " : "") + to_string(a);
  return out + "}";
}

json ordinals_json(const std::set<Ordinal>& s) {
  json out = json::array();
  for (Ordinal a : s) out.push_back(to_string(a));
  return out;
}

json report_json(const ProofReport& r) {
  json j{{"status", to_string(r.status)},
         {"spent",
          {{"steps", r.spent.steps},
           {"gamma", r.spent.gamma},
           {"countermodel_nodes", r.spent.countermodel_nodes},
           {"tableau_runs", r.spent.tableau_runs}}}};
  if (r.status == ProofStatus::kProved) {
    j["used_indices"] = r.used_indices;
    json used = json::array();
    for (const Formula& p : r.used_premises) used.push_back(render(p));
    j["used_premises"] = used;
  }
  if (r.countermodel) {
    json assignment = json::object();
    for (const auto& [v, a] : r.countermodel->assignment) assignment[v.name()] = a;
    j["countermodel"] = {{"structure", render_structure(r.countermodel->structure)}, {"assignment", assignment}};
  }
  return j;
}

int status_exit(ProofStatus s) {
  switch (s) {
    case ProofStatus::kProved: return kOk;
    case ProofStatus::kRefuted: return kViolation;
    case ProofStatus::kUnknown: return kUnknown;
  }
  return kUnknown;
}

class Runner {
 public:
  Runner(std::ostream& out) : out_(out) {}

  bool structured = false;

  void emit(const std::string& text, json record) {
    if (structured) out_ << record.dump() << "\n";
    else out_ << text << (text.ends_with("\n") ? "" : "\n");
  }

 private:
  std::ostream& out_;
};

Budget budget_from(std::size_t n, bool given) { return given ? Budget(n) : Budget{}; }

/// Schema instances that need a valid operand (E1, AssignedValidity) are
/// kept when the prover establishes validity of the closure.
std::vector<Formula> theory_premises(const std::string& path, const Budget& budget) {
  return expand(parse_theory(read_file(path)), [&](const Formula& phi) {
    return prove_bounded(universal_closure(phi), budget).status == ProofStatus::kProved;
  });
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stratified epistemic arithmetic toolkit", "stratum"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  Runner runner(out);
  app.add_flag("--structured", runner.structured, "Emit one JSON record per line");
  std::function<int()> action;

  std::string formula, x_spec, h_text, supers, alpha_text, pool_text, theory_path, model_path, assign_text;
  std::string id_text, phi_text, psi_text, s_text, vars_text, var_text = "x";
  std::size_t n = 1, budget_n = 0, max_universe = 3, index = 0;
  bool lenient = false, close = false;
  auto formula_option = [&](CLI::App* sub) { sub->add_option("formula", formula, "Formula text or @file")->required(); };
  auto budget_option = [&](CLI::App* sub) { return sub->add_option("--budget", budget_n, "Set every prover budget counter"); };

  {
    auto* sub = app.add_subcommand("parse", "Parse and print a formula canonically");
    formula_option(sub);
    sub->callback([&] {
      action = [&] {
        const Formula f = formula_arg(formula);
        runner.emit(render(f), {{"command", "parse"}, {"formula", render(f)}, {"nodes", f.size()}});
        return kOk;
      };
    });
  }
  {
    auto* sub = app.add_subcommand("depth", "Operator nesting depth");
    formula_option(sub);
    sub->callback([&] {
      action = [&] {
        const auto d = depth(formula_arg(formula));
        runner.emit(std::to_string(d), {{"command", "depth"}, {"depth", d}});
        return kOk;
      };
    });
  }
  {
    auto* sub = app.add_subcommand("onset", "Superscripts of the indexed operators");
    formula_option(sub);
    sub->callback([&] {
      action = [&] {
        const auto s = on_set(formula_arg(formula));
        runner.emit(ordinals_text(s), {{"command", "onset"}, {"onset", ordinals_json(s)}});
        return kOk;
      };
    });
  }
  {
    auto* sub = app.add_subcommand("stratify", "Apply the stratifier given by X");
    sub->add_option("--x", x_spec, "Stratifier, e.g. \"tail:limits-from(1)\"")->required();
    formula_option(sub);
    sub->callback([&] {
      action = [&] {
        const Formula f = stratify(formula_arg(formula), parse_spec(x_spec));
        runner.emit(render(f), {{"command", "stratify"}, {"x", x_spec}, {"formula", render(f)}});
        return kOk;
      };
    });
  }
  {
    auto* sub = app.add_subcommand("destratify", "Erase superscripts");
    sub->add_flag("--lenient", lenient, "Accept plain operators in the input");
    formula_option(sub);
    sub->callback([&] {
      action = [&] {
        const Formula f = destratify(formula_arg(formula), !lenient);
        runner.emit(render(f), {{"command", "destratify"}, {"formula", render(f)}});
        return kOk;
      };
    });
  }
  {
    auto* sub = app.add_subcommand("maph", "Rewrite superscripts through an ordinal map");
    sub->set_help_flag("--help", "Print this help message and exit");
    sub->add_option("--h", h_text, "Pairs a:b,c:d")->required();
    formula_option(sub);
    sub->callback([&] {
      action = [&] {
        const OrdinalMap h = parse_ordinal_map(h_text);
        const Formula f = apply_ordinal_map(formula_arg(formula), h);
        runner.emit(render(f), {{"command", "maph"},
                                {"h", to_string(h)},
                                {"order_preserving", h.order_preserving()},
                                {"formula", render(f)}});
        return kOk;
      };
    });
  }
  {
    auto* sub = app.add_subcommand("collapse", "The collapse map for a set of superscripts");
    sub->add_option("--n", n, "Collapse below w*n")->required();
    sub->add_option("--supers", supers, "Comma-separated ordinals")->required();
    sub->callback([&] {
      action = [&] {
        const OrdinalMap h = collapse_map(ordinal_list(supers), n);
        runner.emit(to_string(h), {{"command", "collapse"}, {"n", n}, {"h", to_string(h)}});
        return kOk;
      };
    });
  }
  {
    auto* sub = app.add_subcommand("recognize", "Whether some stratifier produces the formula");
    formula_option(sub);
    sub->callback([&] {
      action = [&] {
        const auto x = recognize_stratified(formula_arg(formula));
        if (!x) {
          runner.emit("not stratified", {{"command", "recognize"}, {"stratified", false}});
          return kViolation;
        }
        runner.emit(to_string(*x), {{"command", "recognize"}, {"stratified", true}, {"x", to_string(*x)}});
        return kOk;
      };
    });
  }
  {
    auto* sub = app.add_subcommand("schema", "Instantiate a schema");
    sub->add_option("--id", id_text, "E1, E2, E2prime, E3, E4, AssignedValidity, Mechanicalness, EAInduction, PAAxiom")
        ->required();
    sub->add_option("--phi", phi_text, "Operand formula");
    sub->add_option("--psi", psi_text, "Second operand (E2, E2prime)");
    sub->add_option("--s", s_text, "Assignment x:1,y:2 (AssignedValidity)");
    sub->add_option("--vars", vars_text, "Closure order x,y");
    sub->add_option("--var", var_text, "Induction variable");
    sub->add_option("--index", index, "PA axiom index");
    sub->callback([&] {
      action = [&] {
        const SchemaId id = parse_schema_id(id_text);
        SchemaArgs a;
        if (!phi_text.empty()) a.phi = formula_arg(phi_text);
        if (!psi_text.empty()) a.psi = formula_arg(psi_text);
        if (!s_text.empty()) a.s = assignment_arg(s_text);
        for (const auto& v : split(vars_text, ',')) a.closure_vars.emplace_back(v);
        a.induction_var = Symbol(var_text);
        a.pa_index = index;
        Formula f;
        try {
          f = instantiate_schema(id, a);
        } catch (const PreconditionError& e) {
          runner.emit(std::string("side condition fails: ") + e.what(),
                      {{"command", "schema"}, {"id", to_string(id)}, {"error", e.what()}});
          return kViolation;
        }
        runner.emit(render(f), {{"command", "schema"}, {"id", to_string(id)}, {"formula", render(f)}});
        return kOk;
      };
    });
  }
  {
    auto* sub = app.add_subcommand("restrict", "Members of a fragment file below alpha");
    sub->add_option("--alpha", alpha_text, "Ordinal bound")->required();
    sub->add_option("fragment", formula, "File with one formula per line")->required();
    sub->callback([&] {
      action = [&] {
        const auto r = restrict(fragment_file(formula), parse_ordinal(alpha_text));
        std::string text;
        json members = json::array();
        for (const Formula& f : r) {
          text += render(f) + "\n";
          members.push_back(render(f));
        }
        runner.emit(text.empty() ? "(empty)" : text, {{"command", "restrict"}, {"alpha", alpha_text}, {"members", members}});
        return kOk;
      };
    });
  }
  {
    auto* sub = app.add_subcommand("uniform", "Check a fragment file for uniformity over a pool");
    sub->add_option("--pool", pool_text, "Comma-separated ordinals")->required();
    sub->add_flag("--close", close, "Print the uniform closure instead");
    sub->add_option("fragment", formula, "File with one formula per line")->required();
    sub->callback([&] {
      action = [&] {
        const auto frag = fragment_file(formula);
        const auto pool = ordinal_list(pool_text);
        if (close) {
          std::string text;
          json members = json::array();
          for (const Formula& f : uniform_closure(frag, pool)) {
            text += render(f) + "\n";
            members.push_back(render(f));
          }
          runner.emit(text, {{"command", "uniform"}, {"closure", members}});
          return kOk;
        }
        const auto violations = check_uniform(frag, pool);
        std::string text = violations.empty() ? "uniform\n" : "";
        json list = json::array();
        for (const auto& v : violations) {
          text += "missing " + render(v.missing) + " = h(" + render(v.member) + "), h = " + to_string(v.h) + "\n";
          list.push_back({{"member", render(v.member)}, {"h", to_string(v.h)}, {"missing", render(v.missing)}});
        }
        runner.emit(text, {{"command", "uniform"}, {"uniform", violations.empty()}, {"violations", list}});
        return violations.empty() ? kOk : kViolation;
      };
    });
  }
  {
    auto* sub = app.add_subcommand("abstract", "Replace operator subformulas by predicates");
    formula_option(sub);
    sub->callback([&] {
      action = [&] {
        const auto a = abstract_operators(formula_arg(formula));
        std::string text = render(a.formula) + "\n";
        json keys = json::array();
        for (const auto& [key, sym] : a.key_table) {
          const std::string body = render(Formula::op(key.tag, key.body));
          text += sym.name() + " = " + body + "\n";
          keys.push_back({{"predicate", sym.name()}, {"key", body}});
        }
        text += std::string("propositional tautology: ") + (taut_check(a) ? "yes" : "no") + "\n";
        runner.emit(text, {{"command", "abstract"}, {"formula", render(a.formula)}, {"keys", keys},
                           {"tautology", taut_check(a)}});
        return kOk;
      };
    });
  }
  {
    auto* sub = app.add_subcommand("prove", "Bounded validity check");
    auto* b = budget_option(sub);
    formula_option(sub);
    sub->callback([&, b] {
      action = [&, b] {
        const auto r = prove_bounded(formula_arg(formula), budget_from(budget_n, b->count() > 0));
        json j = report_json(r);
        j["command"] = "prove";
        runner.emit(render_report(r), j);
        return status_exit(r.status);
      };
    });
  }
  {
    auto* sub = app.add_subcommand("entails", "Whether a theory entails a sentence");
    sub->add_option("--theory", theory_path, "Theory presentation file")->required();
    auto* b = budget_option(sub);
    formula_option(sub);
    sub->callback([&, b] {
      action = [&, b] {
        const Budget budget = budget_from(budget_n, b->count() > 0);
        const auto premises = theory_premises(theory_path, budget);
        const auto r = entails(premises, formula_arg(formula), budget);
        json j = report_json(r);
        j["command"] = "entails";
        j["premises"] = premises.size();
        runner.emit(render_report(r), j);
        return status_exit(r.status);
      };
    });
  }
  {
    auto* sub = app.add_subcommand("upward", "Compare T |= phi with T+ |= phi+");
    sub->add_option("--x", x_spec, "Stratifier")->required();
    sub->add_option("--theory", theory_path, "Theory presentation file (default: empty)");
    auto* b = budget_option(sub);
    formula_option(sub);
    sub->callback([&, b] {
      action = [&, b] {
        const Budget budget = budget_from(budget_n, b->count() > 0);
        std::vector<Formula> premises;
        if (!theory_path.empty()) premises = theory_premises(theory_path, budget);
        const auto r = upward_check(premises, formula_arg(formula), parse_spec(x_spec), budget);
        const std::string text = "plain:\n" + render_report(r.plain) + "stratified:\n" + render_report(r.stratified) +
                                 (r.violation ? "VIOLATION: statuses disagree\n" : "consistent\n");
        runner.emit(text, {{"command", "upward"},
                           {"plain", report_json(r.plain)},
                           {"stratified", report_json(r.stratified)},
                           {"violation", r.violation}});
        if (r.violation) return kViolation;
        if (r.plain.status == ProofStatus::kUnknown || r.stratified.status == ProofStatus::kUnknown) return kUnknown;
        return kOk;
      };
    });
  }
  {
    auto* sub = app.add_subcommand("eval", "Evaluate in a structure file");
    sub->add_option("--model", model_path, "Structure file")->required();
    sub->add_option("--assign", assign_text, "Assignment x:1,y:2");
    formula_option(sub);
    sub->callback([&] {
      action = [&] {
        const FiniteStructure m = parse_structure(read_file(model_path));
        EvalAssignment s;
        if (!assign_text.empty())
          for (const auto& [v, a] : assignment_arg(assign_text)) {
            if (a >= m.size()) throw UsageError("value " + std::to_string(a) + " is outside the universe");
            s[v] = a;
          }
        const bool value = eval(m, formula_arg(formula), s);
        runner.emit(value ? "true" : "false", {{"command", "eval"}, {"value", value}});
        return value ? kOk : kViolation;
      };
    });
  }
  {
    auto* sub = app.add_subcommand("countermodel", "Search finite structures falsifying a formula");
    sub->add_option("--max-universe", max_universe, "Largest universe size tried");
    auto* b = sub->add_option("--budget", budget_n, "Oracle branching nodes per structure");
    formula_option(sub);
    sub->callback([&, b] {
      action = [&, b] {
        SearchOptions o;
        o.max_universe = max_universe;
        if (b->count() > 0) o.node_budget = budget_n;
        const auto r = countermodel_search(formula_arg(formula), o);
        if (!r.found) {
          runner.emit(std::string("no countermodel found") + (r.budget_hit ? " (node budget hit)" : ""),
                      {{"command", "countermodel"}, {"found", false}, {"nodes", r.nodes}, {"budget_hit", r.budget_hit}});
          return kUnknown;
        }
        json assignment = json::object();
        std::string text = "assignment:";
        for (const auto& [v, a] : r.found->assignment) {
          assignment[v.name()] = a;
          text += " " + v.name() + "=" + std::to_string(a);
        }
        if (r.found->assignment.empty()) text += " (none)";
        text += "\n" + render_structure(r.found->structure);
        runner.emit(text, {{"command", "countermodel"},
                           {"found", true},
                           {"nodes", r.nodes},
                           {"assignment", assignment},
                           {"structure", render_structure(r.found->structure)}});
        return kViolation;
      };
    });
  }
  {
    auto* sub = app.add_subcommand("e2-demo", "Desk check that E2 is not upgeneric");
    auto* b = budget_option(sub);
    sub->callback([&, b] {
      action = [&, b] {
        const auto r = check_e2_counterexample(budget_from(budget_n, b->count() > 0));
        json queries = json::array();
        for (const auto& q : r.queries)
          queries.push_back({{"query", render(q.query)}, {"verdict", to_string(q.answer.verdict)}});
        runner.emit(render_e2_report(r), {{"command", "e2-demo"},
                                          {"theta_plus", render(r.theta_plus)},
                                          {"queries", queries},
                                          {"value", to_string(r.theta_plus_value)},
                                          {"e2prime_rejection", r.e2prime_rejection},
                                          {"conclusive", r.conclusive()},
                                          {"trace", r.trace}});
        return r.conclusive() ? kOk : kUnknown;
      };
    });
  }
  {
    auto* sub = app.add_subcommand("induction-walk", "Walk the main theorem's induction over a sampled T+");
    sub->add_option("--alpha-max", alpha_text, "Largest grid level")->required();
    sub->add_option("--theory", theory_path, "T0 presentation (default: sentence 0=0, E3, k-closure 2)");
    auto* b = budget_option(sub);
    sub->callback([&, b] {
      action = [&, b] {
        const TheoryPresentation t0 = theory_path.empty()
                                          ? parse_theory("sentence: 0=0\nschema: E3\nk-closure: 2\n")
                                          : parse_theory(read_file(theory_path));
        const auto r = truth_induction_walk(t0, parse_ordinal(alpha_text), budget_from(budget_n, b->count() > 0));
        json levels = json::array();
        for (const auto& l : r.levels)
          levels.push_back({{"alpha", to_string(l.alpha)},
                            {"members", l.members},
                            {"cases", l.cases},
                            {"unknown", l.unknown},
                            {"violations", l.violations}});
        json violations = json::array();
        for (const auto& v : r.violations)
          violations.push_back({{"level", to_string(v.level)},
                                {"case", static_cast<int>(v.which)},
                                {"sigma", render(v.sigma)},
                                {"note", v.note}});
        runner.emit(render_walk_report(r), {{"command", "induction-walk"},
                                            {"levels", levels},
                                            {"cases", r.cases},
                                            {"unknown", r.unknown},
                                            {"violations", violations}});
        return r.ok() ? kOk : kViolation;
      };
    });
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "stratum: " << e.what() << "\n";
    return kUsage;
  }
  try {
    return action();
  } catch (const UsageError& e) {
    err << "stratum: " << e.what() << "\n";
  } catch (const ParseError& e) {
    err << "stratum: parse error: " << e.what() << "\n";
  } catch (const CaptureError& e) {
    err << "stratum: " << e.what() << "\n";
  } catch (const PreconditionError& e) {
    err << "stratum: " << e.what() << "\n";
  }
  return kUsage;
}

}  // namespace stratum::cli
