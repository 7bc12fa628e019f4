#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "f2lp/classes.hpp"
#include "f2lp/elim.hpp"
#include "f2lp/error.hpp"
#include "f2lp/formula.hpp"
#include "f2lp/polarity.hpp"
#include "f2lp/program.hpp"
#include "f2lp/signature.hpp"
#include "f2lp/transforms.hpp"
#include "f2lp/zhang.hpp"

#ifndef F2LP_CORPUS_DIR
#define F2LP_CORPUS_DIR "corpus"
#endif

namespace f2lp {

struct F2lpOptions {
  // Proceed on formulas that are not almost universal; the result may be unsound.
  bool force = false;
  RulifyOptions rulify;
};

struct Translation {
  Program program;
  std::vector<std::string> warnings;
};

namespace detail {

inline void append_rules(Program& out, const Formula& f, const RulifyOptions& options) {
  for (const auto& r : rulify(f, options)) out.add(head_normalize(r));
}

inline std::string describe_witnesses(const std::vector<Path>& paths) {
  std::string s;
  for (const auto& p : paths) s += (s.empty() ? "" : ", ") + p.to_string();
  return s;
}

// Steps 1 and 3 for one formula; aux names continue the shared counter.
inline void translate_formula(Program& out, const Formula& f, const PredicateSet& intensional, AuxNamer& namer,
                              const F2lpOptions& options, std::vector<std::string>& warnings) {
  ElimResult e = elim_quantifiers(f, intensional, namer, {options.force});
  if (!e.unsound_witnesses.empty())
    warnings.push_back("translation may be unsound: singular quantifiers not negated at " +
                       describe_witnesses(e.unsound_witnesses) + " in " + to_string(f));
  append_rules(out, e.core, options.rulify);
  for (const auto& d : e.aux_defs) append_rules(out, d, options.rulify);
  for (const auto& a : e.aux_preds) out.signature.declare_predicate(a.name, a.sorts);
}

// Step 2: choice rules for every predicate outside the intensional set.
inline void append_choices(Program& out, const std::set<std::string>& predicates, const PredicateSet& intensional,
                           const Signature& sig) {
  for (const auto& p : predicates) {
    if (intensional.count(p)) continue;
    std::vector<std::string> sorts;
    if (sig.has_predicate(p)) sorts = sig.predicate_sorts(p);
    std::vector<Term> vars;
    for (std::size_t i = 0; i < sorts.size(); ++i) vars.push_back(Term::variable("_X" + std::to_string(i + 1), sorts[i]));
    Rule r;
    r.head.push_back(Formula::atom(p, vars));
    r.choice = true;
    out.add(std::move(r));
  }
}

}  // namespace detail

// Translation F2LP of one formula; free variables are read as universally quantified.
inline Translation f2lp(const Formula& f, const PredicateSet& intensional,
                        const Signature& sig = Signature::open_signature(), F2lpOptions options = {}) {
  Signature known = sig;
  for_each_occurrence(f, [&](const Formula& g, const Path&, int) {
    if (!g.is_atom() || g.is_comparison_atom() || known.has_predicate(g.predicate())) return;
    known.declare_predicate(g.predicate(), std::vector<std::string>(g.arguments().size(), kDefaultSort));
  });
  Translation t;
  t.program.signature = sig;
  AuxNamer namer;
  detail::translate_formula(t.program, f, intensional, namer, options, t.warnings);
  detail::append_choices(t.program, predicates(f), intensional, known);
  return t;
}

struct TranslateOptions {
  // Unset: every predicate of the extended statements is intensional.
  std::optional<PredicateSet> intensional;
  F2lpOptions f2lp;
};

// Translates a parsed file statement by statement; native statements and directives pass
// through in place and comments are dropped.
inline Translation translate(const SourceProgram& src, const TranslateOptions& options = {}) {
  Translation t;
  t.program.signature = src.signature;
  std::set<std::string> preds;
  for (const auto& f : src.extended()) {
    auto p = predicates(f);
    preds.insert(p.begin(), p.end());
  }
  const PredicateSet intensional = options.intensional.value_or(preds);
  AuxNamer namer;
  for (const auto& s : src.statements) {
    switch (s.kind) {
      case StatementKind::Extended:
        try {
          detail::translate_formula(t.program, s.formula, intensional, namer, options.f2lp, t.warnings);
        } catch (const NotAlmostUniversal& e) {
          throw NotAlmostUniversal(e.witnesses(), "line " + std::to_string(s.line) + ": " + e.what());
        }
        break;
      case StatementKind::Native:
        t.program.add_native(s.text);
        break;
      case StatementKind::Directive:
        t.program.add_directive(s.directive);
        break;
      case StatementKind::Comment:
        break;
    }
  }
  detail::append_choices(t.program, preds, intensional, src.signature);
  return t;
}

inline Translation translate(std::string_view text, const TranslateOptions& options = {}) {
  return translate(parse_program(text), options);
}

// ---------------------------------------------------------------------------
// Event calculus

inline const std::string kInitiates = "initiates";
inline const std::string kTerminates = "terminates";
inline const std::string kReleases = "releases";
inline const std::string kHappens = "happens";

enum class EcSection { Sigma, Delta, Theta, Xi, XiDef };

class CanonicityViolation : public Error {
 public:
  CanonicityViolation(std::string section, CanonicityReport report)
      : Error(describe(section, report)), section_(std::move(section)), report_(std::move(report)) {}

  const std::string& section() const noexcept { return section_; }
  const CanonicityReport& report() const noexcept { return report_; }

 private:
  static std::string describe(const std::string& section, const CanonicityReport& r) {
    std::string s = section + " is not canonical:";
    for (const auto& w : r.witnesses)
      s += " " + w.predicate + " at " + w.path.to_string() + " (clause " + std::to_string(w.clause) + ")";
    return s;
  }
  std::string section_;
  CanonicityReport report_;
};

struct DefinitionalAxiom {
  Formula head;
  Formula body;
};

// ∀x(p(x) ↔ G) as parsed from "p(X) <-> G": (p(x) → G) ∧ (G → p(x)).
inline std::optional<DefinitionalAxiom> as_definitional(const Formula& f) {
  const Formula g = strip_universal_prefix(f);
  if (!g.is_and() || !g.left().is_implication() || g.left().is_negation()) return std::nullopt;
  const Formula& head = g.left().left();
  const Formula& body = g.left().right();
  if (!head.is_atom() || head.is_comparison_atom()) return std::nullopt;
  if (!(g.right() == Formula::implication(body, head))) return std::nullopt;
  std::set<std::string> seen;
  for (const auto& a : head.arguments())
    if (!a.is_variable() || !seen.insert(a.name()).second) return std::nullopt;
  return DefinitionalAxiom{head, body};
}

// Description (16) in the section-marker file format.
class EventCalculusDescription {
 public:
  struct Entry {
    std::optional<EcSection> section;
    SourceStatement statement;
  };

  static EventCalculusDescription parse(std::string_view text, Signature sig = Signature::open_signature()) {
    EventCalculusDescription d;
    d.source_ = parse_program(text, std::move(sig), {true, false});
    std::optional<EcSection> current;
    for (const auto& s : d.source_.statements) {
      if (s.kind == StatementKind::Comment) {
        const std::string marker = detail::trim(s.text);
        if (marker == "%sigma") current = EcSection::Sigma;
        else if (marker == "%delta") current = EcSection::Delta;
        else if (marker == "%theta") current = EcSection::Theta;
        else if (marker == "%xi") current = EcSection::Xi;
        else if (marker == "%xi-def") current = EcSection::XiDef;
        continue;
      }
      Entry e{std::nullopt, s};
      if (s.kind == StatementKind::Extended) {
        e.section = current.value_or(EcSection::Xi);
        if (*e.section == EcSection::Xi && as_definitional(s.formula)) e.section = EcSection::XiDef;
        if (*e.section == EcSection::XiDef && !as_definitional(s.formula))
          throw TransformError("line " + std::to_string(s.line) + ": malformed definitional axiom " +
                               to_string(s.formula));
      }
      d.entries_.push_back(std::move(e));
    }
    return d;
  }

  static EventCalculusDescription from(std::vector<Formula> sigma, std::vector<Formula> delta,
                                       std::vector<Formula> theta, std::vector<Formula> xi,
                                       Signature sig = Signature::open_signature()) {
    EventCalculusDescription d;
    d.source_.signature = std::move(sig);
    auto add = [&](const std::vector<Formula>& fs, EcSection section) {
      for (const auto& f : fs) {
        SourceStatement s;
        s.kind = StatementKind::Extended;
        s.formula = f;
        s.text = to_rule_string(f) + ".";
        EcSection sec = section;
        if (sec == EcSection::Xi && as_definitional(f)) sec = EcSection::XiDef;
        d.entries_.push_back({sec, std::move(s)});
      }
    };
    add(sigma, EcSection::Sigma);
    add(delta, EcSection::Delta);
    add(theta, EcSection::Theta);
    add(xi, EcSection::Xi);
    return d;
  }

  const std::vector<Entry>& entries() const noexcept { return entries_; }
  const Signature& signature() const noexcept { return source_.signature; }

  std::vector<Formula> section(EcSection which) const {
    std::vector<Formula> out;
    for (const auto& e : entries_)
      if (e.section == which) out.push_back(e.statement.formula);
    return out;
  }
  std::vector<Formula> sigma() const { return section(EcSection::Sigma); }
  std::vector<Formula> delta() const { return section(EcSection::Delta); }
  std::vector<Formula> theta() const { return section(EcSection::Theta); }
  // All of Ξ, definitional axioms included.
  std::vector<Formula> xi() const {
    std::vector<Formula> out;
    for (const auto& e : entries_)
      if (e.section == EcSection::Xi || e.section == EcSection::XiDef) out.push_back(e.statement.formula);
    return out;
  }

  // Ab_1..Ab_n: predicates occurring strictly positively in Θ.
  PredicateSet ab_predicates() const {
    PredicateSet out;
    for (const auto& f : theta())
      for_each_occurrence(f, [&](const Formula& g, const Path&, int depth) {
        if (depth == 0 && g.is_atom() && !g.is_comparison_atom()) out.insert(g.predicate());
      });
    return out;
  }

  PredicateSet defined_predicates() const {
    PredicateSet out;
    for (const auto& f : section(EcSection::XiDef)) out.insert(as_definitional(f)->head.predicate());
    return out;
  }

  // The minimized families of Definition 9: Initiates, Terminates, Releases, Happens, Ab_i.
  PredicateSet minimized_predicates() const {
    PredicateSet out{kInitiates, kTerminates, kReleases, kHappens};
    auto ab = ab_predicates();
    out.insert(ab.begin(), ab.end());
    return out;
  }

  // Σ, Δ and Θ must be canonical relative to their minimized predicates.
  void check_canonical() const {
    auto check = [](const std::vector<Formula>& fs, const PredicateSet& preds, const std::string& name) {
      if (fs.empty()) return;
      auto report = is_canonical(Formula::conjunction(fs), preds);
      if (!report.verdict) throw CanonicityViolation(name, std::move(report));
    };
    check(sigma(), {kInitiates, kTerminates, kReleases}, "sigma");
    check(delta(), {kHappens}, "delta");
    check(theta(), ab_predicates(), "theta");
  }

 private:
  SourceProgram source_;
  std::vector<Entry> entries_;
};

namespace detail {

// Prepends ¬¬ to strictly positive occurrences of preds.
inline Formula double_negate_strictly_positive(const Formula& f, const PredicateSet& preds) {
  if (f.is_atom()) return preds.count(f.predicate()) ? Formula::negation(Formula::negation(f)) : f;
  switch (f.op()) {
    case Op::And:
    case Op::Or:
      return f.with_children(
          {double_negate_strictly_positive(f.left(), preds), double_negate_strictly_positive(f.right(), preds)});
    case Op::Implies:
      return Formula::implication(f.left(), double_negate_strictly_positive(f.right(), preds));
    case Op::Forall:
    case Op::Exists:
      return f.with_children({double_negate_strictly_positive(f.body(), preds)});
    default:
      return f;
  }
}

}  // namespace detail

// Step 1 of EC2ASP on one axiom of Ξ.
inline Formula xi_prime(const Formula& f, const PredicateSet& minimized) {
  if (auto d = as_definitional(f))
    return Formula::implication(detail::double_negate_atoms(d->body, minimized), d->head);
  return detail::double_negate_strictly_positive(f, minimized);
}

// Translation EC2ASP: native statements and directives pass through in place.
inline Translation ec2asp(const EventCalculusDescription& d, F2lpOptions options = {}) {
  d.check_canonical();
  const PredicateSet minimized = d.minimized_predicates();
  PredicateSet intensional = minimized;
  for (const auto& p : d.defined_predicates()) intensional.insert(p);
  Translation t;
  t.program.signature = d.signature();
  AuxNamer namer;
  std::set<std::string> preds;
  for (const auto& e : d.entries()) {
    const SourceStatement& s = e.statement;
    switch (s.kind) {
      case StatementKind::Extended: {
        Formula f = s.formula;
        if (*e.section == EcSection::Xi || *e.section == EcSection::XiDef) f = xi_prime(f, minimized);
        auto p = predicates(s.formula);
        preds.insert(p.begin(), p.end());
        detail::translate_formula(t.program, f, intensional, namer, options, t.warnings);
        break;
      }
      case StatementKind::Native:
        t.program.add_native(s.text);
        break;
      case StatementKind::Directive:
        t.program.add_directive(s.directive);
        break;
      case StatementKind::Comment:
        break;
    }
  }
  detail::append_choices(t.program, preds, intensional, d.signature());
  return t;
}

// ---------------------------------------------------------------------------
// Corpus

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::string corpus_path(const std::string& name, const std::string& dir = F2LP_CORPUS_DIR) {
  return dir + "/" + name + ".f2lp";
}

inline std::string corpus_text(const std::string& name, const std::string& dir = F2LP_CORPUS_DIR) {
  return read_file(corpus_path(name, dir));
}

inline const std::vector<std::string>& corpus_names() {
  static const std::vector<std::string> names{"dec", "robby", "suitcase", "broken"};
  return names;
}

// DEC1-DEC12 and the two choice statements, translated.
inline Program dec_axioms(const std::string& dir = F2LP_CORPUS_DIR) {
  return translate(corpus_text("dec", dir)).program;
}

// ---------------------------------------------------------------------------
// Situation calculus

inline Program sit_domain(int maxdepth) {
  if (maxdepth < 0) throw TransformError("maxdepth must be nonnegative");
  Program p = translate(
                  "nesting(0,s0).\n"
                  "nesting(L+1,do(A,S)) <- nesting(L,S) & action(A) & L < maxdepth.\n"
                  "situation(S) <- nesting(L,S).\n"
                  "final(S) <- nesting(maxdepth,S).\n")
                  .program;
  Program out;
  out.signature = p.signature;
  out.add_directive({DirectiveKind::Const, "maxdepth", std::to_string(maxdepth),
                     "#const maxdepth=" + std::to_string(maxdepth) + "."});
  for (auto& s : p.statements) out.statements.push_back(std::move(s));
  return out;
}

inline Program executable_rules() {
  return translate(
             "executable(s0).\n"
             "executable(do(A,S)) <- executable(S) & poss(A,S) & not final(S) & situation(S) & action(A).\n")
      .program;
}

// Names used by the situation-calculus generators.
struct SituationVocabulary {
  std::string holds = "h";
  std::string poss = "poss";
  std::string do_function = "do";
  std::string initial = "s0";
  Term action = Term::variable("A");
  Term situation = Term::variable("S");

  Formula holds_at(const Term& fluent, const Term& s) const { return Formula::atom(holds, {fluent, s}); }
  Formula not_holds_at(const Term& fluent, const Term& s) const { return Formula::atom("~" + holds, {fluent, s}); }
  Term successor() const { return Term::function(do_function, {action, situation}); }
};

struct FluentEffects {
  // Fluent term R(x); its variables are x.
  Term fluent;
  std::vector<Formula> positive;
  std::vector<Formula> negative;
};

struct ActionPreconditions {
  // Action term A(x).
  Term action;
  std::vector<Formula> bodies;
};

// Effect axioms (27)-(28) and precondition axioms (29); bodies mention the vocabulary's
// action and situation variables.
struct EffectAxiomSet {
  SituationVocabulary vocabulary;
  std::vector<FluentEffects> fluents;
  std::vector<ActionPreconditions> actions;
};

struct SuccessorStateAxioms {
  std::vector<Formula> successor_state;
  std::vector<Formula> action_precondition;
  // ¬∃(Γ⁺ ∧ Γ⁻) per fluent.
  std::vector<Formula> provisos;
};

namespace detail {

inline std::set<std::string> variable_names(const std::vector<Term>& terms) {
  std::set<std::string> out;
  for (const auto& t : terms) t.collect_variable_names(out);
  return out;
}

// Disjunction of the bodies, each with its extra variables existentially closed.
inline Formula effect_disjunction(const std::vector<Formula>& bodies, const std::set<std::string>& keep) {
  std::vector<Formula> parts;
  for (const auto& b : bodies) {
    Formula g = b;
    auto free = free_variables(b);
    for (auto it = free.rbegin(); it != free.rend(); ++it)
      if (!keep.count(it->name())) g = Formula::exists(*it, g);
    parts.push_back(g);
  }
  return parts.empty() ? Formula::bottom() : Formula::disjunction(parts);
}

}  // namespace detail

// Successor state axioms Holds(R(x),do(a,s)) ↔ Γ⁺ ∨ (Holds(R(x),s) ∧ ¬Γ⁻), precondition
// axioms Poss(A(x),s) ↔ π, and the consistency provisos, all universally closed.
inline SuccessorStateAxioms derive_ssa(const EffectAxiomSet& e) {
  const auto& v = e.vocabulary;
  SuccessorStateAxioms out;
  for (const auto& f : e.fluents) {
    auto keep = detail::variable_names({f.fluent, v.action, v.situation});
    const Formula plus = detail::effect_disjunction(f.positive, keep);
    const Formula minus = detail::effect_disjunction(f.negative, keep);
    const Formula rhs =
        Formula::disjunction(plus, Formula::conjunction(v.holds_at(f.fluent, v.situation), Formula::negation(minus)));
    out.successor_state.push_back(universal_closure(Formula::equivalence(v.holds_at(f.fluent, v.successor()), rhs)));
    Formula both = Formula::conjunction(plus, minus);
    auto free = free_variables(both);
    for (auto it = free.rbegin(); it != free.rend(); ++it) both = Formula::exists(*it, both);
    out.provisos.push_back(Formula::negation(both));
  }
  for (const auto& a : e.actions) {
    auto keep = detail::variable_names({a.action, v.situation});
    const Formula pi = detail::effect_disjunction(a.bodies, keep);
    out.action_precondition.push_back(
        universal_closure(Formula::equivalence(Formula::atom(v.poss, {a.action, v.situation}), pi)));
  }
  return out;
}

// D_inertia (two implications per fluent) followed by D_exogenous0 (one disjunction per fluent).
inline std::vector<Formula> inertia_and_exogenous(const std::vector<Term>& fluents,
                                                  const SituationVocabulary& v = {}) {
  std::vector<Formula> out;
  const Term next = v.successor();
  for (const auto& r : fluents) {
    out.push_back(universal_closure(Formula::implication(
        Formula::conjunction(v.holds_at(r, v.situation), Formula::negation(v.not_holds_at(r, next))),
        v.holds_at(r, next))));
    out.push_back(universal_closure(Formula::implication(
        Formula::conjunction(v.not_holds_at(r, v.situation), Formula::negation(v.holds_at(r, next))),
        v.not_holds_at(r, next))));
  }
  const Term s0 = Term::constant(v.initial);
  for (const auto& r : fluents)
    out.push_back(universal_closure(Formula::disjunction(v.holds_at(r, s0), v.not_holds_at(r, s0))));
  return out;
}

}  // namespace f2lp
