#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "f2lp/error.hpp"
#include "f2lp/formula.hpp"
#include "f2lp/printer.hpp"
#include "f2lp/program.hpp"
#include "f2lp/substitution.hpp"

namespace f2lp {

enum class Dialect { Gringo, Lparse };

// Directive: pass "#domain" through; Inline: add domain atoms to every rule body.
enum class DomainMode { Directive, Inline };

struct EmitOptions {
  Dialect dialect = Dialect::Gringo;
  DomainMode domain_mode = DomainMode::Directive;
};

inline Dialect parse_dialect(const std::string& name) {
  if (name == "gringo") return Dialect::Gringo;
  if (name == "lparse") return Dialect::Lparse;
  throw EmitError("unknown dialect '" + name + "'");
}

inline DomainMode parse_domain_mode(const std::string& name) {
  if (name == "directive") return DomainMode::Directive;
  if (name == "inline") return DomainMode::Inline;
  throw EmitError("unknown domain mode '" + name + "'");
}

namespace detail {

inline std::string print_literal(const Literal& l) {
  switch (l.kind) {
    case LiteralKind::Positive:
      return to_string(l.atom);
    case LiteralKind::Negative:
      return "not " + to_string(l.atom);
    case LiteralKind::DoubleNegative:
      return "not not " + to_string(l.atom);
  }
  return "";
}

inline const Formula& literal_atom(const Literal& l) { return l.atom.is_atom() ? l.atom : l.atom.negated(); }

inline bool binds_variables(const Literal& l) {
  return l.kind == LiteralKind::Positive && l.atom.is_atom() && !l.atom.is_comparison_atom();
}

inline void collect_atom_variables(const Formula& a, std::vector<Term>& out) {
  for (const auto& t : a.arguments()) t.collect_variables(out);
}

inline std::size_t max_aux_index(const Program& p) {
  std::size_t best = 0;
  auto scan = [&](const Formula& a) {
    const std::string& name = a.predicate();
    if (name.rfind(kAuxPrefix, 0) != 0) return;
    const std::string rest = name.substr(kAuxPrefix.size());
    if (rest.empty() || !std::all_of(rest.begin(), rest.end(), [](char c) { return c >= '0' && c <= '9'; }))
      return;
    best = std::max(best, static_cast<std::size_t>(std::stoull(rest)));
  };
  for (const auto& s : p.statements) {
    if (s.kind != ProgramStatementKind::Rule) continue;
    for (const auto& h : s.rule.head) scan(h);
    for (const auto& l : s.rule.body) scan(literal_atom(l));
  }
  return best;
}

class Emitter {
 public:
  Emitter(const Program& p, EmitOptions options)
      : program_(p), options_(options), domains_(p.domains()), aux_counter_(max_aux_index(p)) {}

  std::string run() {
    std::string out;
    for (const auto& s : program_.statements)
      if (s.kind == ProgramStatementKind::Directive && s.directive.kind == DirectiveKind::Const)
        out += s.directive.text + "\n";
    for (const auto& s : program_.statements) {
      switch (s.kind) {
        case ProgramStatementKind::Directive:
          if (s.directive.kind == DirectiveKind::Const) break;
          if (s.directive.kind == DirectiveKind::Domain && options_.domain_mode == DomainMode::Inline) break;
          out += s.directive.text + "\n";
          break;
        case ProgramStatementKind::Native:
          out += s.text + "\n";
          native_.insert(s.text);
          note_native(s.text);
          break;
        case ProgramStatementKind::Rule:
          out += rule(s.rule);
          break;
      }
    }
    for (const auto& [name, arity] : strong_) {
      std::string args;
      for (std::size_t i = 1; i <= arity; ++i) args += (i > 1 ? "," : "") + std::string("_X") + std::to_string(i);
      const std::string suffix = arity ? "(" + args + ")" : "";
      const std::string line = ":- " + name + suffix + ", -" + name + suffix + ".";
      if (!native_.count(line)) out += line + "\n";
    }
    return out;
  }

 private:
  void note_atom(const Formula& a) {
    if (a.is_atom() && is_strong_negation(a.predicate()))
      strong_.insert({positive_form(a.predicate()), a.arguments().size()});
  }

  void note_native(const std::string& text) {
    Signature sig = program_.signature;
    try {
      const Rule r = parse_native_rule(text, sig);
      for (const auto& h : r.head) note_atom(h);
      for (const auto& l : r.body) note_atom(literal_atom(l));
    } catch (const Error&) {
    }
  }

  std::string rule(Rule r) {
    for (const auto& range : r.ranges) {
      const Binding b{{range.variable.name(), Term::constant(to_string(range.lower) + ".." + to_string(range.upper))}};
      for (auto& h : r.head) h = substitute(h, b);
      for (auto& l : r.body) l.atom = substitute(l.atom, b);
    }
    r.ranges.clear();
    std::string extra;
    if (options_.dialect == Dialect::Lparse) {
      std::vector<Literal> body;
      for (const auto& l : r.body) {
        if (l.kind != LiteralKind::DoubleNegative) {
          body.push_back(l);
          continue;
        }
        Rule aux;
        aux.body.push_back({LiteralKind::Negative, l.atom});
        std::vector<Term> vars;
        collect_atom_variables(literal_atom(l), vars);
        for (const auto& m : r.body)
          if (m.kind == LiteralKind::Positive) {
            aux.body.push_back(m);
            collect_atom_variables(literal_atom(m), vars);
          }
        const Formula head = Formula::atom(kAuxPrefix + std::to_string(++aux_counter_), vars);
        aux.head.push_back(head);
        extra += print(aux);
        body.push_back({LiteralKind::Negative, head});
      }
      r.body = std::move(body);
    }
    return print(r) + extra;
  }

  std::string print(Rule r) {
    for (const auto& h : r.head) note_atom(h);
    for (const auto& l : r.body) note_atom(literal_atom(l));
    cover(r);
    std::string head;
    for (std::size_t i = 0; i < r.head.size(); ++i) head += (i ? " | " : "") + to_string(r.head[i]);
    if (r.choice) head = "{" + head + "}";
    std::string body;
    for (std::size_t i = 0; i < r.body.size(); ++i) body += (i ? ", " : "") + print_literal(r.body[i]);
    if (head.empty() && body.empty()) return ":- 1=1.\n";
    if (body.empty()) return head + ".\n";
    if (head.empty()) return ":- " + body + ".\n";
    return head + " :- " + body + ".\n";
  }

  void cover(Rule& r) {
    std::set<std::string> bound;
    for (const auto& l : r.body)
      if (binds_variables(l)) {
        std::vector<Term> vars;
        collect_atom_variables(l.atom, vars);
        for (const auto& v : vars) bound.insert(v.name());
      }
    std::vector<Literal> added;
    for (const auto& v : rule_variables(r)) {
      auto it = domains_.find(v.name());
      if (it != domains_.end()) {
        if (options_.domain_mode == DomainMode::Inline)
          for (const auto& d : it->second) added.push_back({LiteralKind::Positive, Formula::atom(d, {v})});
        continue;
      }
      if (bound.count(v.name())) continue;
      if (v.name().front() == '_' && v.sort() != kDefaultSort) {
        added.push_back({LiteralKind::Positive, Formula::atom(v.sort(), {v})});
        continue;
      }
      std::string text;
      for (const auto& h : r.head) text += to_string(h) + " ";
      throw EmitError("variable " + v.name() + " is not covered by a domain declaration in rule with head '" +
                      text + "'");
    }
    r.body.insert(r.body.end(), added.begin(), added.end());
  }

  const Program& program_;
  EmitOptions options_;
  std::map<std::string, std::vector<std::string>> domains_;
  std::size_t aux_counter_;
  std::set<std::pair<std::string, std::size_t>> strong_;
  std::set<std::string> native_;
};

}  // namespace detail

// Renders a program as grounder input text; "#const" lines come first.
inline std::string emit(const Program& p, EmitOptions options = {}) {
  return detail::Emitter(p, options).run();
}

}  // namespace f2lp
