#pragma once

#include <string>

#include "f2lp/formula.hpp"

namespace f2lp {

namespace detail {

// 5 quantifier/unary/atom, 4 and, 3 or, 2 arrow.
inline int formula_precedence(const Formula& f) {
  switch (f.op()) {
    case Op::And:
      return 4;
    case Op::Or:
      return 3;
    case Op::Implies:
      return f.is_negation() ? 5 : 2;
    default:
      return 5;
  }
}

inline std::string print_atom(const Formula& f) {
  if (f.is_comparison_atom())
    return to_string(f.arguments()[0]) + f.predicate() + to_string(f.arguments()[1]);
  std::string name = f.predicate();
  if (is_strong_negation(name)) name = "-" + name.substr(1);
  if (f.arguments().empty()) return name;
  std::string s = name + "(";
  for (std::size_t i = 0; i < f.arguments().size(); ++i) {
    if (i) s += ",";
    s += to_string(f.arguments()[i]);
  }
  return s + ")";
}

inline std::string print_formula(const Formula& f);

inline std::string wrap(const Formula& f, bool parens) {
  return parens ? "(" + print_formula(f) + ")" : print_formula(f);
}

inline std::string print_formula(const Formula& f) {
  switch (f.op()) {
    case Op::Bottom:
      return "false";
    case Op::Atom:
      return print_atom(f);
    case Op::And:
      return wrap(f.left(), formula_precedence(f.left()) < 4) + " & " +
             wrap(f.right(), formula_precedence(f.right()) <= 4);
    case Op::Or:
      return wrap(f.left(), formula_precedence(f.left()) < 3) + " | " +
             wrap(f.right(), formula_precedence(f.right()) <= 3);
    case Op::Implies:
      if (f.is_top()) return "true";
      if (f.is_negation()) {
        const Formula& g = f.negated();
        if (g.is_atom() && g.predicate() == "=")
          return to_string(g.arguments()[0]) + "!=" + to_string(g.arguments()[1]);
        return "not " + wrap(g, formula_precedence(g) < 5 || g.is_comparison_atom());
      }
      return wrap(f.left(), formula_precedence(f.left()) <= 2) + " -> " +
             wrap(f.right(), formula_precedence(f.right()) <= 2);
    case Op::Forall:
    case Op::Exists: {
      const char mark = f.op() == Op::Forall ? '!' : '?';
      std::string vars = f.variable().name();
      const Formula* body = &f.body();
      while (body->op() == f.op()) {
        vars += "," + body->variable().name();
        body = &body->body();
      }
      return std::string(1, mark) + "[" + vars + "]:" +
             wrap(*body, formula_precedence(*body) < 5 || body->is_comparison_atom());
    }
  }
  return "";
}

}  // namespace detail

inline std::string to_string(const Formula& f) { return detail::print_formula(f); }

// Rule-style rendering: "head <- body" for an implication, the formula otherwise.
inline std::string to_rule_string(const Formula& f) {
  if (f.is_implication() && !f.is_negation())
    return detail::wrap(f.right(), detail::formula_precedence(f.right()) <= 2) + " <- " +
           detail::wrap(f.left(), detail::formula_precedence(f.left()) <= 2);
  return to_string(f);
}

}  // namespace f2lp
