#pragma once

#include <map>
#include <string>
#include <vector>

#include "f2lp/error.hpp"
#include "f2lp/formula.hpp"
#include "f2lp/polarity.hpp"
#include "f2lp/printer.hpp"
#include "f2lp/signature.hpp"

namespace f2lp {

// Negation applied to atoms only; no other implications.
inline bool is_nnf(const Formula& f) {
  switch (f.op()) {
    case Op::Bottom:
    case Op::Atom:
      return true;
    case Op::Implies:
      return f.is_top() || (f.is_negation() && f.negated().is_atom());
    case Op::And:
    case Op::Or:
      return is_nnf(f.left()) && is_nnf(f.right());
    case Op::Forall:
    case Op::Exists:
      return is_nnf(f.body());
  }
  return false;
}

namespace detail {

inline Formula double_negate_atoms(const Formula& f, const PredicateSet& preds) {
  if (f.is_atom())
    return preds.count(f.predicate()) ? Formula::negation(Formula::negation(f)) : f;
  if (f.child_count() == 0) return f;
  std::vector<Formula> kids;
  for (std::size_t i = 0; i < f.child_count(); ++i) kids.push_back(double_negate_atoms(f.child(i), preds));
  return f.with_children(std::move(kids));
}

inline Formula replace_negated(const Formula& f, const PredicateSet& preds, const Formula& choice) {
  if (f.is_negation() && f.negated().is_atom() && preds.count(f.negated().predicate()))
    return Formula::implication(f.negated(), choice);
  if (f.child_count() == 0) return f;
  std::vector<Formula> kids;
  for (std::size_t i = 0; i < f.child_count(); ++i) kids.push_back(replace_negated(f.child(i), preds, choice));
  return f.with_children(std::move(kids));
}

}  // namespace detail

// CIRC[f; preds] is equivalent to SM[result; preds]. Predicate arities come from the
// signature when declared there, otherwise from the occurrences in f.
inline Formula circ_to_sm(const Formula& f, const PredicateSet& preds, const Signature* sig = nullptr) {
  if (!is_nnf(f)) throw TransformError("input is not in negation normal form: " + to_string(f));
  std::map<std::string, std::vector<std::string>> sorts;
  for_each_occurrence(f, [&](const Formula& g, const Path&, int) {
    if (!g.is_atom() || !preds.count(g.predicate()) || sorts.count(g.predicate())) return;
    std::vector<std::string> s;
    for (const auto& a : g.arguments()) s.push_back(a.is_variable() ? a.sort() : kDefaultSort);
    sorts[g.predicate()] = s;
  });
  std::vector<Formula> choices;
  for (const auto& p : preds) {
    if (sig && sig->has_predicate(p)) choices.push_back(choice_formula(p, sig->predicate_sorts(p), "_C"));
    else if (sorts.count(p)) choices.push_back(choice_formula(p, sorts[p], "_C"));
  }
  const Formula choice = Formula::conjunction(choices);
  return Formula::conjunction(detail::double_negate_atoms(f, preds),
                              detail::replace_negated(f, preds, choice));
}

}  // namespace f2lp
