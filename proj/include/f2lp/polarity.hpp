#pragma once

#include <set>
#include <string>

#include "f2lp/formula.hpp"

namespace f2lp {

using PredicateSet = std::set<std::string>;

struct Polarity {
  bool positive = true;
  bool strictly_positive = true;
};

// Number of implication antecedents on the way from the root to the occurrence.
inline int antecedent_depth(const Formula& f, const Path& at) {
  const Formula* cur = &f;
  int depth = 0;
  for (auto step : at.steps()) {
    if (step >= cur->child_count()) throw PathError("invalid path " + at.to_string());
    if (cur->is_implication() && step == 0) ++depth;
    cur = &cur->child(step);
  }
  return depth;
}

inline Polarity occurrence_polarity(const Formula& f, const Path& at) {
  const int depth = antecedent_depth(f, at);
  return {depth % 2 == 0, depth == 0};
}

inline bool is_negative_on(const Formula& f, const PredicateSet& preds) {
  bool negative = true;
  for_each_occurrence(f, [&](const Formula& g, const Path&, int depth) {
    if (depth == 0 && g.is_atom() && preds.count(g.predicate())) negative = false;
  });
  return negative;
}

// Some subformula containing the occurrence (itself included) is negative on preds.
inline bool is_p_negated(const Formula& f, const Path& at, const PredicateSet& preds) {
  subformula_at(f, at);
  const Formula* cur = &f;
  if (is_negative_on(*cur, preds)) return true;
  for (auto step : at.steps()) {
    cur = &cur->child(step);
    if (is_negative_on(*cur, preds)) return true;
  }
  return false;
}

}  // namespace f2lp
