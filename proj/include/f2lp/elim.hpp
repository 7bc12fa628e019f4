#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "f2lp/classes.hpp"
#include "f2lp/formula.hpp"
#include "f2lp/parser.hpp"
#include "f2lp/polarity.hpp"
#include "f2lp/substitution.hpp"

namespace f2lp {

struct AuxPredicate {
  std::string name;
  std::vector<std::string> sorts;
  friend bool operator==(const AuxPredicate&, const AuxPredicate&) = default;
};

struct ElimResult {
  Formula core;
  std::vector<Formula> aux_defs;
  std::vector<AuxPredicate> aux_preds;
  // Nonempty only under force: singular occurrences that are not negated.
  std::vector<Path> unsound_witnesses;

  Formula conjunction() const {
    std::vector<Formula> parts{core};
    parts.insert(parts.end(), aux_defs.begin(), aux_defs.end());
    return Formula::conjunction(parts);
  }
};

// Issues aux_1, aux_2, ... ; shared across the statements of one translation.
class AuxNamer {
 public:
  std::string next() { return kAuxPrefix + std::to_string(++counter_); }
  int count() const noexcept { return counter_; }

 private:
  int counter_ = 0;
};

struct ElimOptions {
  bool force = false;
};

namespace detail {

inline Formula wrap_positive_exists(const Formula& f) {
  switch (f.op()) {
    case Op::Exists:
      return Formula::negation(Formula::negation(f));
    case Op::Implies:
      return Formula::implication(f.left(), wrap_positive_exists(f.right()));
    case Op::And:
    case Op::Or:
    case Op::Forall:
      break;
    default:
      return f;
  }
  std::vector<Formula> kids;
  for (std::size_t i = 0; i < f.child_count(); ++i) kids.push_back(wrap_positive_exists(f.child(i)));
  return f.with_children(std::move(kids));
}

struct Occurrence {
  std::size_t item;
  Path path;
  int depth;
};

inline std::optional<Occurrence> first_quantifier(const std::vector<Formula>& items) {
  for (std::size_t k = 0; k < items.size(); ++k) {
    std::optional<Occurrence> found;
    for_each_occurrence(items[k], [&](const Formula& g, const Path& path, int depth) {
      if (!found && g.is_quantifier()) found = Occurrence{k, path, depth};
    });
    if (found) return found;
  }
  return std::nullopt;
}

// Does name occur in f outside the subformula at path?
inline bool used_outside(const Formula& f, const Path& at, const std::string& name) {
  bool used = false;
  for_each_occurrence(f, [&](const Formula& g, const Path& path, int) {
    if (used || at.is_prefix_of(path)) return;
    if (g.is_quantifier() && g.variable().name() == name) used = true;
    if (g.is_atom())
      for (const auto& a : g.arguments()) used = used || a.contains_variable(name);
  });
  return used;
}

// Free variables of the subformula at path, in first-occurrence order within f.
inline std::vector<Term> ordered_free_variables(const Formula& f, const Path& at) {
  const auto free = free_variables(subformula_at(f, at));
  std::vector<Term> ordered;
  for (const auto& v : free_variables(replace_at(f, at, Formula::atom("", free)))) {
    for (const auto& w : free)
      if (w.name() == v.name()) ordered.push_back(w);
  }
  return ordered;
}

}  // namespace detail

// Removes every quantifier: (a) strips non-singular ones, (b) names positive ∃ by a new
// predicate with a defining implication, (c) rewrites negative ∀ as ¬∃¬.
inline ElimResult elim_quantifiers(const Formula& f, const PredicateSet& preds, AuxNamer& namer,
                                   ElimOptions options = {}) {
  ElimResult result;
  auto au = is_almost_universal(f, preds);
  if (!au.verdict) {
    if (!options.force) throw NotAlmostUniversal(au.witnesses);
    result.unsound_witnesses = au.witnesses;
  }
  std::vector<Formula> items{detail::wrap_positive_exists(f)};
  while (auto occ = detail::first_quantifier(items)) {
    Formula& item = items[occ->item];
    const Formula q = subformula_at(item, occ->path);
    const bool positive = occ->depth % 2 == 0;
    const bool singular = q.op() == Op::Exists ? positive : !positive;
    const Term& y = q.variable();
    if (!singular) {
      Formula body = q.body();
      if (detail::used_outside(item, occ->path, y.name())) {
        const Term z = Term::variable(fresh_variable_name(y.name(), all_variable_names(item)), y.sort());
        body = substitute(body, Binding{{y.name(), z}});
      }
      item = replace_at(item, occ->path, body);
    } else if (q.op() == Op::Exists) {
      const auto xs = detail::ordered_free_variables(item, occ->path);
      AuxPredicate aux{namer.next(), {}};
      for (const auto& x : xs) aux.sorts.push_back(x.sort());
      const Formula name = Formula::atom(aux.name, xs);
      item = replace_at(item, occ->path, name);
      Formula def = Formula::implication(q.body(), name);
      result.aux_preds.push_back(std::move(aux));
      items.push_back(std::move(def));
    } else {
      const Formula rewritten =
          Formula::negation(Formula::exists(y, Formula::negation(q.body())));
      item = replace_at(item, occ->path, rewritten);
    }
  }
  result.core = items.front();
  result.aux_defs.assign(items.begin() + 1, items.end());
  return result;
}

inline ElimResult elim_quantifiers(const Formula& f, const PredicateSet& preds, ElimOptions options = {}) {
  AuxNamer namer;
  return elim_quantifiers(f, preds, namer, options);
}

}  // namespace f2lp
