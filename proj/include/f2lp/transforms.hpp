#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "f2lp/error.hpp"
#include "f2lp/formula.hpp"
#include "f2lp/polarity.hpp"
#include "f2lp/printer.hpp"
#include "f2lp/substitution.hpp"

namespace f2lp {

namespace detail {

inline void require_quantifier_free(const Formula& f, const char* what) {
  if (has_quantifier(f)) throw TransformError(std::string(what) + " requires a quantifier-free formula");
}

inline Formula nnf_rec(const Formula& f);

// NNF of ¬f.
inline Formula nnf_negate(const Formula& f) {
  if (f.is_top()) return Formula::bottom();
  switch (f.op()) {
    case Op::Bottom:
      return Formula::top();
    case Op::Atom:
      return Formula::negation(f);
    case Op::And:
      return Formula::disjunction(nnf_negate(f.left()), nnf_negate(f.right()));
    case Op::Or:
      return Formula::conjunction(nnf_negate(f.left()), nnf_negate(f.right()));
    case Op::Implies: {
      if (f.is_negation()) {
        const Formula& g = f.negated();
        if (g.is_atom()) return Formula::negation(f);
        if (g.is_negation()) return nnf_negate(g.negated());
        if (g.is_bottom()) return Formula::bottom();
        if (g.is_top()) return Formula::top();
        return nnf_negate(nnf_rec(f));
      }
      return Formula::conjunction(nnf_negate(nnf_negate(f.left())), nnf_negate(f.right()));
    }
    case Op::Forall:
    case Op::Exists:
      break;
  }
  throw TransformError("nnf requires a quantifier-free formula");
}

inline Formula nnf_rec(const Formula& f) {
  if (f.is_top()) return f;
  switch (f.op()) {
    case Op::Bottom:
    case Op::Atom:
      return f;
    case Op::And:
    case Op::Or:
      return f.with_children({nnf_rec(f.left()), nnf_rec(f.right())});
    case Op::Implies:
      if (f.is_negation()) return nnf_negate(f.negated());
      return Formula::implication(nnf_rec(f.left()), nnf_rec(f.right()));
    case Op::Forall:
    case Op::Exists:
      break;
  }
  throw TransformError("nnf requires a quantifier-free formula");
}

}  // namespace detail

// Pushes negation to atoms; ¬¬atom is kept as a literal form.
inline Formula nnf(const Formula& f) {
  detail::require_quantifier_free(f, "nnf");
  return detail::nnf_rec(f);
}

// body → head; elements are atoms, ¬atoms, or (before rulification finishes) compound.
struct FlatRule {
  std::vector<Formula> body;
  std::vector<Formula> head;
  friend bool operator==(const FlatRule&, const FlatRule&) = default;
};

inline Formula to_formula(const FlatRule& r) {
  Formula head = Formula::disjunction(r.head);
  if (r.body.empty()) return head;
  return Formula::implication(Formula::conjunction(r.body), head);
}

inline std::string to_string(const FlatRule& r) {
  std::string s = r.head.empty() ? "false" : "";
  for (std::size_t i = 0; i < r.head.size(); ++i) s += (i ? " | " : "") + to_string(r.head[i]);
  if (!r.body.empty()) {
    s += " <- ";
    for (std::size_t i = 0; i < r.body.size(); ++i) s += (i ? " & " : "") + to_string(r.body[i]);
  }
  return s + ".";
}

struct RulifyOptions {
  std::size_t max_rules = 100000;
};

namespace detail {

inline bool is_final_element(const Formula& e) {
  return e.is_atom() || (e.is_negation() && e.negated().is_atom());
}

inline void append_unique(std::vector<Formula>& out, const Formula& e) {
  for (const auto& x : out)
    if (x == e) return;
  out.push_back(e);
}

class Rulifier {
 public:
  explicit Rulifier(RulifyOptions options) : options_(options) {}

  void run(FlatRule r) {
    for (auto& e : r.body) e = nnf_rec(e);
    for (auto& e : r.head) e = nnf_rec(e);
    step(std::move(r));
  }

  std::vector<FlatRule> take() { return std::move(out_); }

 private:
  void emit(const FlatRule& r) {
    FlatRule clean;
    for (const auto& e : r.body) append_unique(clean.body, e);
    for (const auto& e : r.head) append_unique(clean.head, e);
    for (const auto& x : out_)
      if (x == clean) return;
    if (out_.size() >= options_.max_rules)
      throw TransformError("rulification exceeds " + std::to_string(options_.max_rules) + " rules");
    out_.push_back(std::move(clean));
  }

  static FlatRule with_body(const FlatRule& r, std::size_t i, std::vector<Formula> replacement) {
    FlatRule out;
    out.body.insert(out.body.end(), r.body.begin(), r.body.begin() + static_cast<long>(i));
    for (auto& e : replacement) out.body.push_back(nnf_rec(e));
    out.body.insert(out.body.end(), r.body.begin() + static_cast<long>(i) + 1, r.body.end());
    out.head = r.head;
    return out;
  }

  static FlatRule with_head(const FlatRule& r, std::size_t i, std::vector<Formula> replacement) {
    FlatRule out;
    out.body = r.body;
    out.head.insert(out.head.end(), r.head.begin(), r.head.begin() + static_cast<long>(i));
    for (auto& e : replacement) out.head.push_back(nnf_rec(e));
    out.head.insert(out.head.end(), r.head.begin() + static_cast<long>(i) + 1, r.head.end());
    return out;
  }

  static void prepend(std::vector<Formula>& v, const Formula& e) { v.insert(v.begin(), nnf_rec(e)); }

  void step(const FlatRule& r) {
    for (std::size_t i = 0; i < r.body.size(); ++i) {
      const Formula& e = r.body[i];
      if (is_final_element(e)) continue;
      if (e.is_top()) return step(with_body(r, i, {}));
      if (e.is_bottom()) return;
      if (e.is_double_negation()) {
        FlatRule next = with_body(r, i, {});
        prepend(next.head, e.negated());
        return step(next);
      }
      if (e.is_and()) return step(with_body(r, i, {e.left(), e.right()}));
      if (e.is_or()) {
        step(with_body(r, i, {e.left()}));
        step(with_body(r, i, {e.right()}));
        return;
      }
      if (e.is_implication()) {
        const Formula& f = e.left();
        const Formula& g = e.right();
        step(with_body(r, i, {Formula::negation(f)}));
        step(with_body(r, i, {g}));
        FlatRule third = with_body(r, i, {});
        prepend(third.head, Formula::negation(g));
        prepend(third.head, f);
        step(third);
        return;
      }
      throw TransformError("rulify requires a quantifier-free formula");
    }
    for (std::size_t i = 0; i < r.head.size(); ++i) {
      const Formula& e = r.head[i];
      if (is_final_element(e)) continue;
      if (e.is_bottom()) return step(with_head(r, i, {}));
      if (e.is_top()) return;
      if (e.is_double_negation()) {
        FlatRule next = with_head(r, i, {});
        prepend(next.body, e.negated());
        return step(next);
      }
      if (e.is_or()) return step(with_head(r, i, {e.left(), e.right()}));
      if (e.is_and()) {
        step(with_head(r, i, {e.left()}));
        step(with_head(r, i, {e.right()}));
        return;
      }
      if (e.is_implication()) {
        const Formula& g = e.left();
        const Formula& h = e.right();
        FlatRule first = with_head(r, i, {h});
        prepend(first.body, g);
        step(first);
        FlatRule second = with_head(r, i, {Formula::negation(g)});
        prepend(second.body, Formula::negation(h));
        step(second);
        return;
      }
      throw TransformError("rulify requires a quantifier-free formula");
    }
    emit(r);
  }

  RulifyOptions options_;
  std::vector<FlatRule> out_;
};

}  // namespace detail

// Exhaustive L1-L5/R1-R5 rewriting into rules with literal bodies and heads.
inline std::vector<FlatRule> rulify(const Formula& f, RulifyOptions options = {}) {
  detail::require_quantifier_free(f, "rulify");
  detail::Rulifier r(options);
  for (const auto& c : conjuncts(f)) {
    if (c.is_implication())
      r.run(FlatRule{{c.left()}, {c.right()}});
    else
      r.run(FlatRule{{}, {c}});
  }
  return r.take();
}

namespace detail {

inline Formula standardize_apart(const Formula& f, std::set<std::string>& used,
                                 const std::set<std::string>& avoid) {
  if (f.is_quantifier()) {
    Term var = f.variable();
    Formula body = f.body();
    if (used.count(var.name())) {
      std::set<std::string> all = avoid;
      all.insert(used.begin(), used.end());
      const Term fresh = Term::variable(fresh_variable_name(var.name(), all), var.sort());
      body = substitute(body, Binding{{var.name(), fresh}});
      var = fresh;
    }
    used.insert(var.name());
    body = standardize_apart(body, used, avoid);
    return f.op() == Op::Forall ? Formula::forall(var, body) : Formula::exists(var, body);
  }
  if (f.child_count() == 0) return f;
  std::vector<Formula> kids;
  for (std::size_t i = 0; i < f.child_count(); ++i) kids.push_back(standardize_apart(f.child(i), used, avoid));
  return f.with_children(std::move(kids));
}

struct Quantifier {
  Op op;
  Term variable;
};

inline Formula extract(const Formula& f, std::vector<Quantifier>& prefix) {
  switch (f.op()) {
    case Op::Bottom:
    case Op::Atom:
      return f;
    case Op::Forall:
    case Op::Exists:
      prefix.push_back({f.op(), f.variable()});
      return extract(f.body(), prefix);
    case Op::And:
    case Op::Or: {
      Formula l = extract(f.left(), prefix);
      Formula r = extract(f.right(), prefix);
      return f.with_children({l, r});
    }
    case Op::Implies: {
      std::vector<Quantifier> inner;
      Formula l = extract(f.left(), inner);
      for (auto& q : inner) q.op = q.op == Op::Forall ? Op::Exists : Op::Forall;
      prefix.insert(prefix.end(), inner.begin(), inner.end());
      Formula r = extract(f.right(), prefix);
      return Formula::implication(l, r);
    }
  }
  return f;
}

}  // namespace detail

// Prenex form by leftmost-outermost extraction after renaming bound variables apart.
inline Formula prenex(const Formula& f) {
  std::set<std::string> used;
  std::set<std::string> avoid = all_variable_names(f);
  for (const auto& v : free_variables(f)) used.insert(v.name());
  const Formula renamed = detail::standardize_apart(f, used, avoid);
  std::vector<detail::Quantifier> prefix;
  Formula matrix = detail::extract(renamed, prefix);
  for (auto it = prefix.rbegin(); it != prefix.rend(); ++it)
    matrix = it->op == Op::Forall ? Formula::forall(it->variable, matrix)
                                  : Formula::exists(it->variable, matrix);
  return matrix;
}

inline Formula insert_double_negation(const Formula& f, const Path& at, const PredicateSet& preds) {
  const Formula& g = subformula_at(f, at);
  if (!is_p_negated(f, at, preds))
    throw TransformError("occurrence at " + at.to_string() + " is not negated on the given predicates");
  return replace_at(f, at, Formula::negation(Formula::negation(g)));
}

}  // namespace f2lp
