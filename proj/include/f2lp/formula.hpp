#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "f2lp/error.hpp"
#include "f2lp/term.hpp"

namespace f2lp {

enum class Op : std::uint8_t { Bottom, Atom, And, Or, Implies, Forall, Exists };

inline bool is_comparison(const std::string& predicate) {
  return predicate == "=" || predicate == "<" || predicate == "<=" || predicate == ">" ||
         predicate == ">=";
}

inline bool is_strong_negation(const std::string& predicate) {
  return !predicate.empty() && predicate.front() == '~';
}

inline std::string positive_form(const std::string& predicate) {
  return is_strong_negation(predicate) ? predicate.substr(1) : predicate;
}

class Formula {
 public:
  Formula();

  static Formula bottom();
  static Formula top();
  static Formula atom(std::string predicate, std::vector<Term> args = {});
  static Formula comparison(std::string op, Term lhs, Term rhs);
  static Formula conjunction(Formula lhs, Formula rhs);
  static Formula disjunction(Formula lhs, Formula rhs);
  static Formula implication(Formula antecedent, Formula consequent);
  static Formula negation(Formula f) { return implication(std::move(f), bottom()); }
  static Formula equivalence(Formula lhs, Formula rhs);
  static Formula forall(Term variable, Formula body);
  static Formula exists(Term variable, Formula body);
  // Left-nested; empty conjunction is true, empty disjunction is false.
  static Formula conjunction(const std::vector<Formula>& parts);
  static Formula disjunction(const std::vector<Formula>& parts);

  Op op() const noexcept;
  bool is_bottom() const noexcept { return op() == Op::Bottom; }
  bool is_atom() const noexcept { return op() == Op::Atom; }
  bool is_and() const noexcept { return op() == Op::And; }
  bool is_or() const noexcept { return op() == Op::Or; }
  bool is_implication() const noexcept { return op() == Op::Implies; }
  bool is_quantifier() const noexcept { return op() == Op::Forall || op() == Op::Exists; }
  bool is_negation() const noexcept { return is_implication() && right().is_bottom(); }
  bool is_top() const noexcept { return is_negation() && left().is_bottom(); }
  bool is_double_negation() const noexcept { return is_negation() && left().is_negation(); }
  bool is_comparison_atom() const noexcept { return is_atom() && f2lp::is_comparison(predicate()); }
  // Atom or negated atom.
  bool is_literal() const noexcept { return is_atom() || (is_negation() && left().is_atom()); }

  const std::string& predicate() const noexcept;
  const std::vector<Term>& arguments() const noexcept;
  std::size_t child_count() const noexcept;
  const Formula& child(std::size_t i) const;
  const Formula& left() const noexcept;
  const Formula& right() const noexcept;
  const Formula& body() const noexcept { return left(); }
  const Term& variable() const noexcept;
  // Operand of a negation.
  const Formula& negated() const noexcept { return left(); }

  Formula with_children(std::vector<Formula> children) const;

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

  struct Node;

 private:
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Formula::Node {
  Op op = Op::Bottom;
  std::string predicate;
  std::vector<Term> args;
  Term variable;
  std::vector<Formula> children;
};

inline Formula::Formula() : node_(bottom().node_) {}

inline Formula Formula::bottom() {
  static const std::shared_ptr<const Node> shared = [] {
    auto n = std::make_shared<Node>();
    n->op = Op::Bottom;
    return std::shared_ptr<const Node>(n);
  }();
  return Formula(shared);
}

inline Formula Formula::top() { return implication(bottom(), bottom()); }

inline Formula Formula::atom(std::string predicate, std::vector<Term> args) {
  auto n = std::make_shared<Node>();
  n->op = Op::Atom;
  n->predicate = std::move(predicate);
  n->args = std::move(args);
  return Formula(std::move(n));
}

inline Formula Formula::comparison(std::string op, Term lhs, Term rhs) {
  if (op == "==") op = "=";
  if (op == "!=") return negation(atom("=", {std::move(lhs), std::move(rhs)}));
  return atom(std::move(op), {std::move(lhs), std::move(rhs)});
}

namespace detail {

inline std::shared_ptr<Formula::Node> make_node(Op op) {
  auto n = std::make_shared<Formula::Node>();
  n->op = op;
  return n;
}

}  // namespace detail

inline Formula Formula::conjunction(Formula lhs, Formula rhs) {
  auto n = detail::make_node(Op::And);
  n->children = {std::move(lhs), std::move(rhs)};
  return Formula(std::move(n));
}

inline Formula Formula::disjunction(Formula lhs, Formula rhs) {
  auto n = detail::make_node(Op::Or);
  n->children = {std::move(lhs), std::move(rhs)};
  return Formula(std::move(n));
}

inline Formula Formula::implication(Formula antecedent, Formula consequent) {
  auto n = detail::make_node(Op::Implies);
  n->children = {std::move(antecedent), std::move(consequent)};
  return Formula(std::move(n));
}

inline Formula Formula::equivalence(Formula lhs, Formula rhs) {
  return conjunction(implication(lhs, rhs), implication(rhs, lhs));
}

inline Formula Formula::forall(Term variable, Formula body) {
  auto n = detail::make_node(Op::Forall);
  n->variable = std::move(variable);
  n->children = {std::move(body)};
  return Formula(std::move(n));
}

inline Formula Formula::exists(Term variable, Formula body) {
  auto n = detail::make_node(Op::Exists);
  n->variable = std::move(variable);
  n->children = {std::move(body)};
  return Formula(std::move(n));
}

inline Formula Formula::conjunction(const std::vector<Formula>& parts) {
  if (parts.empty()) return top();
  Formula acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = conjunction(acc, parts[i]);
  return acc;
}

inline Formula Formula::disjunction(const std::vector<Formula>& parts) {
  if (parts.empty()) return bottom();
  Formula acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = disjunction(acc, parts[i]);
  return acc;
}

inline Op Formula::op() const noexcept { return node_->op; }
inline const std::string& Formula::predicate() const noexcept { return node_->predicate; }
inline const std::vector<Term>& Formula::arguments() const noexcept { return node_->args; }
inline std::size_t Formula::child_count() const noexcept { return node_->children.size(); }
inline const Formula& Formula::left() const noexcept { return node_->children[0]; }
inline const Formula& Formula::right() const noexcept { return node_->children[1]; }
inline const Term& Formula::variable() const noexcept { return node_->variable; }

inline const Formula& Formula::child(std::size_t i) const {
  if (i >= node_->children.size()) throw PathError("child index out of range");
  return node_->children[i];
}

inline Formula Formula::with_children(std::vector<Formula> children) const {
  if (children.size() != node_->children.size())
    throw PathError("child count mismatch");
  auto n = std::make_shared<Node>(*node_);
  n->children = std::move(children);
  return Formula(std::move(n));
}

inline bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.op == y.op && x.predicate == y.predicate && x.args == y.args &&
         x.variable == y.variable && x.children == y.children;
}

// Child selectors from the root; quantifier body is child 0.
class Path {
 public:
  Path() = default;
  explicit Path(std::vector<std::uint8_t> steps) : steps_(std::move(steps)) {}

  Path child(std::size_t i) const {
    Path p = *this;
    p.steps_.push_back(static_cast<std::uint8_t>(i));
    return p;
  }
  Path parent() const {
    Path p = *this;
    if (!p.steps_.empty()) p.steps_.pop_back();
    return p;
  }
  const std::vector<std::uint8_t>& steps() const noexcept { return steps_; }
  std::size_t size() const noexcept { return steps_.size(); }
  bool empty() const noexcept { return steps_.empty(); }
  bool is_prefix_of(const Path& other) const {
    return steps_.size() <= other.steps_.size() &&
           std::equal(steps_.begin(), steps_.end(), other.steps_.begin());
  }
  std::vector<int> to_vector() const { return {steps_.begin(), steps_.end()}; }
  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < steps_.size(); ++i) {
      if (i) s += ".";
      s += std::to_string(steps_[i]);
    }
    return s.empty() ? "root" : s;
  }

  friend bool operator==(const Path&, const Path&) = default;
  friend auto operator<=>(const Path&, const Path&) = default;

 private:
  std::vector<std::uint8_t> steps_;
};

inline const Formula& subformula_at(const Formula& f, const Path& path) {
  const Formula* cur = &f;
  for (auto step : path.steps()) {
    if (step >= cur->child_count())
      throw PathError("invalid path " + path.to_string());
    cur = &cur->child(step);
  }
  return *cur;
}

namespace detail {

inline Formula replace_at(const Formula& f, const std::vector<std::uint8_t>& steps, std::size_t i,
                          const Formula& replacement) {
  if (i == steps.size()) return replacement;
  if (steps[i] >= f.child_count()) throw PathError("invalid path");
  std::vector<Formula> kids;
  kids.reserve(f.child_count());
  for (std::size_t k = 0; k < f.child_count(); ++k)
    kids.push_back(k == steps[i] ? replace_at(f.child(k), steps, i + 1, replacement) : f.child(k));
  return f.with_children(std::move(kids));
}

template <class Fn>
void visit(const Formula& f, Path& path, int antecedents, Fn& fn) {
  fn(f, static_cast<const Path&>(path), antecedents);
  for (std::size_t i = 0; i < f.child_count(); ++i) {
    Path next = path.child(i);
    const int depth = antecedents + (f.is_implication() && i == 0 ? 1 : 0);
    visit(f.child(i), next, depth, fn);
  }
}

}  // namespace detail

inline Formula replace_at(const Formula& f, const Path& path, const Formula& replacement) {
  return detail::replace_at(f, path.steps(), 0, replacement);
}

// Preorder walk; fn(subformula, path, number of enclosing implication antecedents).
template <class Fn>
void for_each_occurrence(const Formula& f, Fn&& fn) {
  Path root;
  detail::visit(f, root, 0, fn);
}

inline std::size_t formula_size(const Formula& f) {
  std::size_t n = 1;
  for (std::size_t i = 0; i < f.child_count(); ++i) n += formula_size(f.child(i));
  return n;
}

inline bool has_quantifier(const Formula& f) {
  if (f.is_quantifier()) return true;
  for (std::size_t i = 0; i < f.child_count(); ++i)
    if (has_quantifier(f.child(i))) return true;
  return false;
}

// Non-comparison predicate names.
inline std::set<std::string> predicates(const Formula& f) {
  std::set<std::string> out;
  for_each_occurrence(f, [&](const Formula& g, const Path&, int) {
    if (g.is_atom() && !g.is_comparison_atom()) out.insert(g.predicate());
  });
  return out;
}

namespace detail {

inline void free_variables(const Formula& f, std::vector<std::string>& bound, std::vector<Term>& out) {
  if (f.is_atom()) {
    std::vector<Term> vars;
    for (const auto& a : f.arguments()) a.collect_variables(vars);
    for (const auto& v : vars) {
      if (std::find(bound.begin(), bound.end(), v.name()) != bound.end()) continue;
      bool seen = false;
      for (const auto& o : out) seen = seen || o.name() == v.name();
      if (!seen) out.push_back(v);
    }
    return;
  }
  if (f.is_quantifier()) {
    bound.push_back(f.variable().name());
    free_variables(f.body(), bound, out);
    bound.pop_back();
    return;
  }
  for (std::size_t i = 0; i < f.child_count(); ++i) free_variables(f.child(i), bound, out);
}

}  // namespace detail

// Free variables in preorder first-occurrence order.
inline std::vector<Term> free_variables(const Formula& f) {
  std::vector<std::string> bound;
  std::vector<Term> out;
  detail::free_variables(f, bound, out);
  return out;
}

inline std::set<std::string> all_variable_names(const Formula& f) {
  std::set<std::string> out;
  for_each_occurrence(f, [&](const Formula& g, const Path&, int) {
    if (g.is_atom())
      for (const auto& a : g.arguments()) a.collect_variable_names(out);
    if (g.is_quantifier()) out.insert(g.variable().name());
  });
  return out;
}

inline bool is_sentence(const Formula& f) { return free_variables(f).empty(); }

inline Formula universal_closure(const Formula& f) {
  auto vars = free_variables(f);
  Formula out = f;
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) out = Formula::forall(*it, out);
  return out;
}

inline Formula strip_universal_prefix(const Formula& f) {
  const Formula* cur = &f;
  while (cur->op() == Op::Forall) cur = &cur->body();
  return *cur;
}

// Top-level conjuncts, left to right.
inline std::vector<Formula> conjuncts(const Formula& f) {
  if (!f.is_and()) return {f};
  auto out = conjuncts(f.left());
  auto rhs = conjuncts(f.right());
  out.insert(out.end(), rhs.begin(), rhs.end());
  return out;
}

inline std::vector<Formula> disjuncts(const Formula& f) {
  if (!f.is_or()) return {f};
  auto out = disjuncts(f.left());
  auto rhs = disjuncts(f.right());
  out.insert(out.end(), rhs.begin(), rhs.end());
  return out;
}

// Choice(p) for one predicate given its argument sorts.
inline Formula choice_formula(const std::string& predicate, const std::vector<std::string>& sorts,
                              const std::string& prefix = "_X") {
  std::vector<Term> vars;
  for (std::size_t i = 0; i < sorts.size(); ++i)
    vars.push_back(Term::variable(prefix + std::to_string(i + 1), sorts[i]));
  Formula a = Formula::atom(predicate, vars);
  Formula body = Formula::disjunction(a, Formula::negation(a));
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = Formula::forall(*it, body);
  return body;
}

// False(p) for one predicate given its argument sorts.
inline Formula false_formula(const std::string& predicate, const std::vector<std::string>& sorts,
                             const std::string& prefix = "_X") {
  std::vector<Term> vars;
  for (std::size_t i = 0; i < sorts.size(); ++i)
    vars.push_back(Term::variable(prefix + std::to_string(i + 1), sorts[i]));
  Formula body = Formula::negation(Formula::atom(predicate, vars));
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = Formula::forall(*it, body);
  return body;
}

}  // namespace f2lp
