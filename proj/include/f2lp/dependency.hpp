#pragma once

#include <algorithm>
#include <functional>
#include <map>
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

class DependencyGraph {
 public:
  DependencyGraph() = default;
  explicit DependencyGraph(const PredicateSet& vertices) : vertices_(vertices) {}

  void add_edge(const std::string& from, const std::string& to) { edges_.insert({from, to}); }

  const PredicateSet& vertices() const noexcept { return vertices_; }
  const std::set<std::pair<std::string, std::string>>& edges() const noexcept { return edges_; }
  bool has_edge(const std::string& from, const std::string& to) const {
    return edges_.count({from, to}) != 0;
  }

  // Tarjan; components in reverse topological order, members sorted.
  std::vector<std::vector<std::string>> strongly_connected_components() const {
    std::map<std::string, std::vector<std::string>> adjacency;
    for (const auto& [a, b] : edges_) adjacency[a].push_back(b);
    std::map<std::string, int> index, low;
    std::set<std::string> on_stack;
    std::vector<std::string> stack;
    std::vector<std::vector<std::string>> out;
    int counter = 0;
    std::function<void(const std::string&)> connect = [&](const std::string& v) {
      index[v] = low[v] = counter++;
      stack.push_back(v);
      on_stack.insert(v);
      for (const auto& w : adjacency[v]) {
        if (!index.count(w)) {
          connect(w);
          low[v] = std::min(low[v], low[w]);
        } else if (on_stack.count(w)) {
          low[v] = std::min(low[v], index[w]);
        }
      }
      if (low[v] == index[v]) {
        std::vector<std::string> component;
        std::string w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack.erase(w);
          component.push_back(w);
        } while (w != v);
        std::sort(component.begin(), component.end());
        out.push_back(std::move(component));
      }
    };
    for (const auto& v : vertices_)
      if (!index.count(v)) connect(v);
    return out;
  }

  bool is_acyclic() const {
    for (const auto& [a, b] : edges_)
      if (a == b) return false;
    for (const auto& c : strongly_connected_components())
      if (c.size() > 1) return false;
    return true;
  }

 private:
  PredicateSet vertices_;
  std::set<std::pair<std::string, std::string>> edges_;
};

inline DependencyGraph dependency_graph(const Formula& f, const PredicateSet& preds) {
  DependencyGraph graph(preds);
  for_each_occurrence(f, [&](const Formula& rule, const Path&, int depth) {
    if (depth != 0 || !rule.is_implication()) return;
    const Formula& body = rule.left();
    const Formula& head = rule.right();
    PredicateSet heads;
    for_each_occurrence(head, [&](const Formula& g, const Path&, int d) {
      if (d == 0 && g.is_atom() && preds.count(g.predicate())) heads.insert(g.predicate());
    });
    if (heads.empty()) return;
    for_each_occurrence(body, [&](const Formula& g, const Path& path, int d) {
      if (d % 2 != 0 || !g.is_atom() || !preds.count(g.predicate())) return;
      if (is_p_negated(body, path, preds)) return;
      for (const auto& p : heads) graph.add_edge(p, g.predicate());
    });
  });
  return graph;
}

inline bool is_tight(const Formula& f, const PredicateSet& preds) {
  return dependency_graph(f, preds).is_acyclic();
}

namespace detail {

struct DefiningConjunct {
  Formula body;
  Formula head;
};

inline DefiningConjunct split_defining(const Formula& conjunct, const PredicateSet& preds) {
  const Formula core = strip_universal_prefix(conjunct);
  if (core.is_atom() && preds.count(core.predicate())) return {Formula::top(), core};
  if (core.is_implication() && core.right().is_atom() && preds.count(core.right().predicate()))
    return {core.left(), core};
  throw TransformError("conjunct '" + to_string(conjunct) +
                       "' is not an implication with an intensional atom as consequent");
}

}  // namespace detail

// One implication per intensional predicate: bodies merged by disjunction, head
// arguments replaced by distinct variables, other variables existentially bound.
inline Formula to_clark_normal_form(const Formula& f, const PredicateSet& preds) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<Term>> head_vars;
  std::map<std::string, std::vector<Formula>> bodies;
  std::map<std::string, std::vector<std::string>> arg_sorts;

  for_each_occurrence(f, [&](const Formula& g, const Path&, int) {
    if (g.is_atom() && preds.count(g.predicate()) && !arg_sorts.count(g.predicate())) {
      std::vector<std::string> sorts;
      for (const auto& a : g.arguments()) sorts.push_back(a.is_variable() ? a.sort() : kDefaultSort);
      arg_sorts[g.predicate()] = sorts;
    }
  });

  for (const auto& conjunct : conjuncts(f)) {
    if (conjunct.is_top()) continue;
    auto [raw_body, rule] = detail::split_defining(conjunct, preds);
    const Formula head = rule.is_atom() ? rule : rule.right();
    const std::string& p = head.predicate();
    if (!head_vars.count(p)) {
      order.push_back(p);
      std::vector<Term> vars;
      std::set<std::string> used;
      for (std::size_t i = 0; i < head.arguments().size(); ++i) {
        const Term& a = head.arguments()[i];
        if (a.is_variable() && !used.count(a.name())) {
          vars.push_back(a);
        } else {
          std::set<std::string> avoid = used;
          for (const auto& b : head.arguments()) b.collect_variable_names(avoid);
          vars.push_back(Term::variable(fresh_variable_name("V", avoid), kDefaultSort));
        }
        used.insert(vars.back().name());
      }
      head_vars[p] = vars;
    }
    const auto& vars = head_vars[p];
    if (vars.size() != head.arguments().size())
      throw TransformError("predicate '" + p + "' used with different arities");

    // Rename the conjunct's variables away from the head variables.
    Formula body = raw_body;
    std::vector<Term> args = head.arguments();
    std::set<std::string> head_names;
    for (const auto& v : vars) head_names.insert(v.name());
    std::set<std::string> avoid = head_names;
    for (const auto& v : free_variables(Formula::implication(body, head))) avoid.insert(v.name());
    Binding rename;
    for (const auto& v : free_variables(Formula::implication(body, head))) {
      if (!head_names.count(v.name())) continue;
      std::string fresh = fresh_variable_name(v.name(), avoid);
      avoid.insert(fresh);
      rename.emplace(v.name(), Term::variable(fresh, v.sort()));
    }
    // Positions whose argument is the matching head variable already need no renaming.
    for (std::size_t i = 0; i < args.size(); ++i)
      if (args[i].is_variable() && args[i].name() == vars[i].name()) rename.erase(args[i].name());
    if (!rename.empty()) {
      body = substitute(body, rename);
      for (auto& a : args) a = substitute(a, rename);
    }

    Binding to_head;
    std::vector<Formula> equalities;
    for (std::size_t i = 0; i < args.size(); ++i) {
      const Term& a = args[i];
      if (a.is_variable() && a.name() == vars[i].name()) continue;
      if (a.is_variable() && !head_names.count(a.name()) && !to_head.count(a.name())) {
        to_head.emplace(a.name(), vars[i]);
        continue;
      }
      equalities.push_back(Formula::comparison("=", vars[i], substitute(a, to_head)));
    }
    if (!to_head.empty()) body = substitute(body, to_head);
    std::vector<Formula> parts = equalities;
    if (!body.is_top()) parts.push_back(body);
    Formula merged = Formula::conjunction(parts);
    auto locals = free_variables(merged);
    for (auto it = locals.rbegin(); it != locals.rend(); ++it)
      if (!head_names.count(it->name())) merged = Formula::exists(*it, merged);
    bodies[p].push_back(merged);
  }

  for (const auto& p : preds) {
    if (head_vars.count(p) || !arg_sorts.count(p)) continue;
    order.push_back(p);
    std::vector<Term> vars;
    for (std::size_t i = 0; i < arg_sorts[p].size(); ++i)
      vars.push_back(Term::variable("_V" + std::to_string(i + 1), arg_sorts[p][i]));
    head_vars[p] = vars;
    bodies[p] = {};
  }

  std::vector<Formula> out;
  for (const auto& p : order) {
    Formula g = Formula::implication(Formula::disjunction(bodies[p]), Formula::atom(p, head_vars[p]));
    const auto& vars = head_vars[p];
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) g = Formula::forall(*it, g);
    out.push_back(g);
  }
  return Formula::conjunction(out);
}

// Replaces each ∀x(G→p(x)) by ∀x(p(x)↔G); non-tight input yields a warning.
inline Formula completion(const Formula& f, const PredicateSet& preds,
                          std::vector<std::string>* warnings = nullptr) {
  std::set<std::string> seen;
  std::vector<Formula> out;
  for (const auto& conjunct : conjuncts(f)) {
    std::vector<Term> prefix;
    const Formula* cur = &conjunct;
    while (cur->op() == Op::Forall) {
      prefix.push_back(cur->variable());
      cur = &cur->body();
    }
    const bool shaped = cur->is_implication() && cur->right().is_atom() &&
                        preds.count(cur->right().predicate());
    if (!shaped) throw TransformError("not in Clark normal form: '" + to_string(conjunct) + "'");
    const Formula& head = cur->right();
    std::set<std::string> names;
    for (const auto& a : head.arguments()) {
      if (!a.is_variable() || !names.insert(a.name()).second)
        throw TransformError("head arguments of '" + head.predicate() + "' are not distinct variables");
    }
    for (const auto& v : free_variables(cur->left()))
      if (!names.count(v.name()))
        throw TransformError("body of '" + head.predicate() + "' has free variable " + v.name());
    if (!seen.insert(head.predicate()).second)
      throw TransformError("predicate '" + head.predicate() + "' is defined twice");
    Formula g = Formula::equivalence(head, cur->left());
    for (auto it = prefix.rbegin(); it != prefix.rend(); ++it) g = Formula::forall(*it, g);
    out.push_back(g);
  }
  if (warnings && !is_tight(f, preds))
    warnings->push_back("formula is not tight; completion may differ from its stable models");
  return Formula::conjunction(out);
}

}  // namespace f2lp
