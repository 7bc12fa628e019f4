#pragma once

#include <charconv>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "f2lp/error.hpp"
#include "f2lp/formula.hpp"

namespace f2lp {

using Tuple = std::vector<std::string>;
using Assignment = std::map<std::string, std::string>;

// A finite structure. Object constants not listed in `constants` denote the element
// of the same name; integers denote their decimal spelling.
struct Interpretation {
  std::map<std::string, std::vector<std::string>> universe;
  std::map<std::string, std::string> constants;
  std::map<std::string, std::map<Tuple, std::string>> functions;
  std::map<std::string, std::set<Tuple>> extents;

  static Interpretation over(std::vector<std::string> elements) {
    Interpretation i;
    i.universe[kDefaultSort] = std::move(elements);
    return i;
  }

  const std::vector<std::string>& domain(const std::string& sort) const {
    auto it = universe.find(sort);
    if (it == universe.end()) it = universe.find(kDefaultSort);
    if (it == universe.end()) throw EvaluationError("no universe for sort '" + sort + "'");
    return it->second;
  }

  bool holds(const std::string& predicate, const Tuple& args) const {
    auto it = extents.find(predicate);
    return it != extents.end() && it->second.count(args) != 0;
  }

  void add(const std::string& predicate, Tuple args) { extents[predicate].insert(std::move(args)); }
};

inline std::optional<long long> as_integer(const std::string& s) {
  long long v = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || s.empty()) return std::nullopt;
  return v;
}

// Element denoted by a term under constants, function tables and an assignment.
inline std::string evaluate_term(const Term& t, const Assignment& assignment,
                                 const std::map<std::string, std::string>& constants,
                                 const std::map<std::string, std::map<Tuple, std::string>>& functions) {
  switch (t.kind()) {
    case Term::Kind::Variable: {
      auto it = assignment.find(t.name());
      if (it == assignment.end()) throw EvaluationError("unassigned variable " + t.name());
      return it->second;
    }
    case Term::Kind::Integer:
      return t.name();
    case Term::Kind::Constant: {
      auto it = constants.find(t.name());
      return it == constants.end() ? t.name() : it->second;
    }
    case Term::Kind::Function:
      break;
  }
  Tuple args;
  args.reserve(t.args().size());
  for (const auto& a : t.args()) args.push_back(evaluate_term(a, assignment, constants, functions));
  if (t.is_arithmetic()) {
    auto x = as_integer(args[0]);
    auto y = as_integer(args[1]);
    if (!x || !y) throw EvaluationError("arithmetic on non-integer elements in " + to_string(t));
    const long long r = t.name() == "+" ? *x + *y : t.name() == "-" ? *x - *y : *x * *y;
    return std::to_string(r);
  }
  auto table = functions.find(t.name());
  if (table == functions.end()) throw EvaluationError("no table for function '" + t.name() + "'");
  auto entry = table->second.find(args);
  if (entry == table->second.end())
    throw EvaluationError("missing table entry for " + to_string(t));
  return entry->second;
}

inline bool compare_elements(const std::string& op, const std::string& a, const std::string& b) {
  if (op == "=") return a == b;
  auto x = as_integer(a);
  auto y = as_integer(b);
  if (!x || !y) throw EvaluationError("comparison '" + op + "' over non-integer elements");
  if (op == "<") return *x < *y;
  if (op == "<=") return *x <= *y;
  if (op == ">") return *x > *y;
  if (op == ">=") return *x >= *y;
  throw EvaluationError("unknown comparison '" + op + "'");
}

inline bool classical_eval(const Interpretation& i, Assignment& assignment, const Formula& f) {
  switch (f.op()) {
    case Op::Bottom:
      return false;
    case Op::Atom: {
      Tuple args;
      for (const auto& a : f.arguments())
        args.push_back(evaluate_term(a, assignment, i.constants, i.functions));
      if (f.is_comparison_atom()) return compare_elements(f.predicate(), args[0], args[1]);
      return i.holds(f.predicate(), args);
    }
    case Op::And:
      return classical_eval(i, assignment, f.left()) && classical_eval(i, assignment, f.right());
    case Op::Or:
      return classical_eval(i, assignment, f.left()) || classical_eval(i, assignment, f.right());
    case Op::Implies:
      return !classical_eval(i, assignment, f.left()) || classical_eval(i, assignment, f.right());
    case Op::Forall:
    case Op::Exists: {
      const std::string& name = f.variable().name();
      auto saved = assignment.find(name) != assignment.end()
                       ? std::optional<std::string>(assignment[name])
                       : std::nullopt;
      const bool universal = f.op() == Op::Forall;
      bool result = universal;
      for (const auto& e : i.domain(f.variable().sort())) {
        assignment[name] = e;
        if (classical_eval(i, assignment, f.body()) != universal) {
          result = !universal;
          break;
        }
      }
      if (saved) assignment[name] = *saved; else assignment.erase(name);
      return result;
    }
  }
  return false;
}

inline bool classical_eval(const Interpretation& i, const Assignment& assignment, const Formula& f) {
  Assignment copy = assignment;
  return classical_eval(i, copy, f);
}

inline bool classical_eval(const Interpretation& i, const Formula& f) {
  Assignment empty;
  return classical_eval(i, empty, f);
}

}  // namespace f2lp
