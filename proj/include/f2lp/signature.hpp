#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "f2lp/error.hpp"
#include "f2lp/formula.hpp"

namespace f2lp {

struct FunctionProfile {
  std::vector<std::string> argument_sorts;
  std::string result_sort = kDefaultSort;
  friend bool operator==(const FunctionProfile&, const FunctionProfile&) = default;
};

// In open mode unknown symbols are declared on first use with default sorts;
// a closed signature rejects them.
class Signature {
 public:
  Signature() { sorts_.insert(kDefaultSort); }

  static Signature open_signature() {
    Signature s;
    s.open_ = true;
    return s;
  }

  bool is_open() const noexcept { return open_; }
  void set_open(bool open) noexcept { open_ = open; }

  void declare_sort(const std::string& name) { sorts_.insert(name); }

  void declare_object(const std::string& name, const std::string& sort = kDefaultSort) {
    auto [it, fresh] = objects_.emplace(name, sort);
    if (!fresh && it->second != sort)
      throw SignatureError("object '" + name + "' redeclared with sort " + sort);
    sorts_.insert(sort);
  }

  void declare_function(const std::string& name, FunctionProfile profile) {
    auto [it, fresh] = functions_.emplace(name, profile);
    if (!fresh && !(it->second == profile))
      throw SignatureError("function '" + name + "' redeclared with a different profile");
    for (const auto& s : profile.argument_sorts) sorts_.insert(s);
    sorts_.insert(profile.result_sort);
  }

  void declare_predicate(const std::string& name, std::vector<std::string> argument_sorts) {
    auto [it, fresh] = predicates_.emplace(name, argument_sorts);
    if (!fresh && it->second != argument_sorts)
      throw SignatureError("predicate '" + name + "' redeclared with a different profile");
    for (const auto& s : argument_sorts) sorts_.insert(s);
    if (is_strong_negation(name)) pair_strong(positive_form(name), argument_sorts);
  }

  void declare_predicate(const std::string& name, std::size_t arity) {
    declare_predicate(name, std::vector<std::string>(arity, kDefaultSort));
  }

  // Variables declared through a domain directive carry that sort.
  void declare_variable(const std::string& name, const std::string& sort) {
    auto& sorts = variable_sorts_[name];
    if (std::find(sorts.begin(), sorts.end(), sort) == sorts.end()) sorts.push_back(sort);
    sorts_.insert(sort);
  }

  std::string variable_sort(const std::string& name) const {
    auto it = variable_sorts_.find(name);
    return it == variable_sorts_.end() ? kDefaultSort : it->second.front();
  }
  const std::map<std::string, std::vector<std::string>>& variable_domains() const noexcept {
    return variable_sorts_;
  }

  bool has_predicate(const std::string& name) const { return predicates_.count(name) != 0; }
  bool has_function(const std::string& name) const { return functions_.count(name) != 0; }
  bool has_object(const std::string& name) const { return objects_.count(name) != 0; }

  const std::vector<std::string>& predicate_sorts(const std::string& name) const {
    auto it = predicates_.find(name);
    if (it == predicates_.end()) throw SignatureError("unknown predicate '" + name + "'");
    return it->second;
  }
  const FunctionProfile& function_profile(const std::string& name) const {
    auto it = functions_.find(name);
    if (it == functions_.end()) throw SignatureError("unknown function '" + name + "'");
    return it->second;
  }
  std::string object_sort(const std::string& name) const {
    auto it = objects_.find(name);
    if (it == objects_.end()) throw SignatureError("unknown object constant '" + name + "'");
    return it->second;
  }

  const std::set<std::string>& sorts() const noexcept { return sorts_; }
  const std::map<std::string, std::string>& objects() const noexcept { return objects_; }
  const std::map<std::string, FunctionProfile>& functions() const noexcept { return functions_; }
  const std::map<std::string, std::vector<std::string>>& predicates() const noexcept {
    return predicates_;
  }
  const std::set<std::string>& strong_pairs() const noexcept { return strong_pairs_; }

  // Checks an atom against the signature, declaring unknown symbols in open mode.
  void check_atom(const std::string& predicate, const std::vector<Term>& args) {
    if (is_comparison(predicate)) {
      for (const auto& a : args) check_term(a, "");
      return;
    }
    auto it = predicates_.find(predicate);
    if (it == predicates_.end()) {
      if (!open_) throw SignatureError("unknown predicate '" + predicate + "'");
      std::vector<std::string> sorts;
      for (const auto& a : args) sorts.push_back(open_sort_of(a));
      declare_predicate(predicate, sorts);
      it = predicates_.find(predicate);
    }
    if (it->second.size() != args.size())
      throw SignatureError("predicate '" + predicate + "' expects " +
                           std::to_string(it->second.size()) + " arguments, got " +
                           std::to_string(args.size()));
    for (std::size_t i = 0; i < args.size(); ++i) check_term(args[i], it->second[i]);
    if (open_)
      for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string s = sort_of(args[i]);
        if (!s.empty() && s != kDefaultSort && it->second[i] == kDefaultSort) refine(predicate, i, s);
      }
  }

  // Checks every atom of a formula.
  void check_formula(const Formula& f) {
    for_each_occurrence(f, [&](const Formula& g, const Path&, int) {
      if (g.is_atom()) check_atom(g.predicate(), g.arguments());
    });
  }

  // Sort of a term; empty when unconstrained (integers, arithmetic, open symbols).
  std::string sort_of(const Term& t) const {
    switch (t.kind()) {
      case Term::Kind::Variable:
        return t.sort();
      case Term::Kind::Constant: {
        auto it = objects_.find(t.name());
        return it == objects_.end() ? std::string() : it->second;
      }
      case Term::Kind::Integer:
        return {};
      case Term::Kind::Function: {
        if (t.is_arithmetic()) return {};
        auto it = functions_.find(t.name());
        return it == functions_.end() ? std::string() : it->second.result_sort;
      }
    }
    return {};
  }

 private:
  std::string open_sort_of(const Term& t) const {
    std::string s = sort_of(t);
    return s.empty() ? kDefaultSort : s;
  }

  static bool compatible(const std::string& expected, const std::string& actual) {
    return expected.empty() || actual.empty() || expected == actual || expected == kDefaultSort ||
           actual == kDefaultSort;
  }

  void check_term(const Term& t, const std::string& expected) {
    switch (t.kind()) {
      case Term::Kind::Variable:
      case Term::Kind::Integer:
        break;
      case Term::Kind::Constant:
        if (!objects_.count(t.name())) {
          if (!open_) throw SignatureError("unknown object constant '" + t.name() + "'");
          return;
        }
        break;
      case Term::Kind::Function: {
        if (t.is_arithmetic()) {
          for (const auto& a : t.args()) check_term(a, "");
          return;
        }
        auto it = functions_.find(t.name());
        if (it == functions_.end()) {
          if (!open_) throw SignatureError("unknown function '" + t.name() + "'");
          for (const auto& a : t.args()) check_term(a, "");
          return;
        }
        if (it->second.argument_sorts.size() != t.args().size())
          throw SignatureError("function '" + t.name() + "' expects " +
                               std::to_string(it->second.argument_sorts.size()) + " arguments");
        for (std::size_t i = 0; i < t.args().size(); ++i)
          check_term(t.args()[i], it->second.argument_sorts[i]);
        break;
      }
    }
    const std::string actual = sort_of(t);
    if (!compatible(expected, actual))
      throw SignatureError("sort mismatch: '" + to_string(t) + "' has sort " + actual +
                           ", expected " + expected);
  }

  void pair_strong(const std::string& positive, const std::vector<std::string>& sorts) {
    auto it = predicates_.find(positive);
    if (it == predicates_.end()) {
      predicates_.emplace(positive, sorts);
    } else if (it->second != sorts) {
      bool merged = open_ && it->second.size() == sorts.size();
      for (std::size_t i = 0; merged && i < sorts.size(); ++i) merged = compatible(it->second[i], sorts[i]);
      if (!merged) throw SignatureError("strong negation pair '" + positive + "' has mismatched sorts");
      for (std::size_t i = 0; i < sorts.size(); ++i) {
        if (it->second[i] == kDefaultSort) it->second[i] = sorts[i];
        auto& negative = predicates_["~" + positive];
        if (negative[i] == kDefaultSort) negative[i] = it->second[i];
      }
    }
    strong_pairs_.insert(positive);
  }

  // Open mode: an unconstrained argument position takes the first concrete sort seen.
  void refine(const std::string& predicate, std::size_t i, const std::string& sort) {
    predicates_[predicate][i] = sort;
    const std::string other = is_strong_negation(predicate) ? positive_form(predicate) : "~" + predicate;
    auto it = predicates_.find(other);
    if (it != predicates_.end() && it->second.size() > i && it->second[i] == kDefaultSort) it->second[i] = sort;
  }

  bool open_ = false;
  std::set<std::string> sorts_;
  std::map<std::string, std::string> objects_;
  std::map<std::string, FunctionProfile> functions_;
  std::map<std::string, std::vector<std::string>> predicates_;
  std::set<std::string> strong_pairs_;
  std::map<std::string, std::vector<std::string>> variable_sorts_;
};

}  // namespace f2lp
