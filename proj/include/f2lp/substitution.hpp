#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "f2lp/error.hpp"
#include "f2lp/formula.hpp"

namespace f2lp {

using Binding = std::map<std::string, Term>;

// "_<base><n>" with the smallest n not in avoid; the '_' prefix is barred from user input.
inline std::string fresh_variable_name(const std::string& base, const std::set<std::string>& avoid) {
  std::string stem = base;
  while (!stem.empty() && stem.front() == '_') stem.erase(stem.begin());
  while (!stem.empty() && std::isdigit(static_cast<unsigned char>(stem.back()))) stem.pop_back();
  if (stem.empty()) stem = "V";
  for (int n = 1;; ++n) {
    std::string candidate = "_" + stem + std::to_string(n);
    if (!avoid.count(candidate)) return candidate;
  }
}

inline Term substitute(const Term& t, const Binding& binding) {
  if (t.is_variable()) {
    auto it = binding.find(t.name());
    return it == binding.end() ? t : it->second;
  }
  if (t.args().empty()) return t;
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const auto& a : t.args()) args.push_back(substitute(a, binding));
  return Term::function(t.name(), std::move(args));
}

namespace detail {

inline Formula substitute_formula(const Formula& f, const Binding& binding) {
  if (binding.empty()) return f;
  switch (f.op()) {
    case Op::Bottom:
      return f;
    case Op::Atom: {
      std::vector<Term> args;
      args.reserve(f.arguments().size());
      for (const auto& a : f.arguments()) args.push_back(f2lp::substitute(a, binding));
      return Formula::atom(f.predicate(), std::move(args));
    }
    case Op::And:
    case Op::Or:
    case Op::Implies:
      return f.with_children({substitute_formula(f.left(), binding), substitute_formula(f.right(), binding)});
    case Op::Forall:
    case Op::Exists: {
      const Term& y = f.variable();
      Binding inner;
      const auto body_free = free_variables(f.body());
      for (const auto& v : body_free) {
        if (v.name() == y.name()) continue;
        auto it = binding.find(v.name());
        if (it != binding.end()) inner.emplace(it->first, it->second);
      }
      if (inner.empty()) return f;
      bool captured = false;
      for (const auto& [name, term] : inner) captured = captured || term.contains_variable(y.name());
      Term var = y;
      Formula body = f.body();
      if (captured) {
        std::set<std::string> avoid = all_variable_names(f.body());
        for (const auto& [name, term] : inner) {
          avoid.insert(name);
          term.collect_variable_names(avoid);
        }
        var = Term::variable(fresh_variable_name(y.name(), avoid), y.sort());
        body = substitute_formula(body, Binding{{y.name(), var}});
      }
      body = substitute_formula(body, inner);
      return f.op() == Op::Forall ? Formula::forall(var, body) : Formula::exists(var, body);
    }
  }
  return f;
}

}  // namespace detail

// Capture-avoiding simultaneous substitution of free variables.
inline Formula substitute(const Formula& f, const Binding& binding) {
  auto free = free_variables(f);
  for (const auto& v : free) {
    auto it = binding.find(v.name());
    if (it == binding.end() || !it->second.is_variable()) continue;
    const auto& a = v.sort();
    const auto& b = it->second.sort();
    if (a != b && a != kDefaultSort && b != kDefaultSort)
      throw SignatureError("sort mismatch substituting " + v.name() + ": " + a + " vs " + b);
  }
  return detail::substitute_formula(f, binding);
}

// Alpha-equivalence: equal up to consistent renaming of bound variables.
inline bool alpha_equivalent(const Formula& a, const Formula& b);

namespace detail {

inline bool alpha_terms(const Term& x, const Term& y, const std::map<std::string, std::string>& ab,
                        const std::map<std::string, std::string>& ba) {
  if (x.kind() != y.kind()) return false;
  if (x.is_variable()) {
    auto ix = ab.find(x.name());
    auto iy = ba.find(y.name());
    if (ix == ab.end() && iy == ba.end()) return x.name() == y.name();
    return ix != ab.end() && iy != ba.end() && ix->second == y.name() && iy->second == x.name();
  }
  if (x.name() != y.name() || x.args().size() != y.args().size()) return false;
  for (std::size_t i = 0; i < x.args().size(); ++i)
    if (!alpha_terms(x.args()[i], y.args()[i], ab, ba)) return false;
  return true;
}

inline bool alpha(const Formula& a, const Formula& b, std::map<std::string, std::string>& ab,
                  std::map<std::string, std::string>& ba) {
  if (a.op() != b.op()) return false;
  switch (a.op()) {
    case Op::Bottom:
      return true;
    case Op::Atom:
      if (a.predicate() != b.predicate() || a.arguments().size() != b.arguments().size())
        return false;
      for (std::size_t i = 0; i < a.arguments().size(); ++i)
        if (!alpha_terms(a.arguments()[i], b.arguments()[i], ab, ba)) return false;
      return true;
    case Op::And:
    case Op::Or:
    case Op::Implies:
      return alpha(a.left(), b.left(), ab, ba) && alpha(a.right(), b.right(), ab, ba);
    case Op::Forall:
    case Op::Exists: {
      const std::string x = a.variable().name();
      const std::string y = b.variable().name();
      auto saved_ab = ab.find(x) != ab.end() ? std::optional<std::string>(ab[x]) : std::nullopt;
      auto saved_ba = ba.find(y) != ba.end() ? std::optional<std::string>(ba[y]) : std::nullopt;
      ab[x] = y;
      ba[y] = x;
      const bool ok = alpha(a.body(), b.body(), ab, ba);
      if (saved_ab) ab[x] = *saved_ab; else ab.erase(x);
      if (saved_ba) ba[y] = *saved_ba; else ba.erase(y);
      return ok;
    }
  }
  return false;
}

}  // namespace detail

inline bool alpha_equivalent(const Formula& a, const Formula& b) {
  std::map<std::string, std::string> ab, ba;
  return detail::alpha(a, b, ab, ba);
}

}  // namespace f2lp
