#pragma once

#include <compare>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace f2lp {

// Sort of undeclared variables; user sort names never start with an underscore.
inline const std::string kDefaultSort = "_any";

class Term {
 public:
  enum class Kind : std::uint8_t { Variable, Constant, Integer, Function };

  Term() : kind_(Kind::Constant) {}

  static Term variable(std::string name, std::string sort = kDefaultSort) {
    Term t;
    t.kind_ = Kind::Variable;
    t.name_ = std::move(name);
    t.sort_ = std::move(sort);
    return t;
  }
  static Term constant(std::string name) {
    Term t;
    t.kind_ = Kind::Constant;
    t.name_ = std::move(name);
    return t;
  }
  static Term integer(long long value) {
    Term t;
    t.kind_ = Kind::Integer;
    t.value_ = value;
    t.name_ = std::to_string(value);
    return t;
  }
  static Term function(std::string name, std::vector<Term> args) {
    if (args.empty()) return constant(std::move(name));
    Term t;
    t.kind_ = Kind::Function;
    t.name_ = std::move(name);
    t.args_ = std::move(args);
    return t;
  }
  // Built-in arithmetic is an ordinary binary function named "+", "-" or "*".
  static Term arithmetic(char op, Term lhs, Term rhs) {
    return function(std::string(1, op), {std::move(lhs), std::move(rhs)});
  }

  Kind kind() const noexcept { return kind_; }
  bool is_variable() const noexcept { return kind_ == Kind::Variable; }
  bool is_constant() const noexcept { return kind_ == Kind::Constant; }
  bool is_integer() const noexcept { return kind_ == Kind::Integer; }
  bool is_function() const noexcept { return kind_ == Kind::Function; }
  bool is_arithmetic() const noexcept {
    return kind_ == Kind::Function && args_.size() == 2 &&
           (name_ == "+" || name_ == "-" || name_ == "*");
  }

  const std::string& name() const noexcept { return name_; }
  const std::string& sort() const noexcept { return sort_; }
  long long value() const noexcept { return value_; }
  const std::vector<Term>& args() const noexcept { return args_; }

  bool is_ground() const {
    if (is_variable()) return false;
    for (const auto& a : args_)
      if (!a.is_ground()) return false;
    return true;
  }

  bool contains_variable(const std::string& var) const {
    if (is_variable()) return name_ == var;
    for (const auto& a : args_)
      if (a.contains_variable(var)) return true;
    return false;
  }

  // Variables in first-occurrence order, without duplicates.
  void collect_variables(std::vector<Term>& out) const {
    if (is_variable()) {
      for (const auto& v : out)
        if (v.name_ == name_) return;
      out.push_back(*this);
      return;
    }
    for (const auto& a : args_) a.collect_variables(out);
  }

  void collect_variable_names(std::set<std::string>& out) const {
    if (is_variable()) {
      out.insert(name_);
      return;
    }
    for (const auto& a : args_) a.collect_variable_names(out);
  }

  friend bool operator==(const Term&, const Term&) = default;
  friend auto operator<=>(const Term& a, const Term& b) {
    if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
    if (auto c = a.name_ <=> b.name_; c != 0) return c;
    if (auto c = a.sort_ <=> b.sort_; c != 0) return c;
    if (auto c = a.value_ <=> b.value_; c != 0) return c;
    return a.args_ <=> b.args_;
  }

 private:
  Kind kind_;
  std::string name_;
  std::string sort_;
  long long value_ = 0;
  std::vector<Term> args_;
};

inline std::string to_string(const Term& t);

namespace detail {

inline int arithmetic_precedence(const Term& t) {
  if (!t.is_arithmetic()) return 3;
  return t.name() == "*" ? 2 : 1;
}

}  // namespace detail

inline std::string to_string(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Variable:
    case Term::Kind::Constant:
    case Term::Kind::Integer:
      return t.name();
    case Term::Kind::Function:
      break;
  }
  if (t.is_arithmetic()) {
    const int p = detail::arithmetic_precedence(t);
    std::string lhs = to_string(t.args()[0]);
    std::string rhs = to_string(t.args()[1]);
    if (detail::arithmetic_precedence(t.args()[0]) < p) lhs = "(" + lhs + ")";
    if (detail::arithmetic_precedence(t.args()[1]) <= p) {
      if (t.args()[1].is_arithmetic()) rhs = "(" + rhs + ")";
    }
    return lhs + t.name() + rhs;
  }
  std::string s = t.name() + "(";
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    if (i) s += ",";
    s += to_string(t.args()[i]);
  }
  return s + ")";
}

}  // namespace f2lp
