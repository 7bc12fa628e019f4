#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "f2lp/error.hpp"
#include "f2lp/formula.hpp"
#include "f2lp/parser.hpp"
#include "f2lp/printer.hpp"
#include "f2lp/signature.hpp"
#include "f2lp/transforms.hpp"

namespace f2lp {

enum class LiteralKind { Positive, Negative, DoubleNegative };

// A body literal; the atom may be a comparison.
struct Literal {
  LiteralKind kind = LiteralKind::Positive;
  Formula atom;
  friend bool operator==(const Literal&, const Literal&) = default;
};

// Integer interval bound to a variable, from "l..u" in a fact.
struct Range {
  Term variable;
  Term lower;
  Term upper;
  friend bool operator==(const Range&, const Range&) = default;
};

// head1 | ... | headn :- body; an empty head is a constraint; a choice rule has one head atom.
struct Rule {
  std::vector<Formula> head;
  std::vector<Literal> body;
  bool choice = false;
  std::vector<Range> ranges;
  friend bool operator==(const Rule&, const Rule&) = default;
};

enum class DirectiveKind { Const, Domain, Other };

struct Directive {
  DirectiveKind kind = DirectiveKind::Other;
  // Const: name and value; Domain: predicate and variable.
  std::string name;
  std::string argument;
  std::string text;
};

enum class StatementKind { Extended, Native, Directive, Comment };

struct SourceStatement {
  StatementKind kind = StatementKind::Comment;
  // Verbatim text including the final period.
  std::string text;
  int line = 1;
  Formula formula;
  Directive directive;
};

// A parsed input file: extended statements as formulas, everything else verbatim.
struct SourceProgram {
  std::vector<SourceStatement> statements;
  Signature signature = Signature::open_signature();

  std::vector<Formula> extended() const {
    std::vector<Formula> out;
    for (const auto& s : statements)
      if (s.kind == StatementKind::Extended) out.push_back(s.formula);
    return out;
  }
  std::vector<std::string> native() const {
    std::vector<std::string> out;
    for (const auto& s : statements)
      if (s.kind == StatementKind::Native) out.push_back(s.text);
    return out;
  }
  std::vector<Directive> directives() const {
    std::vector<Directive> out;
    for (const auto& s : statements)
      if (s.kind == StatementKind::Directive) out.push_back(s.directive);
    return out;
  }
};

enum class ProgramStatementKind { Rule, Native, Directive };

struct ProgramStatement {
  ProgramStatementKind kind = ProgramStatementKind::Rule;
  Rule rule;
  std::string text;
  Directive directive;
};

// Output program: rules, verbatim native statements and directives, in order.
struct Program {
  std::vector<ProgramStatement> statements;
  Signature signature = Signature::open_signature();

  void add(Rule r) { statements.push_back({ProgramStatementKind::Rule, std::move(r), {}, {}}); }
  void add_native(std::string text) {
    statements.push_back({ProgramStatementKind::Native, {}, std::move(text), {}});
  }
  void add_directive(Directive d) {
    statements.push_back({ProgramStatementKind::Directive, {}, d.text, std::move(d)});
  }
  std::vector<Rule> rules() const {
    std::vector<Rule> out;
    for (const auto& s : statements)
      if (s.kind == ProgramStatementKind::Rule) out.push_back(s.rule);
    return out;
  }
  // Variable name to the domain predicates declared for it, in declaration order.
  std::map<std::string, std::vector<std::string>> domains() const {
    std::map<std::string, std::vector<std::string>> out;
    for (const auto& s : statements)
      if (s.kind == ProgramStatementKind::Directive && s.directive.kind == DirectiveKind::Domain) {
        auto& v = out[s.directive.argument];
        if (std::find(v.begin(), v.end(), s.directive.name) == v.end()) v.push_back(s.directive.name);
      }
    return out;
  }
  std::map<std::string, std::string> constants() const {
    std::map<std::string, std::string> out;
    for (const auto& s : statements)
      if (s.kind == ProgramStatementKind::Directive && s.directive.kind == DirectiveKind::Const)
        out[s.directive.name] = s.directive.argument;
    return out;
  }
};

namespace detail {

struct RawStatement {
  std::string text;
  int line;
  int column;
  bool comment;
};

// Splits at periods that are not part of "..", keeping '%' comments as their own entries.
inline std::vector<RawStatement> split_statements(std::string_view text) {
  std::vector<RawStatement> out;
  std::string current;
  int line = 1, column = 1, start_line = 1, start_column = 1;
  bool empty = true;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '%') {
      std::size_t j = i;
      while (j < text.size() && text[j] != '\n') ++j;
      out.push_back({std::string(text.substr(i, j - i)), line, column, true});
      column += static_cast<int>(j - i);
      i = j - 1;
      continue;
    }
    if (empty && std::isspace(static_cast<unsigned char>(c))) {
      if (c == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
      continue;
    }
    if (empty) {
      start_line = line;
      start_column = column;
      empty = false;
    }
    current += c;
    if (c == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
    const bool dots = (i + 1 < text.size() && text[i + 1] == '.') || (i > 0 && text[i - 1] == '.');
    if (c == '.' && !dots) {
      out.push_back({current, start_line, start_column, false});
      current.clear();
      empty = true;
    }
  }
  std::size_t k = 0;
  while (k < current.size() && std::isspace(static_cast<unsigned char>(current[k]))) ++k;
  if (k < current.size()) throw ParseError("statement is missing its final '.'", start_line, start_column);
  return out;
}

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline std::string without_period(const std::string& text) {
  std::string t = trim(text);
  if (!t.empty() && t.back() == '.') t.pop_back();
  return trim(t);
}

inline Directive parse_directive(const std::string& text, int line, int column) {
  Directive d;
  d.text = trim(text);
  const std::string body = without_period(text);
  auto tokens = tokenize(body.substr(1), line, column + 1);
  if (tokens.empty() || tokens[0].kind != TokenKind::Identifier) return d;
  if (tokens[0].text == "domain") {
    if (tokens.size() != 6 || tokens[1].kind != TokenKind::Identifier || tokens[2].kind != TokenKind::LParen ||
        tokens[3].kind != TokenKind::Variable || tokens[4].kind != TokenKind::RParen)
      throw ParseError("expected '#domain pred(Var).'", line, column);
    d.kind = DirectiveKind::Domain;
    d.name = tokens[1].text;
    d.argument = tokens[3].text;
  } else if (tokens[0].text == "const") {
    if (tokens.size() < 5 || tokens[1].kind != TokenKind::Identifier || tokens[2].kind != TokenKind::Equal)
      throw ParseError("expected '#const name=value.'", line, column);
    d.kind = DirectiveKind::Const;
    d.name = tokens[1].text;
    const auto eq = body.find('=');
    d.argument = trim(body.substr(eq + 1));
  }
  return d;
}

inline bool is_native(const std::vector<Token>& tokens) {
  for (const auto& t : tokens)
    if (t.kind == TokenKind::If || t.kind == TokenKind::Range) return true;
  return false;
}

}  // namespace detail

struct ProgramParseOptions {
  // Extended statements may use "->" and "<->" (event-calculus descriptions).
  bool allow_arrows = false;
  bool allow_reserved = false;
};

// Parses a file mixing extended "<-" statements with native rules and directives.
inline SourceProgram parse_program(std::string_view text, Signature sig = Signature::open_signature(),
                                   ProgramParseOptions options = {}) {
  SourceProgram out;
  auto raw = detail::split_statements(text);
  for (const auto& r : raw) {
    const std::string t = detail::trim(r.text);
    if (!r.comment && !t.empty() && t.front() == '#') {
      Directive d = detail::parse_directive(t, r.line, r.column);
      if (d.kind == DirectiveKind::Domain) sig.declare_variable(d.argument, d.name);
    }
  }
  for (const auto& r : raw) {
    SourceStatement s;
    s.text = detail::trim(r.text);
    s.line = r.line;
    if (r.comment) {
      s.kind = StatementKind::Comment;
    } else if (s.text.front() == '#') {
      s.kind = StatementKind::Directive;
      s.directive = detail::parse_directive(s.text, r.line, r.column);
    } else {
      auto tokens = tokenize(detail::without_period(r.text), r.line, r.column);
      if (detail::is_native(tokens)) {
        s.kind = StatementKind::Native;
      } else {
        s.kind = StatementKind::Extended;
        FormulaParser p(std::move(tokens), sig, {options.allow_reserved, options.allow_arrows});
        s.formula = p.parse_statement();
        p.expect_end();
      }
    }
    out.statements.push_back(std::move(s));
  }
  out.signature = std::move(sig);
  return out;
}

namespace detail {

inline std::vector<std::vector<Token>> split_top_level(const std::vector<Token>& tokens, TokenKind sep) {
  std::vector<std::vector<Token>> parts(1);
  int depth = 0;
  for (const auto& t : tokens) {
    if (t.kind == TokenKind::End) break;
    if (t.kind == TokenKind::LParen || t.kind == TokenKind::LBrace || t.kind == TokenKind::LBracket) ++depth;
    if (t.kind == TokenKind::RParen || t.kind == TokenKind::RBrace || t.kind == TokenKind::RBracket) --depth;
    if (depth == 0 && t.kind == sep) {
      parts.emplace_back();
      continue;
    }
    parts.back().push_back(t);
  }
  return parts;
}

inline std::vector<Token> terminated(std::vector<Token> tokens, const Token& at) {
  tokens.push_back({TokenKind::End, "", at.line, at.column});
  return tokens;
}

inline Formula parse_atom_tokens(std::vector<Token> tokens, Signature& sig, const Token& at) {
  FormulaParser p(terminated(std::move(tokens), at), sig, {true, false});
  Formula f = p.parse_formula();
  p.expect_end();
  if (!f.is_atom() && !(f.is_negation() && f.negated().is_comparison_atom()))
    throw ParseError("expected an atom or comparison", at.line, at.column);
  return f;
}

// Replaces each "l..u" argument by a fresh variable recorded as a range.
inline std::vector<Token> extract_ranges(const std::vector<Token>& tokens, Signature& sig,
                                         std::vector<Range>& ranges) {
  std::vector<Token> out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].kind != TokenKind::Range) {
      out.push_back(tokens[i]);
      continue;
    }
    // Lower bound: back to the enclosing '(' or ','.
    std::size_t b = out.size();
    int depth = 0;
    while (b > 0) {
      const auto k = out[b - 1].kind;
      if (depth == 0 && (k == TokenKind::LParen || k == TokenKind::Comma)) break;
      if (k == TokenKind::RParen) ++depth;
      if (k == TokenKind::LParen) --depth;
      --b;
    }
    std::vector<Token> lower(out.begin() + static_cast<long>(b), out.end());
    out.resize(b);
    std::size_t e = i + 1;
    depth = 0;
    while (e < tokens.size()) {
      const auto k = tokens[e].kind;
      if (depth == 0 && (k == TokenKind::RParen || k == TokenKind::Comma || k == TokenKind::End)) break;
      if (k == TokenKind::LParen) ++depth;
      if (k == TokenKind::RParen) --depth;
      ++e;
    }
    std::vector<Token> upper(tokens.begin() + static_cast<long>(i) + 1, tokens.begin() + static_cast<long>(e));
    const Token& at = tokens[i];
    FormulaParser lp(terminated(lower, at), sig, {true, false});
    FormulaParser up(terminated(upper, at), sig, {true, false});
    Range r{Term::variable("_R" + std::to_string(ranges.size() + 1)), lp.parse_term(), up.parse_term()};
    lp.expect_end();
    up.expect_end();
    out.push_back({TokenKind::Variable, r.variable.name(), at.line, at.column});
    ranges.push_back(std::move(r));
    i = e - 1;
  }
  return out;
}

inline Literal parse_native_literal(std::vector<Token> tokens, Signature& sig, const Token& at) {
  auto is_not = [](const Token& t) { return t.kind == TokenKind::Identifier && t.text == "not"; };
  // "{not a}0" is the cardinality idiom for "not not a".
  if (tokens.size() >= 5 && tokens[0].kind == TokenKind::LBrace && is_not(tokens[1]) &&
      tokens[tokens.size() - 2].kind == TokenKind::RBrace && tokens.back().kind == TokenKind::Integer &&
      tokens.back().text == "0") {
    std::vector<Token> inner(tokens.begin() + 2, tokens.end() - 2);
    return {LiteralKind::DoubleNegative, parse_atom_tokens(std::move(inner), sig, at)};
  }
  if (tokens.size() >= 2 && is_not(tokens[0]) && is_not(tokens[1]))
    return {LiteralKind::DoubleNegative,
            parse_atom_tokens(std::vector<Token>(tokens.begin() + 2, tokens.end()), sig, at)};
  if (!tokens.empty() && is_not(tokens[0]))
    return {LiteralKind::Negative, parse_atom_tokens(std::vector<Token>(tokens.begin() + 1, tokens.end()), sig, at)};
  for (const auto& t : tokens)
    if (t.kind == TokenKind::LBrace) throw TransformError("unsupported native construct: aggregate or cardinality");
  return {LiteralKind::Positive, parse_atom_tokens(std::move(tokens), sig, at)};
}

}  // namespace detail

// Parses a native "head :- body." rule into the rule IR.
inline Rule parse_native_rule(std::string_view text, Signature& sig, int line = 1) {
  const auto tokens = tokenize(detail::without_period(std::string(text)), line, 1);
  const Token at = tokens.front();
  std::vector<Token> head_tokens, body_tokens;
  bool in_body = false;
  int depth = 0;
  for (const auto& t : tokens) {
    if (t.kind == TokenKind::End) break;
    if (t.kind == TokenKind::LParen || t.kind == TokenKind::LBrace) ++depth;
    if (t.kind == TokenKind::RParen || t.kind == TokenKind::RBrace) --depth;
    if (depth == 0 && t.kind == TokenKind::If && !in_body) {
      in_body = true;
      continue;
    }
    (in_body ? body_tokens : head_tokens).push_back(t);
  }
  Rule r;
  if (!head_tokens.empty()) {
    if (head_tokens.front().kind == TokenKind::LBrace) {
      if (head_tokens.back().kind != TokenKind::RBrace)
        throw TransformError("unsupported native construct: choice bounds");
      auto inner = detail::extract_ranges(std::vector<Token>(head_tokens.begin() + 1, head_tokens.end() - 1), sig, r.ranges);
      if (detail::split_top_level(inner, TokenKind::Comma).size() != 1)
        throw TransformError("unsupported native construct: choice over several atoms");
      r.choice = true;
      r.head.push_back(detail::parse_atom_tokens(std::move(inner), sig, at));
    } else {
      auto head = detail::extract_ranges(head_tokens, sig, r.ranges);
      for (auto& part : detail::split_top_level(head, TokenKind::Bar))
        r.head.push_back(detail::parse_atom_tokens(std::move(part), sig, at));
    }
  }
  if (!body_tokens.empty())
    for (auto& part : detail::split_top_level(body_tokens, TokenKind::Comma))
      r.body.push_back(detail::parse_native_literal(std::move(part), sig, at));
  return r;
}

namespace detail {

inline std::string negated_comparison(const std::string& op) {
  if (op == "<") return ">=";
  if (op == "<=") return ">";
  if (op == ">") return "<=";
  if (op == ">=") return "<";
  if (op == "=") return "!=";
  return "=";
}

// A comparison literal as a positive comparison atom, with "!=" kept as ¬(=).
inline Formula comparison_literal(const Formula& cmp, bool negate) {
  const Formula& a = cmp.is_atom() ? cmp : cmp.negated();
  const bool positive = cmp.is_atom() != negate;
  if (positive) return a;
  return Formula::comparison(negated_comparison(a.predicate()), a.arguments()[0], a.arguments()[1]);
}

inline bool is_comparison_element(const Formula& e) {
  return e.is_comparison_atom() || (e.is_negation() && e.negated().is_comparison_atom());
}

}  // namespace detail

// Moves ¬atoms of the head into the body as "not not" and head comparisons into the
// body as their negation; body ¬atoms become "not" literals.
inline Rule head_normalize(const FlatRule& r) {
  Rule out;
  for (const auto& e : r.head) {
    if (detail::is_comparison_element(e)) {
      out.body.push_back({LiteralKind::Positive, detail::comparison_literal(e, true)});
    } else if (e.is_negation()) {
      out.body.push_back({LiteralKind::DoubleNegative, e.negated()});
    } else if (e.is_atom()) {
      out.head.push_back(e);
    } else {
      throw TransformError("rule element is not a literal: " + to_string(e));
    }
  }
  for (const auto& e : r.body) {
    if (detail::is_comparison_element(e)) {
      out.body.push_back({LiteralKind::Positive, detail::comparison_literal(e, false)});
    } else if (e.is_negation()) {
      out.body.push_back({LiteralKind::Negative, e.negated()});
    } else if (e.is_atom()) {
      out.body.push_back({LiteralKind::Positive, e});
    } else {
      throw TransformError("rule element is not a literal: " + to_string(e));
    }
  }
  return out;
}

// Variables of a rule in first-occurrence order, head first.
inline std::vector<Term> rule_variables(const Rule& r) {
  std::vector<Term> vars;
  auto collect = [&](const Formula& a) {
    std::vector<Term> here;
    for (const auto& t : a.arguments()) t.collect_variables(here);
    for (const auto& v : here) {
      bool seen = false;
      for (const auto& w : vars) seen = seen || w.name() == v.name();
      if (!seen) vars.push_back(v);
    }
  };
  for (const auto& h : r.head) collect(h);
  for (const auto& l : r.body) collect(l.atom.is_atom() ? l.atom : l.atom.negated());
  for (const auto& range : r.ranges) {
    bool seen = false;
    for (const auto& w : vars) seen = seen || w.name() == range.variable.name();
    if (!seen) vars.push_back(range.variable);
  }
  return vars;
}

// The rule as a formula with free variables; domain atoms are added for declared variables.
inline Formula rule_formula(const Rule& r, const std::map<std::string, std::vector<std::string>>& domains = {}) {
  std::vector<Formula> body;
  for (const auto& l : r.body) {
    switch (l.kind) {
      case LiteralKind::Positive: body.push_back(l.atom); break;
      case LiteralKind::Negative: body.push_back(Formula::negation(l.atom)); break;
      case LiteralKind::DoubleNegative: body.push_back(Formula::negation(Formula::negation(l.atom))); break;
    }
  }
  for (const auto& range : r.ranges) {
    body.push_back(Formula::comparison("<=", range.lower, range.variable));
    body.push_back(Formula::comparison("<=", range.variable, range.upper));
  }
  for (const auto& v : rule_variables(r)) {
    auto it = domains.find(v.name());
    if (it == domains.end()) continue;
    for (const auto& p : it->second) body.push_back(Formula::atom(p, {v}));
  }
  Formula head;
  if (r.choice) head = Formula::disjunction(r.head.front(), Formula::negation(r.head.front()));
  else if (r.head.empty()) head = Formula::bottom();
  else head = Formula::disjunction(r.head);
  if (body.empty()) return head;
  return Formula::implication(Formula::conjunction(body), head);
}

// Conjunction of the universal closures of all rules, native rules included.
inline Formula fol_representation(const Program& p) {
  const auto domains = p.domains();
  Signature sig = p.signature;
  std::vector<Formula> parts;
  for (const auto& s : p.statements) {
    if (s.kind == ProgramStatementKind::Rule) parts.push_back(universal_closure(rule_formula(s.rule, domains)));
    if (s.kind == ProgramStatementKind::Native)
      parts.push_back(universal_closure(rule_formula(parse_native_rule(s.text, sig), domains)));
  }
  if (parts.empty()) return Formula::top();
  return Formula::conjunction(parts);
}

}  // namespace f2lp
