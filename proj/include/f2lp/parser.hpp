#pragma once

#include <cctype>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "f2lp/error.hpp"
#include "f2lp/formula.hpp"
#include "f2lp/signature.hpp"

namespace f2lp {

inline const std::string kAuxPrefix = "aux_";

enum class TokenKind {
  Identifier,  // lowercase-initial name or keyword
  Variable,
  Integer,
  LParen,
  RParen,
  LBracket,
  RBracket,
  LBrace,
  RBrace,
  Comma,
  Colon,
  Bang,
  Question,
  Amp,
  Bar,
  Minus,
  Plus,
  Star,
  Less,
  LessEq,
  Greater,
  GreaterEq,
  Equal,
  NotEqual,
  LeftArrow,
  RightArrow,
  BiArrow,
  If,  // ":-"
  Range,
  End,
};

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  int line = 1;
  int column = 1;
};

inline std::vector<Token> tokenize(std::string_view text, int line = 1, int column = 1) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
  };
  auto push = [&](TokenKind kind, std::size_t n) {
    out.push_back({kind, std::string(text.substr(i, n)), line, column});
    advance(n);
  };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '%') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    auto starts = [&](std::string_view s) { return text.substr(i, s.size()) == s; };
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_' || text[j] == '\''))
        ++j;
      const bool var = std::isupper(static_cast<unsigned char>(c)) || c == '_';
      push(var ? TokenKind::Variable : TokenKind::Identifier, j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      push(TokenKind::Integer, j - i);
      continue;
    }
    if (starts("<->")) { push(TokenKind::BiArrow, 3); continue; }
    if (starts("<-")) { push(TokenKind::LeftArrow, 2); continue; }
    if (starts("->")) { push(TokenKind::RightArrow, 2); continue; }
    if (starts(":-")) { push(TokenKind::If, 2); continue; }
    if (starts("<=")) { push(TokenKind::LessEq, 2); continue; }
    if (starts(">=")) { push(TokenKind::GreaterEq, 2); continue; }
    if (starts("!=")) { push(TokenKind::NotEqual, 2); continue; }
    if (starts("==")) { push(TokenKind::Equal, 2); continue; }
    if (starts("..")) { push(TokenKind::Range, 2); continue; }
    switch (c) {
      case '(': push(TokenKind::LParen, 1); continue;
      case ')': push(TokenKind::RParen, 1); continue;
      case '[': push(TokenKind::LBracket, 1); continue;
      case ']': push(TokenKind::RBracket, 1); continue;
      case '{': push(TokenKind::LBrace, 1); continue;
      case '}': push(TokenKind::RBrace, 1); continue;
      case ',': push(TokenKind::Comma, 1); continue;
      case ':': push(TokenKind::Colon, 1); continue;
      case '!': push(TokenKind::Bang, 1); continue;
      case '?': push(TokenKind::Question, 1); continue;
      case '&': push(TokenKind::Amp, 1); continue;
      case '|': push(TokenKind::Bar, 1); continue;
      case '-': push(TokenKind::Minus, 1); continue;
      case '+': push(TokenKind::Plus, 1); continue;
      case '*': push(TokenKind::Star, 1); continue;
      case '<': push(TokenKind::Less, 1); continue;
      case '>': push(TokenKind::Greater, 1); continue;
      case '=': push(TokenKind::Equal, 1); continue;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", line, column);
    }
  }
  out.push_back({TokenKind::End, "", line, column});
  return out;
}

struct ParseOptions {
  // Permits reserved fresh-variable and auxiliary names (round-tripping generated output).
  bool allow_reserved = false;
  // Permits "->" and "<->"; program rules forbid them.
  bool allow_arrows = true;
};

// Recursive-descent parser for one statement body in the ASCII grammar.
class FormulaParser {
 public:
  FormulaParser(std::vector<Token> tokens, Signature& sig, ParseOptions options = {})
      : tokens_(std::move(tokens)), sig_(sig), options_(options) {}

  Formula parse_formula() {
    Formula f = parse_arrow();
    return f;
  }

  // "head <- body", "<- body" or a formula.
  Formula parse_statement() {
    if (peek().kind == TokenKind::LeftArrow) {
      next();
      Formula body = options_.allow_arrows ? parse_arrow() : parse_disjunction_checked();
      return Formula::negation(body);
    }
    Formula f = parse_arrow();
    return f;
  }

  Term parse_term() { return parse_additive(); }

  bool at_end() const { return peek().kind == TokenKind::End; }
  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  void expect_end() {
    if (!at_end()) fail("unexpected '" + peek().text + "'");
  }
  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, peek().line, peek().column);
  }

 private:
  const Token& next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }
  bool accept(TokenKind k) {
    if (peek().kind != k) return false;
    next();
    return true;
  }
  void expect(TokenKind k, const char* what) {
    if (!accept(k)) fail(std::string("expected ") + what);
  }

  Formula parse_disjunction_checked() {
    Formula f = parse_disjunction();
    if (!options_.allow_arrows && (peek().kind == TokenKind::RightArrow ||
                                   peek().kind == TokenKind::BiArrow))
      fail("'->' is not allowed inside an extended rule");
    return f;
  }

  Formula parse_arrow() {
    if (!options_.allow_arrows) {
      Formula head = parse_disjunction_checked();
      if (accept(TokenKind::LeftArrow)) {
        Formula body = parse_disjunction_checked();
        if (peek().kind == TokenKind::LeftArrow) fail("nested '<-' in an extended rule");
        return Formula::implication(body, head);
      }
      return head;
    }
    Formula lhs = parse_disjunction();
    if (accept(TokenKind::RightArrow)) return Formula::implication(lhs, parse_arrow());
    if (accept(TokenKind::LeftArrow)) return Formula::implication(parse_arrow(), lhs);
    if (accept(TokenKind::BiArrow)) return Formula::equivalence(lhs, parse_arrow());
    return lhs;
  }

  Formula parse_disjunction() {
    Formula f = parse_conjunction();
    while (accept(TokenKind::Bar)) f = Formula::disjunction(f, parse_conjunction());
    return f;
  }

  Formula parse_conjunction() {
    Formula f = parse_unary();
    while (accept(TokenKind::Amp)) f = Formula::conjunction(f, parse_unary());
    return f;
  }

  Formula parse_unary() {
    const Token& t = peek();
    if (t.kind == TokenKind::Identifier && t.text == "not") {
      next();
      return Formula::negation(parse_unary());
    }
    if (t.kind == TokenKind::Bang || t.kind == TokenKind::Question) {
      const bool universal = t.kind == TokenKind::Bang;
      next();
      expect(TokenKind::LBracket, "'['");
      std::vector<Term> vars;
      do {
        if (peek().kind != TokenKind::Variable) fail("expected a variable");
        vars.push_back(make_variable(next()));
      } while (accept(TokenKind::Comma));
      expect(TokenKind::RBracket, "']'");
      expect(TokenKind::Colon, "':'");
      Formula body = parse_unary();
      for (auto it = vars.rbegin(); it != vars.rend(); ++it)
        body = universal ? Formula::forall(*it, body) : Formula::exists(*it, body);
      return body;
    }
    if (t.kind == TokenKind::Minus && peek(1).kind == TokenKind::Identifier) {
      next();
      return parse_atom_after_name("~");
    }
    return parse_primary();
  }

  Formula parse_primary() {
    const Token& t = peek();
    if (t.kind == TokenKind::Identifier && t.text == "true") {
      next();
      return Formula::top();
    }
    if (t.kind == TokenKind::Identifier && t.text == "false") {
      next();
      return Formula::bottom();
    }
    if (t.kind == TokenKind::LBrace) {
      next();
      Formula a = parse_unary();
      if (!a.is_atom() || a.is_comparison_atom()) fail("choice braces must enclose an atom");
      expect(TokenKind::RBrace, "'}'");
      return Formula::disjunction(a, Formula::negation(a));
    }
    // Comparison first; fall back to a parenthesized formula or an atom.
    const std::size_t save = pos_;
    if (auto cmp = try_comparison()) return *cmp;
    pos_ = save;
    if (accept(TokenKind::LParen)) {
      Formula f = options_.allow_arrows ? parse_arrow() : parse_disjunction_checked();
      expect(TokenKind::RParen, "')'");
      return f;
    }
    if (t.kind == TokenKind::Identifier) return parse_atom_after_name("");
    fail("expected a formula");
  }

  std::optional<Formula> try_comparison() {
    try {
      Term lhs = parse_additive();
      std::string op;
      switch (peek().kind) {
        case TokenKind::Less: op = "<"; break;
        case TokenKind::LessEq: op = "<="; break;
        case TokenKind::Greater: op = ">"; break;
        case TokenKind::GreaterEq: op = ">="; break;
        case TokenKind::Equal: op = "="; break;
        case TokenKind::NotEqual: op = "!="; break;
        default: return std::nullopt;
      }
      next();
      Term rhs = parse_additive();
      Formula f = Formula::comparison(op, lhs, rhs);
      const Formula& a = f.is_atom() ? f : f.negated();
      sig_.check_atom(a.predicate(), a.arguments());
      return f;
    } catch (const ParseError&) {
      return std::nullopt;
    }
  }

  Formula parse_atom_after_name(const std::string& prefix) {
    const Token& name = next();
    if (name.kind != TokenKind::Identifier) fail("expected a predicate name");
    check_reserved_predicate(name);
    std::vector<Term> args;
    if (accept(TokenKind::LParen)) {
      do args.push_back(parse_additive());
      while (accept(TokenKind::Comma));
      expect(TokenKind::RParen, "')'");
    }
    const std::string predicate = prefix + name.text;
    try {
      sig_.check_atom(predicate, args);
    } catch (const SignatureError& e) {
      throw ParseError(e.what(), name.line, name.column);
    }
    return Formula::atom(predicate, std::move(args));
  }

  Term parse_additive() {
    Term t = parse_multiplicative();
    while (peek().kind == TokenKind::Plus || peek().kind == TokenKind::Minus) {
      const char op = next().text[0];
      t = Term::arithmetic(op, t, parse_multiplicative());
    }
    return t;
  }

  Term parse_multiplicative() {
    Term t = parse_simple_term();
    while (accept(TokenKind::Star)) t = Term::arithmetic('*', t, parse_simple_term());
    return t;
  }

  Term parse_simple_term() {
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::Variable:
        next();
        return make_variable(t);
      case TokenKind::Integer:
        next();
        return Term::integer(std::stoll(t.text));
      case TokenKind::Minus:
        if (peek(1).kind == TokenKind::Integer) {
          next();
          return Term::integer(-std::stoll(next().text));
        }
        break;
      case TokenKind::LParen: {
        next();
        Term inner = parse_additive();
        expect(TokenKind::RParen, "')'");
        return inner;
      }
      case TokenKind::Identifier: {
        if (t.text == "not") break;
        next();
        if (accept(TokenKind::LParen)) {
          std::vector<Term> args;
          do args.push_back(parse_additive());
          while (accept(TokenKind::Comma));
          expect(TokenKind::RParen, "')'");
          return Term::function(t.text, std::move(args));
        }
        return Term::constant(t.text);
      }
      default:
        break;
    }
    fail("expected a term");
  }

  Term make_variable(const Token& t) {
    if (!options_.allow_reserved && t.text.front() == '_')
      throw ParseError("variable names starting with '_' are reserved", t.line, t.column);
    return Term::variable(t.text, sig_.variable_sort(t.text));
  }

  void check_reserved_predicate(const Token& t) const {
    if (!options_.allow_reserved && t.text.rfind(kAuxPrefix, 0) == 0)
      throw ParseError("predicate names starting with '" + kAuxPrefix + "' are reserved", t.line,
                       t.column);
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  Signature& sig_;
  ParseOptions options_;
};

// Parses one formula; a trailing '.' is optional.
inline Formula parse_formula(std::string_view text, Signature& sig, ParseOptions options = {}) {
  std::string_view body = text;
  while (!body.empty() && std::isspace(static_cast<unsigned char>(body.back()))) body.remove_suffix(1);
  if (!body.empty() && body.back() == '.' && (body.size() < 2 || body[body.size() - 2] != '.'))
    body.remove_suffix(1);
  auto tokens = tokenize(body);
  FormulaParser p(std::move(tokens), sig, options);
  Formula f = p.parse_statement();
  p.expect_end();
  return f;
}

inline Formula parse_formula(std::string_view text) {
  Signature sig = Signature::open_signature();
  return parse_formula(text, sig);
}

}  // namespace f2lp
