#pragma once

#include <set>
#include <string>
#include <vector>

#include "f2lp.hpp"

namespace fixtures {

inline const char* const kProgram1 = "p(a) & q(b) & ![X]:(p(X) & not q(X) -> r(X))";
inline const char* const kCompletion2 =
    "![X]:(p(X) <-> X=a) & ![X]:(q(X) <-> X=b) & ![X]:(r(X) <-> p(X) & not q(X))";
inline const char* const kFormula9 = "![X]:(not p(X) -> q(X))";
inline const char* const kFormula10 = "![X]:(p(X) | not p(X))";
inline const char* const kFormula11 = "p(a) & (?[X]:p(X) -> ?[X]:q(X))";
inline const char* const kFormula12 = "p(a,a) & ?[X]:(p(X,a) -> p(b,X))";
inline const char* const kFormula30 = "r & not ?[X]:(p(X) & q(X)) -> s";
inline const char* const kFormula32 = "(r & not aux_1 -> s) & ![X]:(p(X) & q(X) -> aux_1)";
inline const char* const kFormula34 =
    "![F,T]:(holdsAt(F,T) & not releasedAt(F,T+1) & not ?[E]:(happens(E,T) & terminates(E,F,T)) -> "
    "holdsAt(F,T+1))";
inline const char* const kFormula38 = "((p -> q) -> r) -> p";
inline const char* const kExample2 = "(![X]:p(X) -> q) & not not ?[X]:(q & not p(X))";
inline const char* const kExample2Skolem = "(p(a) -> q) & not not (q & not p(b))";

inline f2lp::Formula parse(const std::string& text) { return f2lp::parse_formula(text); }

inline f2lp::Formula parse_reserved(const std::string& text) {
  auto sig = f2lp::Signature::open_signature();
  return f2lp::parse_formula(text, sig, {true, true});
}

// Paths of the atom occurrences of a predicate, in preorder.
inline std::vector<f2lp::Path> occurrences(const f2lp::Formula& f, const std::string& predicate) {
  std::vector<f2lp::Path> out;
  f2lp::for_each_occurrence(f, [&](const f2lp::Formula& g, const f2lp::Path& path, int) {
    if (g.is_atom() && g.predicate() == predicate) out.push_back(path);
  });
  return out;
}

// Paths of the quantifier occurrences, in preorder.
inline std::vector<f2lp::Path> quantifiers(const f2lp::Formula& f) {
  std::vector<f2lp::Path> out;
  f2lp::for_each_occurrence(f, [&](const f2lp::Formula& g, const f2lp::Path& path, int) {
    if (g.is_quantifier()) out.push_back(path);
  });
  return out;
}

using Strings = std::set<std::set<std::string>>;

inline Strings models(std::initializer_list<std::set<std::string>> items) { return Strings(items); }

}  // namespace fixtures
