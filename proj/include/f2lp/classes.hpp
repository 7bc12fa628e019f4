#pragma once

#include <string>
#include <utility>
#include <vector>

#include "f2lp/error.hpp"
#include "f2lp/formula.hpp"
#include "f2lp/polarity.hpp"

namespace f2lp {

struct CanonicityWitness {
  std::string predicate;
  Path path;
  int clause = 1;
  friend bool operator==(const CanonicityWitness&, const CanonicityWitness&) = default;
};

struct CanonicityReport {
  bool verdict = true;
  std::vector<CanonicityWitness> witnesses;
  explicit operator bool() const noexcept { return verdict; }
};

namespace detail {

// scoped: some strictly positive Exists/Or lies on the path above.
inline void canonical_walk(const Formula& f, const PredicateSet& preds, Path& path, int depth,
                           bool scoped, CanonicityReport& report) {
  if (f.is_atom()) {
    if (!preds.count(f.predicate())) return;
    if (depth >= 2) report.witnesses.push_back({f.predicate(), path, 1});
    else if (scoped && depth > 0) report.witnesses.push_back({f.predicate(), path, 2});
    return;
  }
  const bool opens = depth == 0 && (f.op() == Op::Exists || f.is_or());
  for (std::size_t i = 0; i < f.child_count(); ++i) {
    Path next = path.child(i);
    const int d = depth + (f.is_implication() && i == 0 ? 1 : 0);
    canonical_walk(f.child(i), preds, next, d, scoped || opens, report);
  }
}

}  // namespace detail

inline CanonicityReport is_canonical(const Formula& f, const PredicateSet& preds) {
  CanonicityReport report;
  Path root;
  detail::canonical_walk(f, preds, root, 0, false, report);
  report.verdict = report.witnesses.empty();
  return report;
}

// Positive Exists or negative Forall.
inline bool is_singular(const Formula& f, const Path& at) {
  const Formula& g = subformula_at(f, at);
  if (!g.is_quantifier()) throw PathError("no quantifier at " + at.to_string());
  const bool positive = occurrence_polarity(f, at).positive;
  return g.op() == Op::Exists ? positive : !positive;
}

struct AlmostUniversalReport {
  bool verdict = true;
  std::vector<Path> witnesses;
  explicit operator bool() const noexcept { return verdict; }
};

inline AlmostUniversalReport is_almost_universal(const Formula& f, const PredicateSet& preds) {
  AlmostUniversalReport report;
  for_each_occurrence(f, [&](const Formula& g, const Path& path, int depth) {
    if (!g.is_quantifier()) return;
    const bool positive = depth % 2 == 0;
    const bool singular = g.op() == Op::Exists ? positive : !positive;
    if (singular && !is_p_negated(f, path, preds)) report.witnesses.push_back(path);
  });
  report.verdict = report.witnesses.empty();
  return report;
}

class NotAlmostUniversal : public Error {
 public:
  explicit NotAlmostUniversal(std::vector<Path> witnesses)
      : Error(describe(witnesses)), witnesses_(std::move(witnesses)) {}
  NotAlmostUniversal(std::vector<Path> witnesses, const std::string& message)
      : Error(message), witnesses_(std::move(witnesses)) {}

  const std::vector<Path>& witnesses() const noexcept { return witnesses_; }

 private:
  static std::string describe(const std::vector<Path>& witnesses) {
    std::string s = "formula is not almost universal; singular quantifier not negated at";
    for (const auto& w : witnesses) s += " " + w.to_string();
    return s;
  }
  std::vector<Path> witnesses_;
};

}  // namespace f2lp
