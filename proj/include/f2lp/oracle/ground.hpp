#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "f2lp/error.hpp"
#include "f2lp/formula.hpp"
#include "f2lp/interpretation.hpp"

namespace f2lp::oracle {

struct GroundAtom {
  std::string predicate;
  Tuple args;
  friend bool operator==(const GroundAtom&, const GroundAtom&) = default;
  friend auto operator<=>(const GroundAtom&, const GroundAtom&) = default;
};

inline std::string to_string(const GroundAtom& a) {
  std::string s = is_strong_negation(a.predicate) ? "-" + a.predicate.substr(1) : a.predicate;
  if (a.args.empty()) return s;
  s += "(";
  for (std::size_t i = 0; i < a.args.size(); ++i) s += (i ? "," : "") + a.args[i];
  return s + ")";
}

// A finite structure minus the predicate extents, which the oracle enumerates.
struct GroundTask {
  std::map<std::string, std::vector<std::string>> universe;
  std::map<std::string, std::string> constants;
  std::map<std::string, std::map<Tuple, std::string>> functions;
  // Declared predicates contribute all their ground atoms, occurring or not.
  std::map<std::string, std::vector<std::string>> predicates;
  std::size_t max_atoms = 22;

  static GroundTask over(std::vector<std::string> elements) {
    GroundTask t;
    t.universe[kDefaultSort] = std::move(elements);
    return t;
  }

  GroundTask& declare(const std::string& predicate, std::vector<std::string> sorts) {
    predicates[predicate] = std::move(sorts);
    return *this;
  }
  GroundTask& declare(const std::string& predicate, std::size_t arity) {
    return declare(predicate, std::vector<std::string>(arity, kDefaultSort));
  }

  const std::vector<std::string>& domain(const std::string& sort) const {
    auto it = universe.find(sort);
    if (it == universe.end()) it = universe.find(kDefaultSort);
    if (it == universe.end() || it->second.empty())
      throw EvaluationError("no universe for sort '" + sort + "'");
    return it->second;
  }

  std::vector<GroundAtom> declared_atoms() const {
    std::vector<GroundAtom> out;
    for (const auto& [p, sorts] : predicates) {
      std::vector<Tuple> tuples{Tuple{}};
      for (const auto& s : sorts) {
        std::vector<Tuple> next;
        for (const auto& t : tuples)
          for (const auto& e : domain(s)) {
            Tuple u = t;
            u.push_back(e);
            next.push_back(std::move(u));
          }
        tuples = std::move(next);
      }
      for (auto& t : tuples) out.push_back({p, std::move(t)});
    }
    return out;
  }
};

// Quantifier-free ground formula as a hash-consed DAG; children precede parents.
class GroundFormula {
 public:
  enum class Kind : std::uint8_t { False, True, Atom, And, Or, Implies };
  struct Node {
    Kind kind;
    int a = -1;
    int b = -1;
  };

  GroundFormula() {
    false_ = intern({Kind::False});
    true_ = intern({Kind::True});
    root_ = true_;
  }

  int falsity() const noexcept { return false_; }
  int truth() const noexcept { return true_; }
  int root() const noexcept { return root_; }
  void set_root(int r) noexcept { root_ = r; }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const Node& node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
  const std::vector<GroundAtom>& atoms() const noexcept { return atoms_; }

  int atom_id(const GroundAtom& a) {
    auto it = atom_ids_.find(a);
    if (it != atom_ids_.end()) return it->second;
    const int id = static_cast<int>(atoms_.size());
    atoms_.push_back(a);
    atom_ids_.emplace(a, id);
    return id;
  }
  int find_atom(const GroundAtom& a) const {
    auto it = atom_ids_.find(a);
    return it == atom_ids_.end() ? -1 : it->second;
  }

  int atom(const GroundAtom& a) { return intern({Kind::Atom, atom_id(a)}); }
  int atom(int id) { return intern({Kind::Atom, id}); }

  int conj(int x, int y) {
    if (x == false_ || y == false_) return false_;
    if (x == true_) return y;
    if (y == true_ || x == y) return x;
    return intern({Kind::And, x, y});
  }
  int disj(int x, int y) {
    if (x == true_ || y == true_) return true_;
    if (x == false_) return y;
    if (y == false_ || x == y) return x;
    return intern({Kind::Or, x, y});
  }
  int imp(int x, int y) {
    if (x == false_ || y == true_ || x == y) return true_;
    if (x == true_) return y;
    return intern({Kind::Implies, x, y});
  }
  int neg(int x) { return imp(x, false_); }

  // Atoms occurring under the root.
  std::vector<int> occurring_atoms() const {
    std::vector<char> seen(nodes_.size(), 0);
    std::vector<int> stack{root_};
    std::vector<char> atom_seen(atoms_.size(), 0);
    while (!stack.empty()) {
      const int n = stack.back();
      stack.pop_back();
      if (seen[static_cast<std::size_t>(n)]) continue;
      seen[static_cast<std::size_t>(n)] = 1;
      const Node& nd = node(n);
      if (nd.kind == Kind::Atom) atom_seen[static_cast<std::size_t>(nd.a)] = 1;
      else if (nd.kind >= Kind::And) {
        stack.push_back(nd.a);
        stack.push_back(nd.b);
      }
    }
    std::vector<int> out;
    for (std::size_t i = 0; i < atom_seen.size(); ++i)
      if (atom_seen[i]) out.push_back(static_cast<int>(i));
    return out;
  }

  // Rebuilds the formula under `root` with atoms fixed to constants (-1 keeps the atom).
  int rebuild(int n, const std::vector<signed char>& fixed, std::unordered_map<int, int>& memo) {
    auto it = memo.find(n);
    if (it != memo.end()) return it->second;
    const Node nd = node(n);
    int r = n;
    switch (nd.kind) {
      case Kind::False:
      case Kind::True:
        break;
      case Kind::Atom: {
        const signed char v = fixed[static_cast<std::size_t>(nd.a)];
        r = v < 0 ? n : (v ? true_ : false_);
        break;
      }
      case Kind::And:
        r = conj(rebuild(nd.a, fixed, memo), rebuild(nd.b, fixed, memo));
        break;
      case Kind::Or:
        r = disj(rebuild(nd.a, fixed, memo), rebuild(nd.b, fixed, memo));
        break;
      case Kind::Implies:
        r = imp(rebuild(nd.a, fixed, memo), rebuild(nd.b, fixed, memo));
        break;
    }
    memo.emplace(n, r);
    return r;
  }

  Formula to_formula(int n) const {
    const Node& nd = node(n);
    switch (nd.kind) {
      case Kind::False:
        return Formula::bottom();
      case Kind::True:
        return Formula::top();
      case Kind::Atom: {
        const GroundAtom& a = atoms_[static_cast<std::size_t>(nd.a)];
        std::vector<Term> args;
        for (const auto& e : a.args) {
          auto v = as_integer(e);
          args.push_back(v ? Term::integer(*v) : Term::constant(e));
        }
        return Formula::atom(a.predicate, std::move(args));
      }
      case Kind::And:
        return Formula::conjunction(to_formula(nd.a), to_formula(nd.b));
      case Kind::Or:
        return Formula::disjunction(to_formula(nd.a), to_formula(nd.b));
      case Kind::Implies:
        return Formula::implication(to_formula(nd.a), to_formula(nd.b));
    }
    return Formula::bottom();
  }
  Formula to_formula() const { return to_formula(root_); }

 private:
  int intern(Node n) {
    const std::uint64_t key = (static_cast<std::uint64_t>(n.kind) << 60) ^
                              (static_cast<std::uint64_t>(static_cast<std::uint32_t>(n.a)) << 30) ^
                              static_cast<std::uint64_t>(static_cast<std::uint32_t>(n.b));
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back(n);
    index_.emplace(key, id);
    return id;
  }

  std::vector<Node> nodes_;
  std::unordered_map<std::uint64_t, int> index_;
  std::vector<GroundAtom> atoms_;
  std::map<GroundAtom, int> atom_ids_;
  int false_ = 0;
  int true_ = 1;
  int root_ = 1;
};

namespace detail {

inline int ground_rec(const Formula& f, const GroundTask& task, Assignment& assignment,
                      GroundFormula& out) {
  switch (f.op()) {
    case Op::Bottom:
      return out.falsity();
    case Op::Atom: {
      Tuple args;
      for (const auto& a : f.arguments())
        args.push_back(evaluate_term(a, assignment, task.constants, task.functions));
      if (f.is_comparison_atom())
        return compare_elements(f.predicate(), args[0], args[1]) ? out.truth() : out.falsity();
      return out.atom(GroundAtom{f.predicate(), std::move(args)});
    }
    case Op::And:
      return out.conj(ground_rec(f.left(), task, assignment, out),
                      ground_rec(f.right(), task, assignment, out));
    case Op::Or:
      return out.disj(ground_rec(f.left(), task, assignment, out),
                      ground_rec(f.right(), task, assignment, out));
    case Op::Implies:
      return out.imp(ground_rec(f.left(), task, assignment, out),
                     ground_rec(f.right(), task, assignment, out));
    case Op::Forall:
    case Op::Exists: {
      const std::string& name = f.variable().name();
      auto prev = assignment.find(name);
      std::optional<std::string> saved;
      if (prev != assignment.end()) saved = prev->second;
      const bool universal = f.op() == Op::Forall;
      int acc = universal ? out.truth() : out.falsity();
      for (const auto& e : task.domain(f.variable().sort())) {
        assignment[name] = e;
        const int g = ground_rec(f.body(), task, assignment, out);
        acc = universal ? out.conj(acc, g) : out.disj(acc, g);
      }
      if (saved) assignment[name] = *saved; else assignment.erase(name);
      return acc;
    }
  }
  return out.falsity();
}

}  // namespace detail

// Expands quantifiers over the task's universes and evaluates terms and comparisons;
// free variables are taken from the assignment.
inline GroundFormula ground(const Formula& f, const GroundTask& task, Assignment assignment = {}) {
  GroundFormula out;
  out.set_root(detail::ground_rec(f, task, assignment, out));
  return out;
}

}  // namespace f2lp::oracle
