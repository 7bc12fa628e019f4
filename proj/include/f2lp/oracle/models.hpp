#pragma once

#include <algorithm>
#include <bit>
#include <iterator>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "f2lp/error.hpp"
#include "f2lp/formula.hpp"
#include "f2lp/interpretation.hpp"
#include "f2lp/oracle/ground.hpp"
#include "f2lp/polarity.hpp"

namespace f2lp::oracle {

// Interpretations as bit masks over a sorted atom list; absent atoms are false.
class ModelSet {
 public:
  ModelSet() = default;
  ModelSet(std::vector<GroundAtom> atoms, std::vector<std::uint64_t> masks)
      : atoms_(std::move(atoms)), masks_(std::move(masks)) {
    normalize();
  }

  const std::vector<GroundAtom>& atoms() const noexcept { return atoms_; }
  const std::vector<std::uint64_t>& masks() const noexcept { return masks_; }
  std::size_t size() const noexcept { return masks_.size(); }
  bool empty() const noexcept { return masks_.empty(); }

  std::set<std::string> model_strings(std::uint64_t mask) const {
    std::set<std::string> out;
    for (std::size_t i = 0; i < atoms_.size(); ++i)
      if (mask >> i & 1U) out.insert(to_string(atoms_[i]));
    return out;
  }

  std::set<std::set<std::string>> as_strings() const {
    std::set<std::set<std::string>> out;
    for (auto m : masks_) out.insert(model_strings(m));
    return out;
  }

  bool contains(const std::set<std::string>& model) const { return as_strings().count(model) != 0; }

  // Restriction to the given predicates.
  ModelSet project(const PredicateSet& sigma) const {
    std::vector<GroundAtom> kept;
    std::vector<std::size_t> from;
    for (std::size_t i = 0; i < atoms_.size(); ++i)
      if (sigma.count(atoms_[i].predicate)) {
        kept.push_back(atoms_[i]);
        from.push_back(i);
      }
    std::vector<std::uint64_t> out;
    for (auto m : masks_) {
      std::uint64_t p = 0;
      for (std::size_t j = 0; j < from.size(); ++j)
        if (m >> from[j] & 1U) p |= std::uint64_t{1} << j;
      out.push_back(p);
    }
    return ModelSet(std::move(kept), std::move(out));
  }

  // Same models over the given (superset) atom list.
  ModelSet widen(const std::vector<GroundAtom>& atoms) const {
    std::vector<std::uint64_t> out;
    std::vector<std::size_t> to;
    for (const auto& a : atoms_) {
      auto it = std::lower_bound(atoms.begin(), atoms.end(), a);
      if (it == atoms.end() || !(*it == a)) throw Error("widen: atom list is not a superset");
      to.push_back(static_cast<std::size_t>(it - atoms.begin()));
    }
    for (auto m : masks_) {
      std::uint64_t w = 0;
      for (std::size_t i = 0; i < to.size(); ++i)
        if (m >> i & 1U) w |= std::uint64_t{1} << to[i];
      out.push_back(w);
    }
    return ModelSet(atoms, std::move(out));
  }

  Interpretation interpretation(std::size_t index, const GroundTask& task) const {
    Interpretation i;
    i.universe = task.universe;
    i.constants = task.constants;
    i.functions = task.functions;
    for (std::size_t k = 0; k < atoms_.size(); ++k)
      if (masks_[index] >> k & 1U) i.add(atoms_[k].predicate, atoms_[k].args);
    return i;
  }

  friend bool operator==(const ModelSet& a, const ModelSet& b) {
    return a.as_strings() == b.as_strings();
  }

 private:
  void normalize() {
    if (atoms_.size() > 64) throw OracleLimitExceeded("model sets are limited to 64 atoms");
    std::vector<std::size_t> order(atoms_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto x, auto y) { return atoms_[x] < atoms_[y]; });
    std::vector<GroundAtom> sorted;
    for (auto i : order) sorted.push_back(atoms_[i]);
    for (auto& m : masks_) {
      std::uint64_t w = 0;
      for (std::size_t j = 0; j < order.size(); ++j)
        if (m >> order[j] & 1U) w |= std::uint64_t{1} << j;
      m = w;
    }
    atoms_ = std::move(sorted);
    std::sort(masks_.begin(), masks_.end());
    masks_.erase(std::unique(masks_.begin(), masks_.end()), masks_.end());
  }

  std::vector<GroundAtom> atoms_;
  std::vector<std::uint64_t> masks_;
};

enum class Semantics { Classical, Stable, Circumscription };

namespace detail {

constexpr std::uint64_t kPatterns[6] = {0xAAAAAAAAAAAAAAAAULL, 0xCCCCCCCCCCCCCCCCULL,
                                        0xF0F0F0F0F0F0F0F0ULL, 0xFF00FF00FF00FF00ULL,
                                        0xFFFF0000FFFF0000ULL, 0xFFFFFFFF00000000ULL};

// Word for variable i in chunk c of a bit-sliced enumeration.
inline std::uint64_t slice(std::size_t i, std::uint64_t chunk) {
  if (i < 6) return kPatterns[i];
  return (chunk >> (i - 6) & 1U) ? ~std::uint64_t{0} : 0;
}

inline std::uint64_t valid_mask(std::size_t vars) {
  return vars >= 6 ? ~std::uint64_t{0} : (std::uint64_t{1} << (std::uint64_t{1} << vars)) - 1;
}

struct Evaluator {
  const GroundFormula& g;
  std::vector<std::uint64_t> values;

  explicit Evaluator(const GroundFormula& formula) : g(formula), values(formula.nodes().size()) {}

  // Classical evaluation; atom_word(atom id) supplies the slices.
  template <class AtomWord>
  std::uint64_t run(AtomWord&& atom_word) {
    const auto& nodes = g.nodes();
    for (std::size_t n = 0; n < nodes.size(); ++n) {
      const auto& nd = nodes[n];
      switch (nd.kind) {
        case GroundFormula::Kind::False: values[n] = 0; break;
        case GroundFormula::Kind::True: values[n] = ~std::uint64_t{0}; break;
        case GroundFormula::Kind::Atom: values[n] = atom_word(nd.a); break;
        case GroundFormula::Kind::And: values[n] = values[nd.a] & values[nd.b]; break;
        case GroundFormula::Kind::Or: values[n] = values[nd.a] | values[nd.b]; break;
        case GroundFormula::Kind::Implies: values[n] = ~values[nd.a] | values[nd.b]; break;
      }
    }
    return values[static_cast<std::size_t>(g.root())];
  }

  // F* evaluation: implications also require their classical value `here`.
  template <class AtomWord>
  std::uint64_t run_star(AtomWord&& atom_word, const std::vector<char>& here) {
    const auto& nodes = g.nodes();
    for (std::size_t n = 0; n < nodes.size(); ++n) {
      const auto& nd = nodes[n];
      switch (nd.kind) {
        case GroundFormula::Kind::False: values[n] = 0; break;
        case GroundFormula::Kind::True: values[n] = ~std::uint64_t{0}; break;
        case GroundFormula::Kind::Atom: values[n] = atom_word(nd.a); break;
        case GroundFormula::Kind::And: values[n] = values[nd.a] & values[nd.b]; break;
        case GroundFormula::Kind::Or: values[n] = values[nd.a] | values[nd.b]; break;
        case GroundFormula::Kind::Implies:
          values[n] = here[n] ? (~values[nd.a] | values[nd.b]) : 0;
          break;
      }
    }
    return values[static_cast<std::size_t>(g.root())];
  }
};

// Fixes atoms asserted or denied by top-level conjuncts until nothing changes.
inline void propagate(GroundFormula& g, std::vector<signed char>& fixed) {
  for (;;) {
    bool changed = false;
    std::vector<int> stack{g.root()};
    while (!stack.empty()) {
      const int n = stack.back();
      stack.pop_back();
      const auto& nd = g.node(n);
      if (nd.kind == GroundFormula::Kind::And) {
        stack.push_back(nd.a);
        stack.push_back(nd.b);
      } else if (nd.kind == GroundFormula::Kind::Atom ||
                 (nd.kind == GroundFormula::Kind::Implies && nd.b == g.falsity() &&
                  g.node(nd.a).kind == GroundFormula::Kind::Atom)) {
        const bool positive = nd.kind == GroundFormula::Kind::Atom;
        auto& v = fixed[static_cast<std::size_t>(positive ? nd.a : g.node(nd.a).a)];
        if (v == (positive ? 0 : 1)) {
          g.set_root(g.falsity());
          return;
        }
        v = positive ? 1 : 0;
        changed = true;
      }
    }
    if (!changed) return;
    std::unordered_map<int, int> memo;
    g.set_root(g.rebuild(g.root(), fixed, memo));
  }
}

}  // namespace detail

// Enumerates the models of a ground formula under the chosen semantics. Atoms of the
// ground formula and the task's declared atoms form the signature of the result.
inline ModelSet enumerate_models(GroundFormula g, const PredicateSet& intensional, Semantics semantics,
                                 const GroundTask& task) {
  // Atoms folded away during grounding are not part of the signature.
  std::vector<char> kept(g.atoms().size(), 0);
  for (int a : g.occurring_atoms()) kept[static_cast<std::size_t>(a)] = 1;
  for (const auto& a : task.declared_atoms()) {
    const auto id = static_cast<std::size_t>(g.atom_id(a));
    if (id >= kept.size()) kept.resize(id + 1, 0);
    kept[id] = 1;
  }
  const std::size_t total = g.atoms().size();
  std::vector<int> slot(total, -1);
  std::vector<GroundAtom> signature;
  for (std::size_t a = 0; a < total; ++a)
    if (kept[a]) {
      slot[a] = static_cast<int>(signature.size());
      signature.push_back(g.atoms()[a]);
    }
  if (signature.size() > 64) throw OracleLimitExceeded("more than 64 ground atoms");
  std::vector<signed char> fixed(total, -1);
  detail::propagate(g, fixed);

  auto minimized = [&](int atom) {
    return semantics != Semantics::Classical &&
           intensional.count(g.atoms()[static_cast<std::size_t>(atom)].predicate) != 0;
  };

  const std::vector<int> relevant = g.occurring_atoms();
  std::vector<int> position(total, -1);
  for (std::size_t i = 0; i < relevant.size(); ++i) position[static_cast<std::size_t>(relevant[i])] = static_cast<int>(i);
  std::vector<int> loose;
  for (std::size_t a = 0; a < total; ++a) {
    if (!kept[a] || fixed[a] >= 0 || position[a] >= 0) continue;
    if (minimized(static_cast<int>(a))) fixed[a] = 0;
    else loose.push_back(static_cast<int>(a));
  }
  const std::size_t k = relevant.size();
  if (k > task.max_atoms)
    throw OracleLimitExceeded(std::to_string(k) + " relevant ground atoms exceed the limit of " +
                              std::to_string(task.max_atoms));
  if (loose.size() > task.max_atoms)
    throw OracleLimitExceeded(std::to_string(loose.size()) + " unconstrained atoms exceed the limit");

  std::vector<std::uint64_t> found;
  detail::Evaluator eval(g);
  detail::Evaluator inner(g);
  std::vector<char> here(g.nodes().size());
  const std::uint64_t chunks = k >= 6 ? (std::uint64_t{1} << (k - 6)) : 1;
  const std::uint64_t valid = detail::valid_mask(k);

  for (std::uint64_t c = 0; c < chunks; ++c) {
    std::uint64_t models = eval.run([&](int atom) -> std::uint64_t {
                             const int i = position[static_cast<std::size_t>(atom)];
                             return i < 0 ? 0 : detail::slice(static_cast<std::size_t>(i), c);
                           }) &
                           valid;
    while (models) {
      const int bit = std::countr_zero(models);
      models &= models - 1;
      const std::uint64_t interpretation = k < 6 ? static_cast<std::uint64_t>(bit) : (c << 6 | static_cast<std::uint64_t>(bit));
      if (semantics != Semantics::Classical) {
        // Intensional atoms true in the model: the sub-extents range over their subsets.
        std::vector<int> shrinkable(k, -1);
        std::size_t width = 0;
        for (std::size_t i = 0; i < k; ++i)
          if ((interpretation >> i & 1U) && minimized(relevant[i])) shrinkable[i] = static_cast<int>(width++);
        bool minimal = true;
        if (width > 0) {
          if (semantics == Semantics::Stable)
            for (std::size_t n = 0; n < here.size(); ++n) here[n] = static_cast<char>(eval.values[n] >> bit & 1U);
          const std::uint64_t sub_chunks = width >= 6 ? (std::uint64_t{1} << (width - 6)) : 1;
          const std::uint64_t sub_valid = detail::valid_mask(width);
          for (std::uint64_t s = 0; s < sub_chunks && minimal; ++s) {
            auto word = [&](int atom) -> std::uint64_t {
              const int i = position[static_cast<std::size_t>(atom)];
              if (i < 0) return 0;
              const int t = shrinkable[static_cast<std::size_t>(i)];
              if (t >= 0) return detail::slice(static_cast<std::size_t>(t), s);
              if (minimized(atom)) return 0;
              return (interpretation >> i & 1U) ? ~std::uint64_t{0} : 0;
            };
            std::uint64_t hit = semantics == Semantics::Stable ? inner.run_star(word, here) : inner.run(word);
            hit &= sub_valid;
            if (s == sub_chunks - 1) hit &= ~(std::uint64_t{1} << ((width >= 6 ? 63 : (std::uint64_t{1} << width) - 1)));
            if (hit) minimal = false;
          }
        }
        if (!minimal) continue;
      }
      found.push_back(interpretation);
    }
  }

  // Widen to all atoms: fixed values, then both values of each loose atom.
  std::vector<std::uint64_t> masks;
  std::uint64_t base = 0;
  auto bit = [&](int atom) { return std::uint64_t{1} << slot[static_cast<std::size_t>(atom)]; };
  for (std::size_t a = 0; a < total; ++a)
    if (kept[a] && fixed[a] == 1) base |= bit(static_cast<int>(a));
  for (auto f : found) {
    std::uint64_t m = base;
    for (std::size_t i = 0; i < k; ++i)
      if (f >> i & 1U) m |= bit(relevant[i]);
    for (std::uint64_t choice = 0; choice < (std::uint64_t{1} << loose.size()); ++choice) {
      std::uint64_t w = m;
      for (std::size_t j = 0; j < loose.size(); ++j)
        if (choice >> j & 1U) w |= bit(loose[j]);
      masks.push_back(w);
    }
  }
  return ModelSet(std::move(signature), std::move(masks));
}

inline ModelSet classical_models(const Formula& f, const GroundTask& task) {
  return enumerate_models(ground(f, task), {}, Semantics::Classical, task);
}

// Models of SM[f; preds].
inline ModelSet sm_models(const Formula& f, const PredicateSet& preds, const GroundTask& task) {
  return enumerate_models(ground(f, task), preds, Semantics::Stable, task);
}

// Models of CIRC[f; preds].
inline ModelSet circ_models(const Formula& f, const PredicateSet& preds, const GroundTask& task) {
  return enumerate_models(ground(f, task), preds, Semantics::Circumscription, task);
}

// F*(u): intensional atoms renamed to their shadows, implications keep their classical copy.
inline Formula star_transform(const Formula& f, const PredicateSet& preds,
                              const std::map<std::string, std::string>& rename = {}) {
  switch (f.op()) {
    case Op::Bottom:
      return f;
    case Op::Atom: {
      if (!preds.count(f.predicate())) return f;
      auto it = rename.find(f.predicate());
      return Formula::atom(it == rename.end() ? f.predicate() + "'" : it->second, f.arguments());
    }
    case Op::And:
    case Op::Or:
      return f.with_children({star_transform(f.left(), preds, rename), star_transform(f.right(), preds, rename)});
    case Op::Implies:
      return Formula::conjunction(
          Formula::implication(star_transform(f.left(), preds, rename), star_transform(f.right(), preds, rename)),
          f);
    case Op::Forall:
    case Op::Exists:
      return f.with_children({star_transform(f.body(), preds, rename)});
  }
  return f;
}

// Interpretations in both sets, over the union of their atoms.
inline ModelSet intersection(const ModelSet& a, const ModelSet& b) {
  std::vector<GroundAtom> all = a.atoms();
  all.insert(all.end(), b.atoms().begin(), b.atoms().end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  const ModelSet wa = a.widen(all);
  const ModelSet wb = b.widen(all);
  std::vector<std::uint64_t> both;
  std::set_intersection(wa.masks().begin(), wa.masks().end(), wb.masks().begin(), wb.masks().end(),
                        std::back_inserter(both));
  return ModelSet(std::move(all), std::move(both));
}

struct SigmaCheck {
  bool equivalent = true;
  // A projected model in exactly one of the two sets.
  std::set<std::string> counterexample;
  bool counterexample_in_first = false;
  explicit operator bool() const noexcept { return equivalent; }
};

inline SigmaCheck sigma_equivalent(const ModelSet& a, const ModelSet& b, const PredicateSet& sigma) {
  const ModelSet pa = a.project(sigma);
  const ModelSet pb = b.project(sigma);
  std::vector<GroundAtom> all = pa.atoms();
  all.insert(all.end(), pb.atoms().begin(), pb.atoms().end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  const ModelSet wa = pa.widen(all);
  const ModelSet wb = pb.widen(all);
  SigmaCheck check;
  for (auto m : wa.masks())
    if (!std::binary_search(wb.masks().begin(), wb.masks().end(), m)) {
      check.equivalent = false;
      check.counterexample = wa.model_strings(m);
      check.counterexample_in_first = true;
      return check;
    }
  for (auto m : wb.masks())
    if (!std::binary_search(wa.masks().begin(), wa.masks().end(), m)) {
      check.equivalent = false;
      check.counterexample = wb.model_strings(m);
      return check;
    }
  return check;
}

// No tuple belongs to both p and ~p.
inline bool coherent(const Interpretation& i) {
  for (const auto& [p, tuples] : i.extents) {
    if (!is_strong_negation(p)) continue;
    auto it = i.extents.find(positive_form(p));
    if (it == i.extents.end()) continue;
    for (const auto& t : tuples)
      if (it->second.count(t)) return false;
  }
  return true;
}

inline bool coherent(const ModelSet& models, std::uint64_t mask) {
  const auto& atoms = models.atoms();
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (!(mask >> i & 1U) || !is_strong_negation(atoms[i].predicate)) continue;
    const GroundAtom pos{positive_form(atoms[i].predicate), atoms[i].args};
    auto it = std::lower_bound(atoms.begin(), atoms.end(), pos);
    if (it != atoms.end() && *it == pos && (mask >> (it - atoms.begin()) & 1U)) return false;
  }
  return true;
}

}  // namespace f2lp::oracle
