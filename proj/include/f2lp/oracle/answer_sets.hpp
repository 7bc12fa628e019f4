#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "f2lp/error.hpp"
#include "f2lp/interpretation.hpp"
#include "f2lp/oracle/ground.hpp"
#include "f2lp/oracle/models.hpp"
#include "f2lp/program.hpp"

namespace f2lp::oracle {

// Atom ids index GroundProgram::atoms.
struct GroundRule {
  std::vector<int> head;
  std::vector<int> pos;
  std::vector<int> neg;
  std::vector<int> dneg;
  bool choice = false;
  friend bool operator==(const GroundRule&, const GroundRule&) = default;
};

class GroundProgram {
 public:
  int atom_id(const GroundAtom& a) {
    auto it = ids_.find(a);
    if (it != ids_.end()) return it->second;
    const int id = static_cast<int>(atoms_.size());
    atoms_.push_back(a);
    ids_.emplace(a, id);
    return id;
  }
  int find_atom(const GroundAtom& a) const {
    auto it = ids_.find(a);
    return it == ids_.end() ? -1 : it->second;
  }
  const std::vector<GroundAtom>& atoms() const noexcept { return atoms_; }
  const GroundAtom& atom(int id) const { return atoms_[static_cast<std::size_t>(id)]; }
  std::vector<GroundRule>& rules() noexcept { return rules_; }
  const std::vector<GroundRule>& rules() const noexcept { return rules_; }

  void add(GroundRule r) {
    for (auto& v : {&r.head, &r.pos, &r.neg, &r.dneg}) {
      std::sort(v->begin(), v->end());
      v->erase(std::unique(v->begin(), v->end()), v->end());
    }
    if (std::find(rules_.begin(), rules_.end(), r) == rules_.end()) rules_.push_back(std::move(r));
  }

  // Convenience for tests: rules written with atom names.
  struct Spec {
    std::vector<std::string> head;
    std::vector<std::string> pos;
    std::vector<std::string> neg;
    std::vector<std::string> dneg;
    bool choice = false;
  };
  static GroundProgram from(const std::vector<Spec>& specs) {
    GroundProgram p;
    auto ids = [&p](const std::vector<std::string>& names) {
      std::vector<int> out;
      for (const auto& n : names) out.push_back(p.atom_id(GroundAtom{n, {}}));
      return out;
    };
    for (const auto& s : specs) p.add({ids(s.head), ids(s.pos), ids(s.neg), ids(s.dneg), s.choice});
    return p;
  }

  std::string to_string(const GroundRule& r) const {
    std::string head;
    for (std::size_t i = 0; i < r.head.size(); ++i) head += (i ? " | " : "") + oracle::to_string(atom(r.head[i]));
    if (r.choice) head = "{" + head + "}";
    std::vector<std::string> body;
    for (int a : r.pos) body.push_back(oracle::to_string(atom(a)));
    for (int a : r.neg) body.push_back("not " + oracle::to_string(atom(a)));
    for (int a : r.dneg) body.push_back("not not " + oracle::to_string(atom(a)));
    std::string b;
    for (std::size_t i = 0; i < body.size(); ++i) b += (i ? ", " : "") + body[i];
    if (b.empty()) return head + ".";
    return head + (head.empty() ? ":- " : " :- ") + b + ".";
  }

 private:
  std::vector<GroundAtom> atoms_;
  std::map<GroundAtom, int> ids_;
  std::vector<GroundRule> rules_;
};

struct Propagation {
  GroundProgram residue;
  std::vector<GroundAtom> true_atoms;
  std::vector<GroundAtom> false_atoms;
  // An empty constraint was derived: there are no answer sets.
  bool inconsistent = false;
};

// Fixes facts true and unsupported atoms false, simplifying to a fixpoint.
inline Propagation propagate_facts(const GroundProgram& p) {
  const std::size_t n = p.atoms().size();
  std::vector<signed char> fixed(n, -1);
  std::vector<GroundRule> rules = p.rules();
  Propagation out;
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<GroundRule> next;
    for (auto r : rules) {
      auto value = [&](int a) { return fixed[static_cast<std::size_t>(a)]; };
      bool drop = false;
      auto prune = [&](std::vector<int>& lits, signed char keep_if, signed char drop_if) {
        std::vector<int> kept;
        for (int a : lits) {
          if (value(a) == drop_if) drop = true;
          else if (value(a) != keep_if) kept.push_back(a);
        }
        lits = std::move(kept);
      };
      prune(r.pos, 1, 0);
      prune(r.neg, 0, 1);
      prune(r.dneg, 1, 0);
      std::vector<int> head;
      for (int a : r.head) {
        if (value(a) == 1 && !r.choice) drop = true;
        if (value(a) == -1) head.push_back(a);
      }
      if (r.choice && head.empty()) drop = true;
      if (drop) {
        changed = true;
        continue;
      }
      if (head.size() != r.head.size()) changed = true;
      r.head = std::move(head);
      const bool empty_body = r.pos.empty() && r.neg.empty() && r.dneg.empty();
      if (empty_body && !r.choice && r.head.empty()) {
        out.inconsistent = true;
        return out;
      }
      if (empty_body && !r.choice && r.head.size() == 1) {
        fixed[static_cast<std::size_t>(r.head[0])] = 1;
        changed = true;
        continue;
      }
      next.push_back(std::move(r));
    }
    rules = std::move(next);
    std::vector<char> supported(n, 0);
    for (const auto& r : rules)
      for (int a : r.head) supported[static_cast<std::size_t>(a)] = 1;
    for (std::size_t a = 0; a < n; ++a)
      if (fixed[a] == -1 && !supported[a]) {
        fixed[a] = 0;
        changed = true;
      }
  }
  for (std::size_t a = 0; a < n; ++a) {
    if (fixed[a] == 1) out.true_atoms.push_back(p.atom(static_cast<int>(a)));
    if (fixed[a] == 0) out.false_atoms.push_back(p.atom(static_cast<int>(a)));
  }
  for (const auto& r : rules) {
    GroundRule g;
    auto map = [&](const std::vector<int>& v) {
      std::vector<int> o;
      for (int a : v) o.push_back(out.residue.atom_id(p.atom(a)));
      return o;
    };
    g.head = map(r.head);
    g.pos = map(r.pos);
    g.neg = map(r.neg);
    g.dneg = map(r.dneg);
    g.choice = r.choice;
    out.residue.add(std::move(g));
  }
  std::sort(out.true_atoms.begin(), out.true_atoms.end());
  std::sort(out.false_atoms.begin(), out.false_atoms.end());
  return out;
}

struct AnswerSetOptions {
  std::size_t max_atoms = 22;
  bool propagate = true;
};

namespace detail {

inline std::uint64_t bits(const std::vector<int>& atoms) {
  std::uint64_t m = 0;
  for (int a : atoms) m |= std::uint64_t{1} << a;
  return m;
}

struct BitRule {
  std::uint64_t head, pos, neg, dneg;
  bool choice;
  bool disjunctive;
};

inline bool body_holds(const BitRule& r, std::uint64_t x) {
  return (r.pos & ~x) == 0 && (r.neg & x) == 0 && (r.dneg & ~x) == 0;
}

// Least model of the definite rules of the reduct.
inline std::uint64_t least_model(const std::vector<BitRule>& rules, std::uint64_t x) {
  std::uint64_t m = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& r : rules) {
      if ((r.neg & x) || (r.dneg & ~x)) continue;
      std::uint64_t h = r.head;
      if (r.choice) h &= x;
      if (!h || (r.pos & ~m) || (m & h) == h) continue;
      m |= h;
      changed = true;
    }
  }
  return m;
}

inline bool reduct_model(const std::vector<BitRule>& rules, std::uint64_t x, std::uint64_t y) {
  for (const auto& r : rules) {
    if ((r.neg & x) || (r.dneg & ~x)) continue;
    std::uint64_t h = r.head;
    if (r.choice) {
      h &= x;
      if (!h) continue;
    }
    if (!h) continue;
    if ((r.pos & ~y) == 0 && (h & y) == 0) return false;
  }
  return true;
}

}  // namespace detail

// Answer sets as sorted atom lists; fixed atoms are folded back in.
inline std::vector<std::vector<GroundAtom>> answer_set_list(const GroundProgram& program,
                                                            AnswerSetOptions options = {}) {
  Propagation prop;
  if (options.propagate) {
    prop = propagate_facts(program);
    if (prop.inconsistent) return {};
  } else {
    prop.residue = program;
  }
  const GroundProgram& p = prop.residue;
  const std::size_t k = p.atoms().size();
  if (k > options.max_atoms || k > 62)
    throw OracleLimitExceeded("answer set enumeration over " + std::to_string(k) + " atoms exceeds the limit of " +
                              std::to_string(options.max_atoms) + "; use an external solver");
  std::vector<detail::BitRule> rules;
  bool disjunctive = false;
  for (const auto& r : p.rules()) {
    rules.push_back({detail::bits(r.head), detail::bits(r.pos), detail::bits(r.neg), detail::bits(r.dneg), r.choice,
                     !r.choice && r.head.size() > 1});
    disjunctive = disjunctive || rules.back().disjunctive;
  }
  std::vector<std::vector<GroundAtom>> out;
  const std::uint64_t total = std::uint64_t{1} << k;
  for (std::uint64_t x = 0; x < total; ++x) {
    bool model = true;
    for (const auto& r : rules)
      if (!r.choice && detail::body_holds(r, x) && (r.head & x) == 0) {
        model = false;
        break;
      }
    if (!model) continue;
    bool minimal;
    if (!disjunctive) {
      minimal = detail::least_model(rules, x) == x;
    } else {
      minimal = true;
      for (std::uint64_t y = x; minimal && y != 0;) {
        y = (y - 1) & x;
        if (detail::reduct_model(rules, x, y)) minimal = false;
      }
    }
    if (!minimal) continue;
    std::vector<GroundAtom> set = prop.true_atoms;
    for (std::size_t i = 0; i < k; ++i)
      if (x >> i & 1U) set.push_back(p.atom(static_cast<int>(i)));
    std::sort(set.begin(), set.end());
    out.push_back(std::move(set));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Answer sets reported over every atom of the program.
inline ModelSet answer_sets(const GroundProgram& program, AnswerSetOptions options = {}) {
  std::vector<GroundAtom> atoms = program.atoms();
  std::sort(atoms.begin(), atoms.end());
  std::vector<std::uint64_t> masks;
  for (const auto& s : answer_set_list(program, options)) {
    std::uint64_t m = 0;
    for (const auto& a : s)
      m |= std::uint64_t{1} << (std::lower_bound(atoms.begin(), atoms.end(), a) - atoms.begin());
    masks.push_back(m);
  }
  return ModelSet(std::move(atoms), std::move(masks));
}

namespace detail {

inline Formula literal_atom_of(const Literal& l) { return l.atom.is_atom() ? l.atom : l.atom.negated(); }

// Native and rule statements of a program in IR form, with domain atoms added to bodies.
inline std::vector<Rule> program_rules(const Program& p) {
  const auto domains = p.domains();
  Signature sig = p.signature;
  std::vector<Rule> out;
  for (const auto& s : p.statements) {
    Rule r;
    if (s.kind == ProgramStatementKind::Rule) r = s.rule;
    else if (s.kind == ProgramStatementKind::Native) r = parse_native_rule(s.text, sig);
    else continue;
    for (const auto& v : rule_variables(r)) {
      auto it = domains.find(v.name());
      if (it == domains.end()) continue;
      for (const auto& d : it->second) r.body.push_back({LiteralKind::Positive, Formula::atom(d, {v})});
    }
    out.push_back(std::move(r));
  }
  return out;
}

inline std::map<std::string, std::string> merged_constants(const Program& p, const GroundTask& task) {
  auto constants = task.constants;
  for (const auto& [k, v] : p.constants())
    if (!constants.count(k)) constants[k] = v;
  return constants;
}

}  // namespace detail

// Grounds over the task's universes; range variables run over their integer bounds.
inline GroundProgram ground_program(const Program& p, const GroundTask& task) {
  GroundProgram out;
  const auto constants = detail::merged_constants(p, task);
  for (const auto& r : detail::program_rules(p)) {
    std::vector<Term> vars;
    for (const auto& v : rule_variables(r)) {
      bool ranged = false;
      for (const auto& range : r.ranges) ranged = ranged || range.variable.name() == v.name();
      if (!ranged) vars.push_back(v);
    }
    Assignment a;
    auto emit = [&]() {
      GroundRule g;
      g.choice = r.choice;
      for (const auto& l : r.body) {
        const Formula atom = detail::literal_atom_of(l);
        Tuple args;
        for (const auto& t : atom.arguments()) args.push_back(evaluate_term(t, a, constants, task.functions));
        if (atom.is_comparison_atom()) {
          bool v = compare_elements(atom.predicate(), args[0], args[1]);
          if (!l.atom.is_atom()) v = !v;
          if (l.kind != LiteralKind::Positive && l.kind != LiteralKind::DoubleNegative) v = !v;
          if (!v) return;
          continue;
        }
        const int id = out.atom_id(GroundAtom{atom.predicate(), std::move(args)});
        (l.kind == LiteralKind::Positive ? g.pos : l.kind == LiteralKind::Negative ? g.neg : g.dneg).push_back(id);
      }
      for (const auto& h : r.head) {
        if (h.is_comparison_atom()) throw EvaluationError("comparison in a rule head");
        Tuple args;
        for (const auto& t : h.arguments()) args.push_back(evaluate_term(t, a, constants, task.functions));
        g.head.push_back(out.atom_id(GroundAtom{h.predicate(), std::move(args)}));
      }
      out.add(std::move(g));
    };
    std::function<void(std::size_t)> ranges = [&](std::size_t i) {
      if (i == r.ranges.size()) return emit();
      const auto lo = as_integer(evaluate_term(r.ranges[i].lower, a, constants, task.functions));
      const auto hi = as_integer(evaluate_term(r.ranges[i].upper, a, constants, task.functions));
      if (!lo || !hi) throw EvaluationError("range bounds must be integers");
      for (long long v = *lo; v <= *hi; ++v) {
        a[r.ranges[i].variable.name()] = std::to_string(v);
        ranges(i + 1);
      }
    };
    std::function<void(std::size_t)> assign = [&](std::size_t i) {
      if (i == vars.size()) return ranges(0);
      for (const auto& e : task.domain(vars[i].sort())) {
        a[vars[i].name()] = e;
        assign(i + 1);
      }
    };
    assign(0);
  }
  return out;
}

namespace detail {

inline std::string element(const Term& t) { return to_string(t); }

// Ground term under constants; arithmetic over integers is evaluated.
inline std::optional<Term> instantiate(const Term& t, const std::map<std::string, Term>& binding,
                                       const std::map<std::string, Term>& constants) {
  switch (t.kind()) {
    case Term::Kind::Variable: {
      auto it = binding.find(t.name());
      if (it == binding.end()) return std::nullopt;
      return it->second;
    }
    case Term::Kind::Integer:
      return t;
    case Term::Kind::Constant: {
      auto it = constants.find(t.name());
      return it == constants.end() ? t : it->second;
    }
    case Term::Kind::Function:
      break;
  }
  std::vector<Term> args;
  for (const auto& a : t.args()) {
    auto g = instantiate(a, binding, constants);
    if (!g) return std::nullopt;
    args.push_back(std::move(*g));
  }
  if (t.is_arithmetic()) {
    if (!args[0].is_integer() || !args[1].is_integer())
      throw EvaluationError("arithmetic on non-integer terms in " + to_string(t));
    const long long x = args[0].value(), y = args[1].value();
    return Term::integer(t.name() == "+" ? x + y : t.name() == "-" ? x - y : x * y);
  }
  return Term::function(t.name(), std::move(args));
}

struct Pending {
  Term pattern;
  Term value;
};

// Matches a pattern against a ground term, binding variables; arithmetic with unbound
// variables is deferred.
inline bool match(const Term& pattern, const Term& value, std::map<std::string, Term>& binding,
                  const std::map<std::string, Term>& constants, std::vector<Pending>& pending) {
  switch (pattern.kind()) {
    case Term::Kind::Variable: {
      auto it = binding.find(pattern.name());
      if (it != binding.end()) return it->second == value;
      binding.emplace(pattern.name(), value);
      return true;
    }
    case Term::Kind::Integer:
      return value.is_integer() && value.value() == pattern.value();
    case Term::Kind::Constant: {
      auto it = constants.find(pattern.name());
      return (it == constants.end() ? pattern : it->second) == value;
    }
    case Term::Kind::Function:
      break;
  }
  if (pattern.is_arithmetic()) {
    if (auto g = instantiate(pattern, binding, constants)) return *g == value;
    pending.push_back({pattern, value});
    return true;
  }
  if (!value.is_function() || value.name() != pattern.name() || value.args().size() != pattern.args().size())
    return false;
  for (std::size_t i = 0; i < pattern.args().size(); ++i)
    if (!match(pattern.args()[i], value.args()[i], binding, constants, pending)) return false;
  return true;
}

struct TermAtom {
  std::string predicate;
  std::vector<Term> args;
  friend auto operator<=>(const TermAtom&, const TermAtom&) = default;
  friend bool operator==(const TermAtom&, const TermAtom&) = default;
};

class BottomUpGrounder {
 public:
  BottomUpGrounder(const Program& p, std::size_t max_atoms) : rules_(program_rules(p)), max_atoms_(max_atoms) {
    for (const auto& [k, v] : p.constants()) {
      auto n = as_integer(v);
      constants_[k] = n ? Term::integer(*n) : Term::constant(v);
    }
  }

  GroundProgram run() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& r : rules_)
        solve(r, [&](const std::map<std::string, Term>& b) {
          for (const auto& h : r.head)
            if (possible_.insert(ground_atom(h, b)).second) {
              changed = true;
              by_predicate_[h.predicate()].push_back(ground_atom(h, b));
              if (possible_.size() > max_atoms_)
                throw OracleLimitExceeded("grounding exceeds " + std::to_string(max_atoms_) + " atoms");
            }
        });
    }
    GroundProgram out;
    for (const auto& r : rules_)
      solve(r, [&](const std::map<std::string, Term>& b) {
        GroundRule g;
        g.choice = r.choice;
        for (const auto& l : r.body) {
          const Formula atom = literal_atom_of(l);
          if (atom.is_comparison_atom()) continue;
          TermAtom t = ground_atom(atom, b);
          const bool possible = possible_.count(t) != 0;
          if (l.kind == LiteralKind::Negative && !possible) continue;
          if (l.kind == LiteralKind::DoubleNegative && !possible) return;
          const int id = out.atom_id(to_ground(t));
          (l.kind == LiteralKind::Positive ? g.pos : l.kind == LiteralKind::Negative ? g.neg : g.dneg).push_back(id);
        }
        for (const auto& h : r.head) g.head.push_back(out.atom_id(to_ground(ground_atom(h, b))));
        out.add(std::move(g));
      });
    return out;
  }

  std::size_t possible_count() const { return possible_.size(); }

 private:
  TermAtom ground_atom(const Formula& a, const std::map<std::string, Term>& b) const {
    TermAtom t{a.predicate(), {}};
    for (const auto& x : a.arguments()) {
      auto g = instantiate(x, b, constants_);
      if (!g) throw EvaluationError("unsafe variable in " + to_string(a));
      t.args.push_back(std::move(*g));
    }
    return t;
  }

  static GroundAtom to_ground(const TermAtom& t) {
    GroundAtom g{t.predicate, {}};
    for (const auto& a : t.args) g.args.push_back(element(a));
    return g;
  }

  bool comparisons_hold(const Rule& r, const std::map<std::string, Term>& b) const {
    for (const auto& l : r.body) {
      const Formula atom = literal_atom_of(l);
      if (!atom.is_comparison_atom()) continue;
      auto x = instantiate(atom.arguments()[0], b, constants_);
      auto y = instantiate(atom.arguments()[1], b, constants_);
      if (!x || !y) throw EvaluationError("unsafe variable in comparison " + to_string(l.atom));
      bool v = compare_elements(atom.predicate(), element(*x), element(*y));
      if (!l.atom.is_atom()) v = !v;
      if (l.kind == LiteralKind::Negative) v = !v;
      if (!v) return false;
    }
    return true;
  }

  template <class F>
  void solve(const Rule& r, F&& yield) {
    std::vector<const Formula*> positives;
    for (const auto& l : r.body)
      if (l.kind == LiteralKind::Positive && l.atom.is_atom() && !l.atom.is_comparison_atom())
        positives.push_back(&l.atom);
    std::map<std::string, Term> binding;
    std::vector<Pending> pending;
    join(r, positives, 0, binding, pending, yield);
  }

  template <class F>
  void join(const Rule& r, const std::vector<const Formula*>& atoms, std::size_t i, std::map<std::string, Term>& b,
            std::vector<Pending>& pending, F& yield) {
    if (i == atoms.size()) return ranges(r, 0, b, pending, yield);
    const Formula& a = *atoms[i];
    auto it = by_predicate_.find(a.predicate());
    if (it == by_predicate_.end()) return;
    const std::vector<TermAtom> candidates = it->second;
    for (const auto& c : candidates) {
      if (c.args.size() != a.arguments().size()) continue;
      auto nb = b;
      auto np = pending;
      bool ok = true;
      for (std::size_t k = 0; ok && k < c.args.size(); ++k) ok = match(a.arguments()[k], c.args[k], nb, constants_, np);
      if (ok) join(r, atoms, i + 1, nb, np, yield);
    }
  }

  template <class F>
  void ranges(const Rule& r, std::size_t i, std::map<std::string, Term>& b, std::vector<Pending>& pending, F& yield) {
    if (i == r.ranges.size()) {
      for (const auto& p : pending) {
        auto g = instantiate(p.pattern, b, constants_);
        if (!g) throw EvaluationError("unsafe variable in " + to_string(p.pattern));
        if (!(*g == p.value)) return;
      }
      if (comparisons_hold(r, b)) yield(b);
      return;
    }
    auto lo = instantiate(r.ranges[i].lower, b, constants_);
    auto hi = instantiate(r.ranges[i].upper, b, constants_);
    if (!lo || !hi || !lo->is_integer() || !hi->is_integer()) throw EvaluationError("range bounds must be integers");
    for (long long v = lo->value(); v <= hi->value(); ++v) {
      auto nb = b;
      nb[r.ranges[i].variable.name()] = Term::integer(v);
      ranges(r, i + 1, nb, pending, yield);
    }
  }

  std::vector<Rule> rules_;
  std::size_t max_atoms_;
  std::map<std::string, Term> constants_;
  std::set<TermAtom> possible_;
  std::map<std::string, std::vector<TermAtom>> by_predicate_;
};

}  // namespace detail

// Herbrand grounding by possible-atom saturation; the program must be safe.
inline GroundProgram ground_herbrand(const Program& p, std::size_t max_atoms = 1000000) {
  return detail::BottomUpGrounder(p, max_atoms).run();
}

}  // namespace f2lp::oracle
