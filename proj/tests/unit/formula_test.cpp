#include <catch_amalgamated.hpp>

#include "support/fixtures.hpp"
#include "support/naive_oracle.hpp"

using namespace f2lp;
using fixtures::parse;
using fixtures::parse_reserved;

namespace {

Term var(const std::string& name) { return Term::variable(name); }
Term con(const std::string& name) { return Term::constant(name); }
Formula atom(const std::string& p, std::vector<Term> args = {}) { return Formula::atom(p, std::move(args)); }

}  // namespace

TEST_CASE("parser builds the primitive tree", "[parser]") {
  CHECK(parse("p(a) & q(b)") == Formula::conjunction(atom("p", {con("a")}), atom("q", {con("b")})));
  CHECK(parse("![X]:(p(X) -> q)") ==
        Formula::forall(var("X"), Formula::implication(atom("p", {var("X")}), atom("q"))));
  CHECK(parse("not p") == Formula::negation(atom("p")));
  CHECK(parse("true") == Formula::top());
  CHECK(parse("false") == Formula::bottom());
  CHECK(parse("p <- q") == Formula::implication(atom("q"), atom("p")));
  CHECK(parse("p <-> q") ==
        Formula::conjunction(Formula::implication(atom("p"), atom("q")), Formula::implication(atom("q"), atom("p"))));
  CHECK(parse("X != Y").is_negation());
}

TEST_CASE("parser reads a rule with an existential body", "[parser]") {
  auto sig = Signature::open_signature();
  const Formula f = parse_formula(
      "holdsAt(F,T+1) <- holdsAt(F,T) & not releasedAt(F,T+1) & not ?[E]:(happens(E,T) & terminates(E,F,T))", sig);
  const Formula expected = parse(
      "holdsAt(F,T) & not releasedAt(F,T+1) & not ?[E]:(happens(E,T) & terminates(E,F,T)) -> holdsAt(F,T+1)");
  CHECK(f == expected);
  REQUIRE(f.is_implication());
  CHECK(f.right().predicate() == "holdsAt");
}

TEST_CASE("parser rejects malformed and reserved input", "[parser]") {
  CHECK_THROWS_AS(parse("p(a"), ParseError);
  CHECK_THROWS_AS(parse("p & & q"), ParseError);
  CHECK_THROWS_AS(parse("aux_1 -> p"), ParseError);
  CHECK_NOTHROW(parse_reserved("aux_1 -> p"));
}

TEST_CASE("printing round-trips through the parser", "[parser]") {
  for (const char* text : {fixtures::kProgram1, fixtures::kFormula11, fixtures::kFormula12, fixtures::kFormula34,
                           fixtures::kFormula38, fixtures::kExample2, "-p(a) | not q", "X+1 < Y*2 -> r(X-Y)"}) {
    const Formula f = parse(text);
    CHECK(parse(to_string(f)) == f);
  }
}

TEST_CASE("occurrence polarity counts enclosing antecedents", "[polarity]") {
  const Formula f1 = parse(fixtures::kProgram1);
  const auto qs = fixtures::occurrences(f1, "q");
  REQUIRE(qs.size() == 2);
  CHECK(occurrence_polarity(f1, qs[0]).positive);
  CHECK(occurrence_polarity(f1, qs[0]).strictly_positive);
  CHECK(occurrence_polarity(f1, qs[1]).positive);
  CHECK_FALSE(occurrence_polarity(f1, qs[1]).strictly_positive);

  const Formula neg = parse("not p(X)");
  const auto p1 = fixtures::occurrences(neg, "p").front();
  CHECK_FALSE(occurrence_polarity(neg, p1).positive);
  CHECK_FALSE(occurrence_polarity(neg, p1).strictly_positive);

  const Formula dneg = parse("not not p(X)");
  const auto p2 = fixtures::occurrences(dneg, "p").front();
  CHECK(occurrence_polarity(dneg, p2).positive);
  CHECK_FALSE(occurrence_polarity(dneg, p2).strictly_positive);

  CHECK_THROWS_AS(occurrence_polarity(dneg, Path({1, 0})), PathError);
}

TEST_CASE("negative on a predicate list", "[polarity]") {
  const Formula f9 = parse(fixtures::kFormula9);
  CHECK(is_negative_on(f9, {"p"}));
  CHECK_FALSE(is_negative_on(f9, {"p", "q"}));
  CHECK(is_negative_on(parse("not (p & q(X))"), {"p", "q", "r"}));
}

TEST_CASE("p-negated occurrences", "[polarity]") {
  const Formula f30 = parse(fixtures::kFormula30);
  const auto q30 = fixtures::quantifiers(f30);
  REQUIRE(q30.size() == 1);
  CHECK(is_p_negated(f30, q30[0], {"p", "q", "r", "s"}));
  CHECK(is_p_negated(f30, q30[0], {}));

  const Formula ex2 = parse(fixtures::kExample2);
  const auto qx = fixtures::quantifiers(ex2);
  REQUIRE(qx.size() == 2);
  CHECK(is_p_negated(ex2, qx[0], {"q"}));

  const Formula root = parse("p(a)");
  CHECK_FALSE(is_p_negated(root, Path(), {"p"}));
}

TEST_CASE("substitution avoids capture", "[substitution]") {
  CHECK(substitute(parse("p(X)"), {{"X", con("a")}}) == parse("p(a)"));
  CHECK(substitute(parse("?[X]:p(X)"), {{"X", con("a")}}) == parse("?[X]:p(X)"));

  const Formula r = substitute(parse("![Y]:p(X,Y)"), {{"X", Term::function("f", {var("Y")})}});
  REQUIRE(r.op() == Op::Forall);
  const std::string bound = r.variable().name();
  CHECK(bound != "Y");
  CHECK(r.body() == atom("p", {Term::function("f", {var("Y")}), var(bound)}));
  CHECK(alpha_equivalent(r, parse_reserved("![_Y1]:p(f(Y),_Y1)")));
}

TEST_CASE("classical evaluation", "[interpretation]") {
  auto i = Interpretation::over({"a", "b"});
  i.add("p", {"a"});
  i.add("q", {"b"});
  i.add("r", {"a"});
  const Formula f2 = parse(fixtures::kCompletion2);
  CHECK(classical_eval(i, f2));

  naive::Structure s = naive::Structure::over({"a", "b"});
  CHECK(naive::satisfies(f2, {"p(a)", "q(b)", "r(a)"}, s));
  CHECK_FALSE(naive::satisfies(f2, {"p(a)", "q(b)"}, s));
  i.extents["r"].clear();
  CHECK_FALSE(classical_eval(i, f2));

  CHECK_FALSE(classical_eval(i, Formula::bottom()));
  auto j = Interpretation::over({"a", "b"});
  j.add("p", {"a"});
  CHECK(classical_eval(j, parse("?[X]:p(X)")));
  CHECK_FALSE(classical_eval(j, parse("![X]:p(X)")));
}

TEST_CASE("canonicity reproduces the paper's verdicts", "[classes]") {
  const auto r9 = is_canonical(parse(fixtures::kFormula9), {"p", "q"});
  CHECK_FALSE(r9.verdict);
  REQUIRE_FALSE(r9.witnesses.empty());
  CHECK(r9.witnesses.front().predicate == "p");
  CHECK(r9.witnesses.front().clause == 1);
  CHECK(is_canonical(parse(fixtures::kFormula9), {"q"}).verdict);
  CHECK_FALSE(is_canonical(parse(fixtures::kFormula10), {"p"}).verdict);
  CHECK(is_canonical(parse(fixtures::kFormula11), {"p", "q"}).verdict);
  const auto r12 = is_canonical(parse(fixtures::kFormula12), {"p", "q"});
  CHECK_FALSE(r12.verdict);
  REQUIRE_FALSE(r12.witnesses.empty());
  CHECK(r12.witnesses.front().clause == 2);
  for (const char* text : {fixtures::kFormula9, fixtures::kFormula10, fixtures::kFormula12, fixtures::kExample2})
    CHECK(is_canonical(parse(text), {}).verdict);
}

TEST_CASE("singular quantifier occurrences", "[classes]") {
  const Formula f11 = parse(fixtures::kFormula11);
  const auto q11 = fixtures::quantifiers(f11);
  REQUIRE(q11.size() == 2);
  CHECK(subformula_at(f11, q11[1]).body().predicate() == "q");
  CHECK(is_singular(f11, q11[1]));
  CHECK_FALSE(is_singular(f11, q11[0]));

  const Formula ex2 = parse(fixtures::kExample2);
  CHECK(is_singular(ex2, fixtures::quantifiers(ex2)[0]));
  CHECK_FALSE(is_singular(parse("![X]:p(X)"), Path()));
  CHECK_THROWS_AS(is_singular(parse("p"), Path()), PathError);
}

TEST_CASE("almost universal formulas", "[classes]") {
  CHECK(is_almost_universal(parse(fixtures::kFormula30), {}).verdict);
  CHECK(is_almost_universal(parse(fixtures::kFormula30), {"p", "q", "r", "s"}).verdict);
  CHECK(is_almost_universal(parse(fixtures::kExample2), {"q"}).verdict);
  const auto r = is_almost_universal(parse("?[X]:p(X)"), {"p"});
  CHECK_FALSE(r.verdict);
  REQUIRE(r.witnesses.size() == 1);
  CHECK(r.witnesses.front() == Path());
}

TEST_CASE("dependency graph and tightness", "[classes]") {
  CHECK(dependency_graph(parse(fixtures::kFormula38), {"p"}).edges().empty());
  const auto g1 = dependency_graph(parse(fixtures::kProgram1), {"p", "q", "r"});
  CHECK(g1.edges() == std::set<std::pair<std::string, std::string>>{{"r", "p"}});
  CHECK(g1.is_acyclic());
  CHECK(dependency_graph(parse("p(a)"), {"p"}).edges().empty());

  CHECK(is_tight(parse(fixtures::kProgram1), {"p", "q", "r"}));
  CHECK_FALSE(is_tight(parse("![X]:(p(X) -> p(X))"), {"p"}));
  CHECK(is_tight(parse("p(a)"), {"p"}));
  const auto cyc = dependency_graph(parse("(p -> q) & (q -> p) & (q -> r)"), {"p", "q", "r"});
  CHECK_FALSE(cyc.is_acyclic());
  bool found = false;
  for (const auto& c : cyc.strongly_connected_components()) found = found || c == std::vector<std::string>{"p", "q"};
  CHECK(found);
}

TEST_CASE("Clark normal form and completion", "[classes]") {
  const Formula f1 = parse(fixtures::kProgram1);
  const Formula cnf = to_clark_normal_form(f1, {"p", "q", "r"});
  CHECK(alpha_equivalent(
      cnf, parse_reserved("![X]:(X=a -> p(X)) & ![X]:(X=b -> q(X)) & ![X]:(p(X) & not q(X) -> r(X))")));

  auto task = oracle::GroundTask::over({"a", "b"});
  for (const char* p : {"p", "q", "r"}) task.declare(p, 1);
  CHECK(oracle::classical_models(cnf, task) == oracle::classical_models(f1, task));

  const Formula comp = completion(cnf, {"p", "q", "r"});
  CHECK(oracle::classical_models(comp, task) == oracle::classical_models(parse(fixtures::kCompletion2), task));
  CHECK(oracle::classical_models(comp, task).as_strings() == fixtures::models({{"p(a)", "q(b)", "r(a)"}}));

  CHECK(alpha_equivalent(to_clark_normal_form(cnf, {"p", "q", "r"}), cnf));

  const Formula missing = to_clark_normal_form(parse("p(a) -> q(a)"), {"p", "q"});
  bool has_false_p = false;
  for (const auto& c : conjuncts(missing)) {
    const Formula body = strip_universal_prefix(c);
    has_false_p = has_false_p || (body.is_implication() && body.left().is_bottom() && body.right().predicate() == "p");
  }
  CHECK(has_false_p);

  const Formula empty_def = completion(parse("![X]:(false -> p(X))"), {"p"});
  auto t1 = oracle::GroundTask::over({"a", "b"});
  t1.declare("p", 1);
  CHECK(oracle::classical_models(empty_def, t1).as_strings() == fixtures::models({{}}));
}

TEST_CASE("circumscription to stable models", "[classes]") {
  const Formula f10 = parse(fixtures::kFormula10);
  const Formula g = circ_to_sm(f10, {"p"});
  CHECK(alpha_equivalent(g, parse_reserved("![X]:(not not p(X) | not not not p(X)) & "
                                           "![X]:(p(X) | (p(X) -> ![_C1]:(p(_C1) | not p(_C1))))")));
  for (std::size_t n = 1; n <= 3; ++n) {
    auto task = oracle::GroundTask::over({"a", "b", "c"});
    task.universe[kDefaultSort].resize(n);
    task.declare("p", 1);
    CHECK(oracle::sm_models(g, {"p"}, task) == oracle::circ_models(f10, {"p"}, task));
  }

  const Formula plain = parse("q & r");
  CHECK(circ_to_sm(plain, {"p"}) == Formula::conjunction(plain, plain));
  CHECK_THROWS_AS(circ_to_sm(parse("not (p & q)"), {"p"}), TransformError);
}
