#include <catch_amalgamated.hpp>

#include "support/fixtures.hpp"

using namespace f2lp;
using fixtures::parse;

namespace {

Program concat(const Program& a, const Program& b) {
  Program out = a;
  for (const auto& s : b.statements) out.statements.push_back(s);
  return out;
}

std::set<std::string> atoms_of(const oracle::ModelSet& m, const std::string& predicate) {
  std::set<std::string> out;
  for (const auto& model : m.as_strings())
    for (const auto& a : model)
      if (a.rfind(predicate + "(", 0) == 0) out.insert(a);
  return out;
}

}  // namespace

TEST_CASE("f2lp on formula (30)", "[f2lp]") {
  const auto t = f2lp::f2lp(parse(fixtures::kFormula30), {"p", "q", "r", "s"});
  CHECK(emit(t.program) == "s :- r, not aux_1.\naux_1 :- p(X), q(X).\n");
  CHECK(t.warnings.empty());
}

TEST_CASE("f2lp adds choice rules for extensional predicates", "[f2lp]") {
  auto sig = Signature::open_signature();
  sig.declare_predicate("p", {"elem"});
  const auto t = f2lp::f2lp(parse("![X]:(p(X) -> q(X))"), {"q"}, sig);
  CHECK(emit(t.program) == "q(X) :- p(X).\n{p(_X1)} :- elem(_X1).\n");
}

TEST_CASE("f2lp without quantifiers is rulification", "[f2lp]") {
  const Formula f = parse("(p -> q) & r -> s");
  const auto t = f2lp::f2lp(f, {"p", "q", "r", "s"});
  std::vector<Rule> expected;
  for (const auto& r : rulify(f)) expected.push_back(head_normalize(r));
  CHECK(t.program.rules() == expected);
}

TEST_CASE("f2lp refuses singular quantifiers unless forced", "[f2lp]") {
  CHECK_THROWS_AS(f2lp::f2lp(parse("?[X]:p(X)"), {"p"}), NotAlmostUniversal);
  const auto forced = f2lp::f2lp(parse("?[X]:p(X)"), {"p"}, Signature::open_signature(), {true, {}});
  CHECK(forced.warnings.size() == 1);
  CHECK(emit(forced.program) == ":- not aux_1.\naux_1 :- p(X).\n");
  try {
    translate("p.\n?[X]:r(X) <- q.\n");
    FAIL("expected an exception");
  } catch (const NotAlmostUniversal& e) {
    CHECK(std::string(e.what()).rfind("line 2:", 0) == 0);
  }
}

TEST_CASE("translation of the inertia axiom", "[f2lp]") {
  auto sig = Signature::open_signature();
  const auto t = f2lp::f2lp(parse(fixtures::kFormula34), {"holdsAt"}, sig);
  Program rules;
  std::map<std::string, std::size_t> choices;
  for (const auto& r : t.program.rules()) {
    if (r.choice) choices[r.head[0].predicate()] = r.head[0].arguments().size();
    else rules.add(r);
  }
  CHECK(choices == std::map<std::string, std::size_t>{{"happens", 2}, {"releasedAt", 2}, {"terminates", 3}});
  const std::string out = emit(rules);
  CHECK(out.find("holdsAt(F,T+1) :- holdsAt(F,T), not releasedAt(F,T+1), not aux_1(F,T).\n") == 0);
  CHECK(out.find("aux_1(F,T) :- happens(E,T), terminates(E,F,T).\n") != std::string::npos);
}

TEST_CASE("EC2ASP double-negates minimized atoms in definitions", "[ec]") {
  const Formula cc1 = parse("started(F,T) <-> holdsAt(F,T) | ?[E]:(happens(E,T) & initiates(E,F,T))");
  const PredicateSet minimized{"initiates", "terminates", "releases", "happens"};
  CHECK(xi_prime(cc1, minimized) ==
        parse("holdsAt(F,T) | ?[E]:(not not happens(E,T) & not not initiates(E,F,T)) -> started(F,T)"));
  CHECK(xi_prime(parse("happens(E,T) -> holdsAt(F,T)"), minimized) ==
        parse("happens(E,T) -> holdsAt(F,T)"));
  CHECK(xi_prime(parse("holdsAt(F,T) -> happens(e,T)"), minimized) ==
        parse("holdsAt(F,T) -> not not happens(e,T)"));

  const auto d = EventCalculusDescription::parse(
      "#domain fluent(F).\n#domain time(T).\n#domain event(E).\n%xi\n"
      "started(F,T) <-> holdsAt(F,T) | ?[E]:(happens(E,T) & initiates(E,F,T)).\n");
  CHECK(d.defined_predicates() == PredicateSet{"started"});
  const std::string out = emit(ec2asp(d).program);
  CHECK(out.find("started(F,T) :- holdsAt(F,T).\n") != std::string::npos);
  CHECK(out.find("started(F,T) :- not not initiates(E,F,T), not not happens(E,T).\n") != std::string::npos);
  CHECK(out.find("{holdsAt(_X1,_X2)} :- fluent(_X1), time(_X2).\n") != std::string::npos);
}

TEST_CASE("EC2ASP with empty delta and theta", "[ec]") {
  const auto d = EventCalculusDescription::parse(
      "#domain fluent(F).\n#domain time(T).\n%sigma\ninitiates(e,F,T).\n%xi\nholdsAt(F,T) <- happens(e,T).\n");
  CHECK(d.delta().empty());
  CHECK(d.theta().empty());
  const std::string out = emit(ec2asp(d).program);
  CHECK(out == "#domain fluent(F).\n#domain time(T).\ninitiates(e,F,T).\nholdsAt(F,T) :- happens(e,T).\n"
               "{holdsAt(_X1,_X2)} :- fluent(_X1), time(_X2).\n");
}

TEST_CASE("EC2ASP rejects non-canonical sections", "[ec]") {
  const auto d = EventCalculusDescription::from({parse("not initiates(e,f,0) -> initiates(e,g,0)")}, {}, {}, {});
  CHECK_THROWS_AS(ec2asp(d), CanonicityViolation);
  try {
    ec2asp(d);
  } catch (const CanonicityViolation& e) {
    CHECK(e.section() == "sigma");
    CHECK_FALSE(e.report().verdict);
  }
}

TEST_CASE("EC2ASP reads section markers", "[ec]") {
  const auto d = EventCalculusDescription::parse(
      "%sigma\ninitiates(e,f,T).\n%delta\nhappens(e,0).\n%theta\nab(T) <- happens(e,T).\n%xi\n"
      "holdsAt(f,T) <- happens(e,T) & not ab(T).\n");
  CHECK(d.sigma().size() == 1);
  CHECK(d.delta().size() == 1);
  CHECK(d.theta().size() == 1);
  CHECK(d.xi().size() == 1);
  CHECK(d.ab_predicates() == PredicateSet{"ab"});
  CHECK(d.minimized_predicates().count("ab"));
}

TEST_CASE("situation domain rules", "[situation]") {
  CHECK(emit(sit_domain(2)) ==
        "#const maxdepth=2.\n"
        "nesting(0,s0).\n"
        "nesting(L+1,do(A,S)) :- nesting(L,S), action(A), L<maxdepth.\n"
        "situation(S) :- nesting(L,S).\n"
        "final(S) :- nesting(maxdepth,S).\n");
  CHECK(emit(executable_rules()) ==
        "executable(s0).\n"
        "executable(do(A,S)) :- executable(S), poss(A,S), not final(S), situation(S), action(A).\n");
  CHECK_THROWS_AS(sit_domain(-1), TransformError);

  const auto models = oracle::answer_sets(oracle::ground_herbrand(concat(sit_domain(1), executable_rules())));
  REQUIRE(models.size() == 1);
  CHECK(atoms_of(models, "executable") == std::set<std::string>{"executable(s0)"});

  const auto two = oracle::ground_herbrand(
      concat(concat(sit_domain(2), translate("action(a). action(b).").program), executable_rules()));
  CHECK(atoms_of(oracle::answer_sets(two), "situation").size() == 7);
}

TEST_CASE("successor state axioms", "[situation]") {
  SituationVocabulary v;
  const Term y = Term::variable("Y");
  EffectAxiomSet e;
  e.fluents.push_back(
      {Term::function("broken", {y}),
       {parse("A=drop(R,Y) & h(fragile(Y),S)"), parse("A=explode(B) & h(nexto(B,Y),S)")},
       {parse("A=repair(R,Y)")}});
  e.fluents.push_back({Term::constant("f"), {}, {}});
  e.actions.push_back({Term::function("drop", {Term::variable("R"), y}), {parse("h(holding(R,Y),S)")}});
  const auto ssa = derive_ssa(e);
  REQUIRE(ssa.successor_state.size() == 2);
  CHECK(alpha_equivalent(
      ssa.successor_state[0],
      universal_closure(parse("h(broken(Y),do(A,S)) <-> ?[R]:(A=drop(R,Y) & h(fragile(Y),S)) | "
                              "?[B]:(A=explode(B) & h(nexto(B,Y),S)) | "
                              "h(broken(Y),S) & not ?[R]:A=repair(R,Y)"))));
  CHECK(alpha_equivalent(ssa.successor_state[1],
                         universal_closure(parse("h(f,do(A,S)) <-> false | h(f,S) & not false"))));
  REQUIRE(ssa.action_precondition.size() == 1);
  CHECK(alpha_equivalent(ssa.action_precondition[0],
                         universal_closure(parse("poss(drop(R,Y),S) <-> h(holding(R,Y),S)"))));
  CHECK(ssa.provisos.size() == 2);
  CHECK(v.successor() == Term::function("do", {Term::variable("A"), Term::variable("S")}));
}

TEST_CASE("inertia and exogenous initial values", "[situation]") {
  const auto axioms = inertia_and_exogenous({Term::variable("F")});
  REQUIRE(axioms.size() == 3);
  CHECK(axioms[0] == universal_closure(parse("h(F,S) & not -h(F,do(A,S)) -> h(F,do(A,S))")));
  CHECK(axioms[1] == universal_closure(parse("-h(F,S) & not h(F,do(A,S)) -> -h(F,do(A,S))")));
  CHECK(axioms[2] == universal_closure(parse("h(F,s0) | -h(F,s0)")));
  CHECK(inertia_and_exogenous({}).empty());
  const auto ground = inertia_and_exogenous({Term::constant("f")});
  CHECK(ground[2] == parse("h(f,s0) | -h(f,s0)"));
}

TEST_CASE("corpus files translate", "[corpus]") {
  for (const auto& name : corpus_names()) {
    const std::string text = emit(translate(corpus_text(name)).program);
    CHECK_FALSE(text.empty());
    CHECK(emit(translate(corpus_text(name)).program) == text);
  }
  CHECK(corpus_names().size() == 4);
  CHECK_THROWS_AS(corpus_text("missing"), Error);
}
