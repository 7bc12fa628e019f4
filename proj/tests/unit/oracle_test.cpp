#include <catch_amalgamated.hpp>

#include "support/fixtures.hpp"
#include "support/naive_oracle.hpp"

using namespace f2lp;
using namespace f2lp::oracle;
using fixtures::models;
using fixtures::parse;

namespace {

Formula grounded(const Formula& f, const GroundTask& t) {
  const GroundFormula g = ground(f, t);
  return g.to_formula(g.root());
}

GroundTask over(std::vector<std::string> elements, const std::map<std::string, std::size_t>& preds) {
  auto t = GroundTask::over(std::move(elements));
  for (const auto& [p, n] : preds) t.declare(p, n);
  return t;
}

std::set<std::set<std::string>> answer_set_strings(const GroundProgram& p, bool propagate = true) {
  return answer_sets(p, {22, propagate}).as_strings();
}

}  // namespace

TEST_CASE("grounding expands quantifiers", "[ground]") {
  const auto t1 = over({"a"}, {{"p", 1}});
  CHECK(grounded(parse("![X]:p(X)"), t1) == parse("p(a)"));
  CHECK(grounded(parse("p(a)"), t1) == parse("p(a)"));

  const auto t3 = over({"1", "2", "3"}, {{"p", 1}, {"q", 1}, {"r", 0}, {"s", 0}});
  std::set<std::string> rules;
  for (const auto& r : rulify(grounded(parse(fixtures::kFormula30), t3))) rules.insert(to_string(r));
  std::set<std::string> expected;
  for (int m = 0; m < 8; ++m) {
    std::string body = "r";
    for (int i = 0; i < 3; ++i)
      body += std::string(" & not ") + ((m >> i & 1) ? "q(" : "p(") + std::to_string(i + 1) + ")";
    expected.insert("s <- " + body + ".");
  }
  CHECK(rules.size() == 8);
  std::set<std::set<std::string>> got_bodies, want_bodies;
  auto split = [](const std::string& rule) {
    std::set<std::string> parts;
    const std::string body = rule.substr(5, rule.size() - 6);
    std::size_t at = 0;
    for (std::size_t next; (next = body.find(" & ", at)) != std::string::npos; at = next + 3)
      parts.insert(body.substr(at, next - at));
    parts.insert(body.substr(at));
    return parts;
  };
  for (const auto& r : rules) got_bodies.insert(split(r));
  for (const auto& r : expected) want_bodies.insert(split(r));
  CHECK(got_bodies == want_bodies);
}

TEST_CASE("star transform", "[star]") {
  CHECK(star_transform(parse("p -> q"), {"p", "q"}, {{"p", "u_p"}, {"q", "u_q"}}) ==
        parse("(u_p -> u_q) & (p -> q)"));
  CHECK(star_transform(parse("r"), {"p"}) == parse("r"));
  CHECK(star_transform(Formula::bottom(), {"p"}) == Formula::bottom());
}

TEST_CASE("stable models of the divergence examples", "[sm]") {
  const auto tp = over({"a"}, {{"p", 1}});
  CHECK(sm_models(parse(fixtures::kFormula10), {"p"}, tp).as_strings() == models({{}, {"p(a)"}}));
  CHECK(circ_models(parse(fixtures::kFormula10), {"p"}, tp).as_strings() == models({{}}));
  const auto ta = over({"a"}, {{"p", 1}, {"q", 1}});
  CHECK(sm_models(parse(fixtures::kFormula9), {"p", "q"}, ta).as_strings() == models({{"q(a)"}}));
  CHECK(circ_models(parse(fixtures::kFormula9), {"p", "q"}, ta).as_strings() == models({{"q(a)"}, {"p(a)"}}));

  const auto tab = over({"a", "b"}, {{"p", 1}, {"q", 1}, {"r", 1}});
  CHECK(sm_models(parse(fixtures::kProgram1), {"p", "q", "r"}, tab).as_strings() ==
        models({{"p(a)", "q(b)", "r(a)"}}));

  for (std::size_t n = 1; n <= 3; ++n) {
    auto t = over({"a", "b", "c"}, {{"p", 1}, {"q", 0}});
    t.universe[kDefaultSort].resize(n);
    CHECK(sm_models(parse(fixtures::kExample2), {"q"}, t).empty());
  }
}

TEST_CASE("library and naive oracles agree", "[sm]") {
  const std::map<std::string, std::vector<std::string>> preds{{"p", {"_any"}}, {"q", {"_any"}}};
  const auto t = over({"a", "b"}, {{"p", 1}, {"q", 1}});
  const auto s = naive::Structure::over({"a", "b"});
  for (const char* text : {fixtures::kFormula9, fixtures::kFormula10, fixtures::kFormula11,
                           "![X]:(not q(X) -> p(X)) & ![X]:(not p(X) -> q(X))", "?[X]:(p(X) | q(X))"}) {
    const Formula f = parse(text);
    for (const PredicateSet& ps : {PredicateSet{"p"}, PredicateSet{"q"}, PredicateSet{"p", "q"}}) {
      CHECK(sm_models(f, ps, t).as_strings() == naive::models(f, ps, preds, s, naive::Mode::Stable));
      CHECK(circ_models(f, ps, t).as_strings() == naive::models(f, ps, preds, s, naive::Mode::Circumscription));
    }
    CHECK(classical_models(f, t).as_strings() == naive::models(f, {}, preds, s, naive::Mode::Classical));
  }
}

TEST_CASE("stable models of formula (12) outside circumscription", "[sm]") {
  const auto t = over({"a", "b"}, {{"p", 2}, {"q", 0}});
  const auto sm = sm_models(parse(fixtures::kFormula12), {"p", "q"}, t);
  const auto circ = circ_models(parse(fixtures::kFormula12), {"p", "q"}, t);
  CHECK(sm.contains({"p(a,a)", "p(b,a)"}));
  CHECK_FALSE(circ.contains({"p(a,a)", "p(b,a)"}));
}

TEST_CASE("answer sets of ground programs", "[answer-sets]") {
  using S = GroundProgram::Spec;
  CHECK(answer_set_strings(GroundProgram::from({S{{"p"}, {"p"}, {}, {}, false}})) == models({{}}));
  const auto even = GroundProgram::from({S{{"p"}, {}, {"q"}, {}, false}, S{{"q"}, {}, {"p"}, {}, false}});
  CHECK(answer_set_strings(even) == models({{"p"}, {"q"}}));
  CHECK(answer_set_strings(even, false) == models({{"p"}, {"q"}}));
  const auto prop = propagate_facts(even);
  CHECK(prop.true_atoms.empty());
  CHECK(prop.false_atoms.empty());

  const auto choice = GroundProgram::from({S{{"p"}, {}, {}, {}, true}});
  CHECK(answer_set_strings(choice) == models({{}, {"p"}}));
  const auto dneg = GroundProgram::from({S{{"p"}, {}, {}, {"p"}, false}});
  CHECK(answer_set_strings(dneg) == models({{}, {"p"}}));
  const auto odd = GroundProgram::from({S{{"p"}, {}, {"p"}, {}, false}});
  CHECK(answer_set_strings(odd).empty());
  const auto disj = GroundProgram::from({S{{"p", "q"}, {}, {}, {}, false}});
  CHECK(answer_set_strings(disj) == models({{"p"}, {"q"}}));
}

TEST_CASE("program (1) is decided by propagation", "[answer-sets]") {
  const auto src = translate("p(a). q(b). r(X) :- p(X), not q(X).");
  const GroundProgram g = ground_herbrand(src.program);
  const auto prop = propagate_facts(g);
  std::set<std::string> fixed_true;
  for (const auto& a : prop.true_atoms) fixed_true.insert(to_string(a));
  CHECK(fixed_true == std::set<std::string>{"p(a)", "q(b)", "r(a)"});
  CHECK(prop.residue.rules().empty());
  CHECK(answer_sets(g).as_strings() == models({{"p(a)", "q(b)", "r(a)"}}));

  const auto facts = ground_herbrand(translate("p(a). q(a).").program);
  const auto pf = propagate_facts(facts);
  CHECK(pf.true_atoms.size() == 2);
  CHECK(pf.residue.rules().empty());
}

TEST_CASE("program grounding over a task", "[answer-sets]") {
  auto t = over({"a", "b"}, {{"p", 1}, {"q", 1}});
  const auto prog = translate("q(X) <- not p(X). p(a).").program;
  CHECK(answer_sets(ground_program(prog, t)).as_strings() == models({{"p(a)", "q(b)"}}));
  CHECK(answer_sets(ground_program(prog, t)) ==
        sm_models(fol_representation(prog), {"p", "q"}, t));
}

TEST_CASE("sigma equivalence", "[sigma]") {
  const auto t = over({"a"}, {{"p", 1}, {"q", 0}});
  const auto m = sm_models(parse("q & ![X]:(p(X) | not p(X))"), {"p", "q"}, t);
  CHECK(sigma_equivalent(m, m, {"p", "q"}).equivalent);
  const auto other = sm_models(parse("q"), {"p", "q"}, t);
  CHECK(sigma_equivalent(m, other, {"q"}).equivalent);
  const auto check = sigma_equivalent(m, other, {"p", "q"});
  CHECK_FALSE(check.equivalent);
  CHECK(check.counterexample == std::set<std::string>{"p(a)", "q"});
  CHECK(check.counterexample_in_first);
}

TEST_CASE("coherence of strong negation", "[coherence]") {
  auto bad = Interpretation::over({"f", "s0"});
  bad.add("h", {"f", "s0"});
  bad.add("~h", {"f", "s0"});
  CHECK_FALSE(coherent(bad));
  CHECK(coherent(Interpretation::over({"f"})));

  auto t = GroundTask::over({"f"});
  t.declare("h", 1).declare("~h", 1);
  const auto m = classical_models(parse("h(f) | -h(f)"), t);
  std::size_t incoherent = 0;
  for (auto mask : m.masks()) incoherent += coherent(m, mask) ? 0 : 1;
  CHECK(m.size() == 3);
  CHECK(incoherent == 1);
}

TEST_CASE("oracle refuses oversized tasks", "[limits]") {
  auto t = over({"a", "b", "c", "d", "e"}, {{"p", 2}});
  CHECK_THROWS_AS(sm_models(parse("![X,Y]:(p(X,Y) | not p(X,Y))"), {"p"}, t), OracleLimitExceeded);
}
