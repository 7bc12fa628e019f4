#include <catch_amalgamated.hpp>

#include "support/fixtures.hpp"
#include "support/naive_oracle.hpp"

using namespace f2lp;
using fixtures::parse;

namespace {

std::string emitted(std::string_view text, EmitOptions options = {}) { return emit(translate(text).program, options); }

Rule native(const std::string& text) {
  auto sig = Signature::open_signature();
  return parse_native_rule(text, sig);
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto at = text.find(needle); at != std::string::npos; at = text.find(needle, at + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("program files split into statements", "[program]") {
  const auto src = parse_program(corpus_text("dec"));
  CHECK(src.extended().size() == 14);
  CHECK(src.native() == std::vector<std::string>{"time(0..maxstep)."});
  const auto dirs = src.directives();
  REQUIRE(dirs.size() == 7);
  CHECK(dirs[0].kind == DirectiveKind::Domain);
  CHECK(dirs[0].name == "fluent");
  CHECK(dirs[0].argument == "F");

  const auto c = parse_program("#const maxstep=11.\np :- q.\n% note\n");
  REQUIRE(c.statements.size() == 3);
  CHECK(c.statements[0].directive.kind == DirectiveKind::Const);
  CHECK(c.statements[0].directive.name == "maxstep");
  CHECK(c.statements[0].directive.argument == "11");
  CHECK(c.statements[1].kind == StatementKind::Native);
  CHECK(c.statements[1].line == 2);
  CHECK(c.statements[2].kind == StatementKind::Comment);
}

TEST_CASE("program files forbid arrows in rules", "[program]") {
  CHECK_THROWS_AS(parse_program("s <- r -> q."), ParseError);
  CHECK_THROWS_AS(parse_program("p(a"), ParseError);
  CHECK_NOTHROW(parse_program("s <- r -> q.", Signature::open_signature(), {true, false}));
}

TEST_CASE("native rules pass through", "[program]") {
  CHECK(emitted("p :- q.") == "p :- q.\n");
  CHECK(emitted("") == "");
  const Rule r = native("p(X) :- q(X), not r(X).");
  REQUIRE(r.head.size() == 1);
  REQUIRE(r.body.size() == 2);
  CHECK(r.body[1].kind == LiteralKind::Negative);
  CHECK(rule_variables(r).size() == 1);
}

TEST_CASE("FOL representation of rules", "[program]") {
  auto sig = Signature::open_signature();
  Program p;
  for (const char* s : {"p(a).", "q(b).", "r(X) :- p(X), not q(X)."}) p.add(parse_native_rule(s, sig));
  CHECK(alpha_equivalent(fol_representation(p), parse(fixtures::kProgram1)));

  Program c;
  c.add(native(":- p(a)."));
  CHECK(fol_representation(c) == parse("not p(a)"));

  Program ch;
  ch.add(native("{q(X)}."));
  CHECK(alpha_equivalent(fol_representation(ch), parse("![X]:(q(X) | not q(X))")));
}

TEST_CASE("head normalization moves negated heads into the body", "[program]") {
  const auto rules = rulify(parse("p(X,Y) -> X=Y | not q(X,Y)"));
  REQUIRE(rules.size() == 1);
  const Rule r = head_normalize(rules[0]);
  CHECK(r.head.empty());
  REQUIRE(r.body.size() == 3);
  CHECK(detail::print_literal(r.body[0]) == "X!=Y");
  CHECK(r.body[1].kind == LiteralKind::DoubleNegative);
  CHECK(emitted("X=Y | not q(X,Y) <- p(X,Y).") == ":- X!=Y, not not q(X,Y), p(X,Y).\n");

  const Rule plain = head_normalize(rulify(parse("q -> p"))[0]);
  CHECK(plain == native("p :- q."));
}

TEST_CASE("negated fact becomes a constraint on the atom", "[program]") {
  const std::string out = emitted("not q(a).");
  CHECK(out == ":- q(a).\n");

  auto t = oracle::GroundTask::over({"a"});
  t.declare("q", 1);
  const auto source = oracle::sm_models(parse("not q(a)"), {"q"}, t);
  const auto translated = oracle::sm_models(fol_representation(translate(out).program), {"q"}, t);
  CHECK(source == translated);
  CHECK(source.as_strings() == fixtures::models({{}}));

  naive::Structure s = naive::Structure::over({"a"});
  const auto alternative = naive::models(parse("not not q(a)"), {"q"}, {{"q", {"_any"}}}, s,
                                         naive::Mode::Stable);
  CHECK(alternative.empty());
}

TEST_CASE("emitter prints the inertia rules", "[emit]") {
  const std::string dec = emitted(corpus_text("dec"));
  CHECK(dec.find("holdsAt(F,T+1) :- holdsAt(F,T), not releasedAt(F,T+1), not aux_1(F,T), T<maxstep.\n") !=
        std::string::npos);
  CHECK(dec.find("aux_1(F,T) :- happens(E,T), terminates(E,F,T).\n") != std::string::npos);
  CHECK(dec.rfind("#domain fluent(F).\n", 0) == 0);
  CHECK(emitted(corpus_text("dec")) == dec);
}

TEST_CASE("directives and domains", "[emit]") {
  CHECK(emitted("#domain d(X). p(X) <- not q(X).") == "#domain d(X).\np(X) :- not q(X).\n");
  CHECK(emitted("#domain d(X). p(X) <- not q(X).", {Dialect::Gringo, DomainMode::Inline}) ==
        "p(X) :- not q(X), d(X).\n");
  const std::string consts = emitted("p :- q.\n#const n=3.\n");
  CHECK(consts.rfind("#const n=3.\n", 0) == 0);
  CHECK_THROWS_AS(parse_dialect("smodels"), EmitError);
  CHECK_THROWS_AS(parse_domain_mode("both"), EmitError);
}

TEST_CASE("lparse has no double negation", "[emit]") {
  const std::string out = emitted("X=Y | not q(X,Y) <- p(X,Y).", {Dialect::Lparse, DomainMode::Directive});
  CHECK(out.find("not not") == std::string::npos);
  CHECK(out == ":- X!=Y, not aux_1(X,Y), p(X,Y).\naux_1(X,Y) :- not q(X,Y), X!=Y, p(X,Y).\n");
  const std::string dec = emitted(corpus_text("dec"), {Dialect::Lparse, DomainMode::Directive});
  CHECK(count(dec, "not not") == 0);
}

TEST_CASE("strong negation adds coherence constraints", "[emit]") {
  const std::string out = emitted("-p(a) <- q.");
  CHECK(out.find("-p(a) :- q.\n") != std::string::npos);
  CHECK(out.find(":- p(_X1), -p(_X1).\n") != std::string::npos);
}
