#include <catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "support/fixtures.hpp"

using namespace f2lp;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(cli::InvocationConfig config, const std::string& stdin_text = "") {
  std::istringstream in(stdin_text);
  std::ostringstream out, err;
  const int code = cli::run(config, in, out, err);
  return {code, out.str(), err.str()};
}

cli::InvocationConfig config(const std::string& subcommand, std::vector<std::string> preds = {}) {
  cli::InvocationConfig c;
  c.subcommand = subcommand;
  if (!preds.empty()) c.preds = preds;
  return c;
}

std::string temp_file(const std::string& name, const std::string& content) {
  const fs::path dir = fs::temp_directory_path() / "f2lp_cli_test";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream(p) << content;
  return p.string();
}

Outcome shell(const std::string& args) {
  const std::string command = std::string(F2LP_CLI) + " " + args + " 2>&1";
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buffer[4096];
  while (std::size_t n = fread(buffer, 1, sizeof buffer, pipe)) out.append(buffer, n);
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), out, ""};
}

}  // namespace

TEST_CASE("translate reads stdin and writes the program", "[cli]") {
  const auto r = invoke(config("translate"), "s <- r & not ?[X]:(p(X) & q(X)).\n");
  CHECK(r.code == cli::kOk);
  CHECK(r.out == "s :- r, not aux_1.\naux_1 :- p(X), q(X).\n");
  CHECK(r.err.empty());
}

TEST_CASE("translate concatenates files and applies constants", "[cli]") {
  auto c = config("translate");
  c.inputs = {temp_file("a.lp", "#const n=2.\np(1..n).\n"), temp_file("b.lp", "q(X) <- p(X).\n")};
  c.constants = {{"n", "5"}};
  const auto r = invoke(c);
  CHECK(r.code == cli::kOk);
  CHECK(r.out == "#const n=5.\np(1..n).\nq(X) :- p(X).\n");
}

TEST_CASE("translate reports parse errors with file positions", "[cli]") {
  auto c = config("translate");
  c.inputs = {temp_file("ok.lp", "p.\n"), temp_file("bad.lp", "q.\nr(a <- p.\n")};
  const auto r = invoke(c);
  CHECK(r.code == cli::kFailure);
  CHECK(r.err.find("bad.lp:2:5:") != std::string::npos);
  CHECK(r.err.find("error:") != std::string::npos);
}

TEST_CASE("translate exits 2 on formulas that are not almost universal", "[cli]") {
  auto c = config("translate");
  c.inputs = {temp_file("e.lp", "p.\n?[X]:q(X) <- p.\n")};
  const auto r = invoke(c);
  CHECK(r.code == cli::kNotAlmostUniversal);
  CHECK(r.err.find("e.lp:2") != std::string::npos);
  c.force = true;
  const auto forced = invoke(c);
  CHECK(forced.code == cli::kOk);
  CHECK(forced.err.find("warning:") == 0);
}

TEST_CASE("translate honors the intensional list", "[cli]") {
  const auto r = invoke(config("translate", {"q"}), "#domain d(X).\nq(X) <- p(X).\n");
  CHECK(r.code == cli::kOk);
  CHECK(r.out == "#domain d(X).\nq(X) :- p(X).\n{p(_X1)} :- d(_X1).\n");
  CHECK(invoke(config("translate", {"aux_1"}), "p.\n").code == cli::kFailure);
  CHECK(invoke(config("translate", {"zz"}), "p.\n").code == cli::kFailure);
}

TEST_CASE("check canonical reports a verdict", "[cli]") {
  auto c = config("check", {"p", "q"});
  c.check_kind = "canonical";
  const auto yes = invoke(c, std::string(fixtures::kFormula11) + ".\n");
  REQUIRE(yes.code == cli::kOk);
  const auto j = nlohmann::json::parse(yes.out);
  CHECK(j["verdict"] == true);
  CHECK(j["witnesses"].empty());

  auto p = config("check", {"p"});
  p.check_kind = "canonical";
  const auto no = nlohmann::json::parse(invoke(p, std::string(fixtures::kFormula12) + ".\n").out);
  CHECK(no["verdict"] == false);
  REQUIRE(no["witnesses"].size() >= 1);
  CHECK(no["witnesses"][0]["location"] == "<stdin>:1");
  CHECK(no["witnesses"][0]["clause"] == 2);
}

TEST_CASE("check almost-universal and tight", "[cli]") {
  auto c = config("check", {"p"});
  c.check_kind = "almost-universal";
  const auto j = nlohmann::json::parse(invoke(c, "?[X]:p(X).\n").out);
  CHECK(j["verdict"] == false);
  CHECK(j["witnesses"][0]["quantifier"] == "?[X]:p(X)");

  auto t = config("check", {"p", "q"});
  t.check_kind = "tight";
  const auto loop = nlohmann::json::parse(invoke(t, "p <- q.\nq <- p.\n").out);
  CHECK(loop["verdict"] == false);
  CHECK(loop["witnesses"][0]["cycle"] == std::vector<std::string>{"p", "q"});
  const auto acyclic = nlohmann::json::parse(invoke(t, "p <- not q.\n").out);
  CHECK(acyclic["verdict"] == true);

  auto bad = config("check");
  bad.check_kind = "shiny";
  CHECK(invoke(bad, "p.\n").code == cli::kFailure);
}

TEST_CASE("verify compares input and translation", "[cli]") {
  auto c = config("verify", {"p", "q", "r", "s"});
  c.universe = 3;
  const auto r = invoke(c, std::string(fixtures::kFormula30) + ".\n");
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find("universe {1,2,3}:") == 0);
  CHECK(r.out.find("PASS\n") != std::string::npos);

  auto f = config("verify", {"p"});
  f.universe = 2;
  f.force = true;
  const auto fail = invoke(f, "?[X]:p(X).\n");
  CHECK(fail.code == cli::kFailure);
  CHECK(fail.out.find("FAIL: {") != std::string::npos);

  auto big = config("verify", {"p"});
  big.universe = 6;
  CHECK(invoke(big, "![X,Y]:(p(X,Y) | not p(X,Y)).\n").code == cli::kOracleLimit);
}

TEST_CASE("corpus writes golden files", "[cli]") {
  const fs::path dir = fs::temp_directory_path() / "f2lp_cli_corpus";
  fs::remove_all(dir);
  fs::create_directories(dir);
  for (const auto& name : corpus_names()) fs::copy_file(corpus_path(name), dir / (name + ".f2lp"));
  auto c = config("corpus");
  c.corpus_dir = dir.string();
  const auto r = invoke(c);
  CHECK(r.code == cli::kOk);
  for (const auto& name : corpus_names()) {
    CHECK(read_file(cli::golden_path(name, dir.string())) == cli::golden_text(name));
  }
}

TEST_CASE("constant and list arguments", "[cli]") {
  CHECK(cli::parse_constant("maxstep=11") == std::pair<std::string, std::string>{"maxstep", "11"});
  CHECK_THROWS_AS(cli::parse_constant("maxstep"), Error);
  CHECK_THROWS_AS(cli::parse_constant("maxstep=x"), Error);
  CHECK(cli::split_list("p, q,r") == std::vector<std::string>{"p", "q", "r"});
}

TEST_CASE("command line binary", "[cli]") {
  const std::string f11 = temp_file("f11.txt", std::string(fixtures::kFormula11) + ".\n");
  const auto check = shell("check canonical --preds p,q " + f11);
  CHECK(check.code == 0);
  CHECK(nlohmann::json::parse(check.out)["verdict"] == true);

  const std::string f30 = temp_file("f30.txt", std::string(fixtures::kFormula30) + ".\n");
  const auto verify = shell("verify --universe 3 --preds p,q,r,s " + f30);
  CHECK(verify.code == 0);
  CHECK(verify.out.find("PASS") != std::string::npos);

  const std::string out = (fs::temp_directory_path() / "f2lp_cli_test" / "out.lp").string();
  const auto tr = shell("translate " + corpus_path("dec") + " " + corpus_path("robby") + " -c maxstep=11 --out " + out);
  CHECK(tr.code == 0);
  const std::string text = read_file(out);
  CHECK(text.rfind("#const maxstep=11.\n", 0) == 0);
  CHECK(shell("translate --dialect nope " + f11).code != 0);
  CHECK(shell("bogus").code != 0);
}
