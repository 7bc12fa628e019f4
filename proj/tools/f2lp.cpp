#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "f2lp/cli.hpp"

namespace {

struct Shared {
  std::vector<std::string> constants;
  std::string preds;
};

void add_input_options(CLI::App* app, f2lp::cli::InvocationConfig& config, Shared& shared) {
  app->add_option("files", config.inputs, "Input files, concatenated in order; stdin when absent");
  app->add_option("--preds", shared.preds, "Intensional predicates, comma separated");
  app->add_flag("--force", config.force, "Translate formulas that are not almost universal");
  app->add_option("--out", config.out, "Write the output to PATH");
}

void add_emit_options(CLI::App* app, f2lp::cli::InvocationConfig& config, Shared& shared) {
  app->add_option("-c", shared.constants, "Constant definition name=value")->allow_extra_args(false);
  app->add_option("--dialect", config.dialect, "Output dialect")->check(CLI::IsMember({"gringo", "lparse"}));
  app->add_option("--domain-mode", config.domain_mode, "Domain declarations as directives or inline atoms")
      ->check(CLI::IsMember({"directive", "inline"}));
  app->add_option("--solve-with", config.solve_with, "Pipe the output into CMD");
}

}  // namespace

int main(int argc, char** argv) {
  f2lp::cli::InvocationConfig config;
  Shared shared;
  CLI::App app{"Translates first-order formulas under the stable model semantics into logic programs"};
  app.require_subcommand(1);

  auto* translate = app.add_subcommand("translate", "Translate formulas and rules into a logic program");
  add_input_options(translate, config, shared);
  add_emit_options(translate, config, shared);

  auto* ec = app.add_subcommand("ec", "Translate an event calculus description");
  add_input_options(ec, config, shared);
  add_emit_options(ec, config, shared);

  auto* check = app.add_subcommand("check", "Classify formulas and print a JSON verdict");
  check->add_option("kind", config.check_kind, "canonical, almost-universal or tight")
      ->required()
      ->check(CLI::IsMember({"canonical", "almost-universal", "tight"}));
  add_input_options(check, config, shared);

  auto* verify = app.add_subcommand("verify", "Compare stable models of the input and its translation");
  verify->add_option("--universe", config.universe, "Universe size")->check(CLI::PositiveNumber);
  add_input_options(verify, config, shared);

  auto* corpus = app.add_subcommand("corpus", "Regenerate the golden outputs of the corpus");
  corpus->add_option("--dir", config.corpus_dir, "Corpus directory");

  CLI11_PARSE(app, argc, argv);
  config.subcommand = app.get_subcommands().front()->get_name();
  try {
    for (const auto& c : shared.constants) config.constants.push_back(f2lp::cli::parse_constant(c));
  } catch (const f2lp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return f2lp::cli::kFailure;
  }
  if (!shared.preds.empty()) config.preds = f2lp::cli::split_list(shared.preds);
  return f2lp::cli::run(config);
}
