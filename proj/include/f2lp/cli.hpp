#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "f2lp/classes.hpp"
#include "f2lp/dependency.hpp"
#include "f2lp/emit.hpp"
#include "f2lp/error.hpp"
#include "f2lp/oracle/models.hpp"
#include "f2lp/pipelines.hpp"
#include "f2lp/program.hpp"

namespace f2lp::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kNotAlmostUniversal = 2, kOracleLimit = 3 };

struct InvocationConfig {
  // translate, ec, check, verify or corpus.
  std::string subcommand;
  // canonical, almost-universal or tight.
  std::string check_kind;
  std::vector<std::string> inputs;
  std::optional<std::vector<std::string>> preds;
  std::vector<std::pair<std::string, std::string>> constants;
  std::string dialect = "gringo";
  std::string domain_mode = "directive";
  std::size_t universe = 3;
  bool force = false;
  std::string out;
  std::string solve_with;
  std::string corpus_dir = F2LP_CORPUS_DIR;
};

// Splits "name=value"; the value must be an integer.
inline std::pair<std::string, std::string> parse_constant(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == text.size())
    throw Error("constant '" + text + "' is not of the form name=value");
  std::string name = text.substr(0, eq);
  std::string value = text.substr(eq + 1);
  std::size_t start = value.front() == '-' ? 1 : 0;
  if (start == value.size() || value.find_first_not_of("0123456789", start) != std::string::npos)
    throw Error("constant '" + name + "' has non-integer value '" + value + "'");
  return {std::move(name), std::move(value)};
}

inline std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    out.push_back(item.substr(first, item.find_last_not_of(" \t") - first + 1));
  }
  return out;
}

// Inputs concatenated in argument order, with the first line of each file.
class Inputs {
 public:
  Inputs(const std::vector<std::string>& paths, std::istream& in) {
    if (paths.empty()) {
      std::ostringstream s;
      s << in.rdbuf();
      append("<stdin>", s.str());
    }
    for (const auto& p : paths) append(p, read_file(p));
  }

  const std::string& text() const noexcept { return text_; }

  std::string locate(int line) const {
    for (auto it = starts_.rbegin(); it != starts_.rend(); ++it)
      if (line >= it->second) return it->first + ":" + std::to_string(line - it->second + 1);
    return std::to_string(line);
  }

 private:
  void append(const std::string& name, const std::string& content) {
    starts_.push_back({name, line_});
    text_ += content;
    if (!content.empty() && content.back() != '\n') text_ += '\n';
    for (char c : content) line_ += c == '\n';
    if (!content.empty() && content.back() != '\n') ++line_;
  }

  std::string text_;
  std::vector<std::pair<std::string, int>> starts_;
  int line_ = 1;
};

namespace detail {

inline nlohmann::json path_json(const Path& p) { return p.to_vector(); }

inline void write_output(const InvocationConfig& config, const std::string& text, std::ostream& out) {
  if (config.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(config.out, std::ios::binary);
  if (!file) throw Error("cannot write '" + config.out + "'");
  file << text;
}

inline int solve(const std::string& command, const std::string& text) {
  FILE* pipe = popen(command.c_str(), "w");
  if (!pipe) throw Error("cannot run '" + command + "'");
  std::fwrite(text.data(), 1, text.size(), pipe);
  const int status = pclose(pipe);
  return status == -1 ? kFailure : kOk;
}

inline PredicateSet selected(const InvocationConfig& config, const std::set<std::string>& all,
                             const Signature& sig) {
  if (!config.preds) return {all.begin(), all.end()};
  PredicateSet out;
  for (const auto& p : *config.preds) {
    if (p.rfind(kAuxPrefix, 0) == 0) throw Error("predicate '" + p + "' uses the reserved prefix " + kAuxPrefix);
    if (!all.count(p) && !sig.has_predicate(p)) throw Error("unknown predicate '" + p + "'");
    out.insert(p);
  }
  return out;
}

inline EmitOptions emit_options(const InvocationConfig& config) {
  return {parse_dialect(config.dialect), parse_domain_mode(config.domain_mode)};
}

// Command-line constants replace same-named "#const" directives.
inline void apply_constants(Program& p, const InvocationConfig& config) {
  if (config.constants.empty()) return;
  std::set<std::string> names;
  for (const auto& c : config.constants) names.insert(c.first);
  std::vector<ProgramStatement> kept;
  for (auto& s : p.statements)
    if (!(s.kind == ProgramStatementKind::Directive && s.directive.kind == DirectiveKind::Const &&
          names.count(s.directive.name)))
      kept.push_back(std::move(s));
  p.statements.clear();
  for (const auto& [name, value] : config.constants) {
    Directive d{DirectiveKind::Const, name, value, "#const " + name + "=" + value + "."};
    p.add_directive(std::move(d));
  }
  p.statements.insert(p.statements.end(), kept.begin(), kept.end());
}

inline int finish(const InvocationConfig& config, Translation t, std::ostream& out, std::ostream& err) {
  for (const auto& w : t.warnings) err << "warning: " << w << "\n";
  apply_constants(t.program, config);
  const std::string text = emit(t.program, emit_options(config));
  if (!config.solve_with.empty()) return solve(config.solve_with, text);
  write_output(config, text, out);
  return kOk;
}

struct Theory {
  SourceProgram source;
  std::vector<Formula> formulas;
  std::vector<int> lines;
};

inline Theory read_theory(const Inputs& inputs) {
  Theory t;
  t.source = parse_program(inputs.text(), Signature::open_signature(), {true, false});
  for (const auto& s : t.source.statements) {
    if (s.kind == StatementKind::Extended) {
      t.formulas.push_back(s.formula);
    } else if (s.kind == StatementKind::Native) {
      t.formulas.push_back(rule_formula(parse_native_rule(s.text, t.source.signature, s.line)));
    } else {
      continue;
    }
    t.lines.push_back(s.line);
  }
  return t;
}

inline std::set<std::string> theory_predicates(const Theory& t) {
  std::set<std::string> out;
  for (const auto& f : t.formulas) {
    auto p = predicates(f);
    out.insert(p.begin(), p.end());
  }
  return out;
}

inline Formula closed_conjunction(const std::vector<Formula>& formulas) {
  if (formulas.empty()) return Formula::top();
  std::vector<Formula> parts;
  for (const auto& f : formulas) parts.push_back(universal_closure(f));
  return Formula::conjunction(parts);
}

inline int check(const InvocationConfig& config, const Inputs& inputs, std::ostream& out) {
  const Theory t = read_theory(inputs);
  const PredicateSet preds = selected(config, theory_predicates(t), t.source.signature);
  nlohmann::json j;
  j["check"] = config.check_kind;
  j["preds"] = std::vector<std::string>(preds.begin(), preds.end());
  nlohmann::json witnesses = nlohmann::json::array();
  bool verdict = true;
  if (config.check_kind == "canonical" || config.check_kind == "almost-universal") {
    for (std::size_t i = 0; i < t.formulas.size(); ++i) {
      const std::string where = inputs.locate(t.lines[i]);
      if (config.check_kind == "canonical") {
        const auto report = is_canonical(t.formulas[i], preds);
        verdict = verdict && report.verdict;
        for (const auto& w : report.witnesses)
          witnesses.push_back({{"location", where},
                               {"formula", to_string(t.formulas[i])},
                               {"predicate", w.predicate},
                               {"path", path_json(w.path)},
                               {"clause", w.clause}});
      } else {
        const auto report = is_almost_universal(t.formulas[i], preds);
        verdict = verdict && report.verdict;
        for (const auto& w : report.witnesses)
          witnesses.push_back({{"location", where},
                               {"formula", to_string(t.formulas[i])},
                               {"path", path_json(w)},
                               {"quantifier", to_string(subformula_at(t.formulas[i], w))}});
      }
    }
  } else if (config.check_kind == "tight") {
    const auto graph = dependency_graph(closed_conjunction(t.formulas), preds);
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& [a, b] : graph.edges()) edges.push_back({a, b});
    j["edges"] = edges;
    for (const auto& c : graph.strongly_connected_components())
      if (c.size() > 1 || graph.has_edge(c.front(), c.front())) witnesses.push_back({{"cycle", c}});
    verdict = witnesses.empty();
  } else {
    throw Error("unknown check '" + config.check_kind + "'");
  }
  j["verdict"] = verdict;
  j["witnesses"] = witnesses;
  write_output(config, j.dump(2) + "\n", out);
  return kOk;
}

inline std::vector<std::string> verify_universe(const Signature& sig, std::size_t size) {
  std::vector<std::string> elements;
  for (const auto& [name, sort] : sig.objects()) elements.push_back(name);
  if (elements.size() > size)
    throw Error("universe of size " + std::to_string(size) + " cannot hold " + std::to_string(elements.size()) +
                " object constants");
  std::set<std::string> used(elements.begin(), elements.end());
  for (std::size_t k = 1; elements.size() < size; ++k)
    if (!used.count(std::to_string(k))) elements.push_back(std::to_string(k));
  return elements;
}

inline int verify(const InvocationConfig& config, const Inputs& inputs, std::ostream& out) {
  const Theory t = read_theory(inputs);
  if (config.universe == 0) throw Error("universe size must be positive");
  const auto all = theory_predicates(t);
  const PredicateSet preds = selected(config, all, t.source.signature);
  const Formula f = closed_conjunction(t.formulas);
  TranslateOptions options;
  options.intensional = preds;
  options.f2lp.force = config.force;
  const Translation tr = translate(t.source, options);
  const Formula g = fol_representation(tr.program);

  oracle::GroundTask task = oracle::GroundTask::over(verify_universe(t.source.signature, config.universe));
  PredicateSet sigma(all.begin(), all.end());
  sigma.insert(preds.begin(), preds.end());
  for (const auto& p : sigma)
    task.declare(p, t.source.signature.has_predicate(p) ? t.source.signature.predicate_sorts(p).size() : 0);
  PredicateSet translated = predicates(g);
  translated.insert(preds.begin(), preds.end());

  const auto before = oracle::sm_models(f, preds, task);
  const auto after = oracle::sm_models(g, translated, task);
  const auto result = oracle::sigma_equivalent(before, after, sigma);
  std::string elements;
  for (const auto& e : task.universe.at(kDefaultSort)) elements += (elements.empty() ? "" : ",") + e;
  std::ostringstream s;
  s << "universe {" << elements << "}: " << before.project(sigma).size() << " stable models before, "
    << after.project(sigma).size() << " after\n";
  if (result) {
    s << "PASS\n";
    write_output(config, s.str(), out);
    return kOk;
  }
  std::string model;
  for (const auto& a : result.counterexample) model += (model.empty() ? "" : ", ") + a;
  s << "FAIL: {" << model << "} is a projected stable model of the "
    << (result.counterexample_in_first ? "input only" : "translation only") << "\n";
  write_output(config, s.str(), out);
  return kFailure;
}

}  // namespace detail

// Emitted text of one corpus file in the golden configuration.
inline std::string golden_text(const std::string& name, const std::string& dir = F2LP_CORPUS_DIR) {
  return emit(translate(corpus_text(name, dir)).program);
}

inline std::string golden_path(const std::string& name, const std::string& dir = F2LP_CORPUS_DIR) {
  return (std::filesystem::path(dir) / "golden" / (name + ".lp")).string();
}

inline int corpus(const InvocationConfig& config, std::ostream& out) {
  std::filesystem::create_directories(std::filesystem::path(config.corpus_dir) / "golden");
  for (const auto& name : corpus_names()) {
    const std::string path = golden_path(name, config.corpus_dir);
    std::ofstream file(path, std::ios::binary);
    if (!file) throw Error("cannot write '" + path + "'");
    file << golden_text(name, config.corpus_dir);
    out << path << "\n";
  }
  return kOk;
}

inline int run(const InvocationConfig& config, std::istream& in = std::cin, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  std::optional<Inputs> inputs;
  try {
    if (config.subcommand == "corpus") return corpus(config, out);
    inputs.emplace(config.inputs, in);
    if (config.subcommand == "translate") {
      const SourceProgram src = parse_program(inputs->text());
      TranslateOptions options;
      if (config.preds) {
        std::set<std::string> all;
        for (const auto& f : src.extended()) {
          auto p = predicates(f);
          all.insert(p.begin(), p.end());
        }
        options.intensional = detail::selected(config, all, src.signature);
      }
      options.f2lp.force = config.force;
      return detail::finish(config, translate(src, options), out, err);
    }
    if (config.subcommand == "ec") {
      F2lpOptions options;
      options.force = config.force;
      return detail::finish(config, ec2asp(EventCalculusDescription::parse(inputs->text()), options), out, err);
    }
    if (config.subcommand == "check") return detail::check(config, *inputs, out);
    if (config.subcommand == "verify") return detail::verify(config, *inputs, out);
    throw Error("unknown subcommand '" + config.subcommand + "'");
  } catch (const ParseError& e) {
    std::string message = e.what();
    const auto first = message.find(": ");
    if (first != std::string::npos) message = message.substr(first + 2);
    const std::string where = inputs ? inputs->locate(e.line()) : std::to_string(e.line());
    err << where << ":" << e.column() << ": error: " << message << "\n";
    return kFailure;
  } catch (const NotAlmostUniversal& e) {
    std::string message = e.what();
    if (inputs && message.rfind("line ", 0) == 0) {
      const auto colon = message.find(": ");
      message = inputs->locate(std::stoi(message.substr(5, colon - 5))) + message.substr(colon);
    }
    err << "error: " << message << "\n";
    return kNotAlmostUniversal;
  } catch (const OracleLimitExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kOracleLimit;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace f2lp::cli
