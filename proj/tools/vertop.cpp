// vertop: command-line harness over the check suites.
//
//   vertop check <suite> [flags]   run a named suite, print the report
//   vertop ope --expr EXPR         present a field expression over generators
//   vertop report --in FILE        re-render a JSON report
//
// Exit codes: 0 all checks pass, 1 any check fails, 2 configuration or
// usage error. An optional key=value config file mirrors the flags; flags
// given on the command line override the file.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "vertop/suites.hpp"

namespace {

using vertop::CheckConfig;

const std::vector<std::string> kSuites = {
    "heisenberg", "betagamma-axioms", "sp",   "sln",
    "pi-t",       "borcherds",        "dual", "induced-heisenberg"};

struct Options {
  CheckConfig cfg;
  std::string window = "-3..3";
  std::string c = "1";
  std::string level = "1";
};

void apply_key(Options& opt, const std::string& key, const std::string& value) {
  auto to_int = [&](const std::string& v) {
    std::size_t used = 0;
    int r = std::stoi(v, &used);
    if (used != v.size()) throw vertop::model_error("config: bad integer '" + v + "'");
    return r;
  };
  if (key == "N") opt.cfg.N = to_int(value);
  else if (key == "degree") opt.cfg.degree = to_int(value);
  else if (key == "window") opt.window = value;
  else if (key == "generation") opt.cfg.generation = to_int(value);
  else if (key == "g") opt.cfg.g = to_int(value);
  else if (key == "n") opt.cfg.n = to_int(value);
  else if (key == "c") opt.c = value;
  else if (key == "level") opt.level = value;
  else if (key == "seed") opt.cfg.seed = static_cast<unsigned int>(std::stoul(value));
  else if (key == "max-word-len") opt.cfg.max_word_len = to_int(value);
  else if (key == "algebra") opt.cfg.algebra = value;
  else if (key == "spec") opt.cfg.spec_kind = value;
  else if (key == "format") opt.cfg.format = value;
  else if (key == "timing") opt.cfg.timing = (value == "1" || value == "true");
  else throw vertop::model_error("config: unknown key '" + key + "'");
}

void load_config_file(Options& opt, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw vertop::model_error("config: cannot open '" + path + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw vertop::model_error("config: line " + std::to_string(lineno) +
                                " is not key=value");
    auto strip = [](std::string s) {
      std::size_t a = s.find_first_not_of(" \t");
      std::size_t b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
    };
    apply_key(opt, strip(line.substr(0, eq)), strip(line.substr(eq + 1)));
  }
}

/// "-2..2" or a single half-width "2".
void parse_window(Options& opt) {
  const std::string& w = opt.window;
  std::size_t dots = w.find("..");
  try {
    if (dots == std::string::npos) {
      int half = std::stoi(w);
      opt.cfg.window_lo = -std::abs(half);
      opt.cfg.window_hi = std::abs(half);
    } else {
      opt.cfg.window_lo = std::stoi(w.substr(0, dots));
      opt.cfg.window_hi = std::stoi(w.substr(dots + 2));
    }
  } catch (const std::exception&) {
    throw vertop::model_error("config: bad window '" + w + "'");
  }
}

void finalize(Options& opt) {
  parse_window(opt);
  try {
    opt.cfg.c = vertop::Rational(opt.c);
  } catch (const std::exception&) {
    throw vertop::model_error("config: bad rational c '" + opt.c + "'");
  }
  opt.cfg.level = vertop::parse_scalar(opt.level);
  opt.cfg.validate();
}

void add_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("-N,--truncation", opt.cfg.N, "truncation depth N");
  cmd->add_option("--degree", opt.cfg.degree, "probe degree bound");
  cmd->add_option("--window", opt.window, "mode window, lo..hi or half-width");
  cmd->add_option("--generation", opt.cfg.generation, "eigen-probe orbit generation");
  cmd->add_option("--g", opt.cfg.g, "symplectic genus (species pairs)");
  cmd->add_option("--n", opt.cfg.n, "matrix size for sl_n");
  cmd->add_option("--c", opt.c, "Gaussian parameter (positive rational square)");
  cmd->add_option("--level", opt.level, "induced-module level (scalar expression)");
  cmd->add_option("--seed", opt.cfg.seed, "seed for randomized probe selection");
  cmd->add_option("--max-word-len", opt.cfg.max_word_len, "word length bound");
  cmd->add_option("--algebra", opt.cfg.algebra, "sl2 | sl3 | heisenberg")
      ->check(CLI::IsMember({"sl2", "sl3", "heisenberg"}));
  cmd->add_option("--spec", opt.cfg.spec_kind, "vacuum | gaussian")
      ->check(CLI::IsMember({"vacuum", "gaussian"}));
  cmd->add_option("--format", opt.cfg.format, "json | text")
      ->check(CLI::IsMember({"json", "text"}));
  cmd->add_flag("--timing", opt.cfg.timing, "include per-entry timings in the report");
}

int run(int argc, char** argv) {
  Options opt;
  std::string config_path;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--config") config_path = argv[i + 1];
  if (!config_path.empty()) load_config_file(opt, config_path);

  CLI::App app{"exact checks for fields on filtered models"};
  app.require_subcommand(1);
  std::string config_opt;
  app.add_option("--config", config_opt, "key=value config file")
      ->check(CLI::ExistingFile);

  std::string suite, expr, in_path, out_path;
  CLI::App* check = app.add_subcommand("check", "run a named check suite");
  check->add_option("suite", suite, "suite name")
      ->required()
      ->check(CLI::IsMember(kSuites));
  add_flags(check, opt);
  check->add_option("--out", out_path, "write the report to a file");

  CLI::App* ope = app.add_subcommand("ope", "present a field expression");
  ope->add_option("--expr", expr, "field expression")->required();
  add_flags(ope, opt);

  CLI::App* report = app.add_subcommand("report", "re-render a JSON report");
  report->add_option("--in", in_path, "report file")->required()->check(CLI::ExistingFile);
  report->add_option("--format", opt.cfg.format, "json | text")
      ->check(CLI::IsMember({"json", "text"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (check->parsed()) {
    opt.cfg.suite = suite;
    finalize(opt);
    vertop::Report rep = vertop::run_suite(opt.cfg);
    std::string rendered = opt.cfg.format == "text"
                               ? vertop::emit_text(rep)
                               : vertop::emit_json(rep, opt.cfg.timing);
    if (out_path.empty()) {
      std::cout << rendered;
    } else {
      std::ofstream out(out_path);
      if (!out) throw vertop::model_error("cannot open output file '" + out_path + "'");
      out << rendered;
    }
    return rep.all_pass() ? 0 : 1;
  }
  if (ope->parsed()) {
    finalize(opt);
    vertop::FieldExpr ast = vertop::parse_field_expr(expr);
    std::cout << vertop::ope_render(ast, opt.cfg) << "\n";
    return 0;
  }
  // report
  std::ifstream in(in_path);
  nlohmann::json j;
  in >> j;
  vertop::Report rep = vertop::parse_report(j);
  bool timing = false;
  for (const auto& e : rep.entries) timing = timing || e.millis.has_value();
  std::cout << (opt.cfg.format == "json" ? vertop::emit_json(rep, timing)
                                         : vertop::emit_text(rep));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
