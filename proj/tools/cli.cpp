// solitonjet command-line front end.
//
// Exit status: 0 success / all checks pass, 1 verification failure or syntax
// error, 2 usage or input error.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "solitonjet/error.hpp"
#include "solitonjet/parser.hpp"
#include "solitonjet/profile.hpp"
#include "solitonjet/scenario.hpp"

namespace sj = solitonjet;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

// Writes `text` to PATH, or to stdout for "-".
bool write_output(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return static_cast<bool>(std::cout);
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  return static_cast<bool>(out);
}

struct SolitonArgs {
  std::string family = "akns";
  int solitons = 1;
  double a0 = 0.5;
  bool a0_set = false;
  std::vector<std::string> modes;
  std::string grid = "a=-3:3:20,b=-3:3:20";
  std::string field = "Mx";
  std::string out = "-";
  int threads = 1;
};

int cmd_soliton(const SolitonArgs& args) {
  sj::SolitonSpec spec;
  spec.family = args.family == "akns" ? sj::Family::Akns : sj::Family::Nlbq;
  spec.a0 = args.a0_set ? args.a0 : (spec.family == sj::Family::Akns ? 0.5 : 1.0);
  try {
    for (const auto& m : args.modes) spec.modes.push_back(sj::parse_mode(m));
    if (spec.modes.empty()) {
      // Defaults match the acceptance examples: k = 1, 2 (AKNS) and a = 2, 3 (NLBq).
      const double first = spec.family == sj::Family::Akns ? 1.0 : 2.0;
      for (int i = 0; i < args.solitons; ++i) spec.modes.push_back({first + i, 0.0});
    }
    if (static_cast<int>(spec.modes.size()) != args.solitons) {
      std::cerr << "error: --solitons " << args.solitons << " needs exactly " << args.solitons << " --mode flags, got "
                << spec.modes.size() << "\n";
      return kUsage;
    }
    sj::validate(spec);
    const sj::GridSpec grid = sj::parse_grid_spec(args.grid);
    const sj::FieldExpr f = sj::soliton_field(spec, args.field == "M" ? sj::ProfileField::M : sj::ProfileField::Mx);
    const sj::GridOutput g = sj::sample_grid(f, grid, args.threads);
    if (!write_output(args.out, sj::to_csv(g))) {
      std::cerr << "error: cannot write '" << args.out << "'\n";
      return kUsage;
    }
  } catch (const sj::Error& e) {
    std::cerr << "error (" << sj::to_string(e.kind()) << "): " << e.what() << "\n";
    const bool input = e.kind() == sj::ErrorKind::InvalidMode || e.kind() == sj::ErrorKind::SingularSpec ||
                       e.kind() == sj::ErrorKind::InvalidArgument;
    return input ? kUsage : kFail;
  }
  return kPass;
}

struct VerifyArgs {
  std::string scenario;
  std::string builtin;
  std::string out;
  int threads = 0;
  bool quiet = false;
};

int cmd_verify(const VerifyArgs& args) {
  std::vector<sj::Scenario> scenarios;
  try {
    if (!args.scenario.empty()) {
      scenarios.push_back(sj::load_scenario_file(args.scenario));
    } else if (args.builtin == "all") {
      for (const auto& b : sj::builtin_scenarios()) {
        if (b.in_all) scenarios.push_back(sj::builtin_scenario(b.name));
      }
    } else {
      scenarios.push_back(sj::builtin_scenario(args.builtin));
    }
  } catch (const sj::Error& e) {
    std::cerr << "error (" << sj::to_string(e.kind()) << "): " << e.what() << "\n";
    return kUsage;
  }

  sj::ScanOptions options;
  options.threads = args.threads;
  nlohmann::json reports = nlohmann::json::array();
  bool all_pass = true;
  for (const sj::Scenario& s : scenarios) {
    try {
      const sj::ResidualReport r = sj::run_suite(s, options);
      if (!args.quiet) std::cout << sj::report_to_text(r);
      reports.push_back(sj::report_to_json(r));
      all_pass = all_pass && r.pass;
    } catch (const sj::Error& e) {
      std::cout << "FAIL " << s.name << ": " << e.what() << "\n";
      reports.push_back({{"name", s.name},
                         {"pass", false},
                         {"entries", nlohmann::json::array()},
                         {"error", {{"kind", std::string(sj::to_string(e.kind()))}, {"message", e.what()}}}});
      all_pass = false;
    }
  }
  std::cout << (all_pass ? "PASS" : "FAIL") << " (" << scenarios.size() << " scenario"
            << (scenarios.size() == 1 ? "" : "s") << ")\n";

  if (!args.out.empty()) {
    const nlohmann::json doc =
        scenarios.size() == 1 ? reports[0] : nlohmann::json{{"pass", all_pass}, {"reports", reports}};
    if (!write_output(args.out, doc.dump(2) + "\n")) {
      std::cerr << "error: cannot write '" << args.out << "'\n";
      return kUsage;
    }
  }
  return all_pass ? kPass : kFail;
}

struct ParseArgs {
  std::string expr;
  std::string compare;
  std::string eval_at;
};

std::optional<sj::Point2> parse_point(const std::string& s) {
  std::istringstream in(s);
  sj::Point2 p;
  char comma = 0;
  if (!(in >> p.a >> comma >> p.b) || comma != ',' || !(in >> std::ws).eof()) return std::nullopt;
  return p;
}

int cmd_parse_check(const ParseArgs& args) {
  sj::FieldExpr f, g;
  try {
    f = sj::parse_field(args.expr);
    if (!args.compare.empty()) g = sj::parse_field(args.compare);
  } catch (const sj::SyntaxError& e) {
    std::cerr << "syntax error: " << e.what() << "\n";
    return kFail;
  }
  std::cout << "expr: " << sj::to_string(f) << "\n";
  std::cout << "tree: " << sj::tree_string(f) << "\n";
  if (args.eval_at.empty()) return kPass;

  const auto p = parse_point(args.eval_at);
  if (!p) {
    std::cerr << "error: --eval-at expects 'a,b'\n";
    return kUsage;
  }
  try {
    const sj::Jet2 jf = sj::evaluate(f, *p, 3, 3);
    std::cout << "value: " << sj::format_number(jf.partial(0, 0)) << "\n";
    std::cout << "d/da: " << sj::format_number(jf.partial(1, 0)) << "  d/db: " << sj::format_number(jf.partial(0, 1))
              << "\n";
    if (args.compare.empty()) return kPass;
    const sj::Jet2 jg = sj::evaluate(g, *p, 3, 3);
    double worst = 0.0;
    for (int i = 0; i <= 3; ++i) {
      for (int k = 0; k <= 3; ++k) {
        const double a = jf.partial(i, k), b = jg.partial(i, k);
        worst = std::max(worst, std::abs(a - b) / (1.0 + std::max(std::abs(a), std::abs(b))));
      }
    }
    const bool same = worst <= 1e-12;
    std::cout << "compare: " << sj::to_string(g) << "\n";
    std::cout << (same ? "equal" : "different") << " at " << args.eval_at << " through order (3,3), max relative difference "
              << sj::format_number(worst) << "\n";
    return same ? kPass : kFail;
  } catch (const sj::Error& e) {
    std::cerr << "error (" << sj::to_string(e.kind()) << "): " << e.what() << "\n";
    return kFail;
  }
}

int cmd_list() {
  std::cout << "built-in scenarios:\n";
  for (const auto& b : sj::builtin_scenarios()) {
    std::cout << "  " << b.name << (b.in_all ? "" : "  (not in `all`)") << "\n";
  }
  std::cout << "equations:\n";
  for (const auto& e : sj::equation_catalog()) std::cout << "  " << e.name << "  " << e.formula << "\n";
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact soliton constructions and residual verification"};
  app.require_subcommand(1);

  SolitonArgs sol;
  auto* soliton = app.add_subcommand("soliton", "Sample a closed-form soliton on a grid and write CSV");
  soliton->add_option("--family", sol.family, "akns or nlbq")->check(CLI::IsMember({"akns", "nlbq"}));
  soliton->add_option("--solitons", sol.solitons, "1 or 2")->check(CLI::IsMember({1, 2}));
  soliton->add_option("--a0", sol.a0, "seed constant (default 0.5 AKNS, 1 NLBq)")->each([&](const std::string&) {
    sol.a0_set = true;
  });
  soliton->add_option("--mode", sol.modes, "k=R,x0=R (repeat once per soliton)");
  soliton->add_option("--grid", sol.grid, "a=min:max:n,b=min:max:n")->capture_default_str();
  soliton->add_option("--field", sol.field, "M or Mx")->check(CLI::IsMember({"M", "Mx"}))->capture_default_str();
  soliton->add_option("--out", sol.out, "CSV path, - for stdout")->capture_default_str();
  soliton->add_option("--threads", sol.threads, "0 = all cores")->capture_default_str();

  VerifyArgs ver;
  auto* verify = app.add_subcommand("verify", "Run a verification scenario");
  auto* scen = verify->add_option("--scenario", ver.scenario, "scenario JSON file");
  auto* bi = verify->add_option("--builtin", ver.builtin, "built-in scenario name, or all");
  scen->excludes(bi);
  verify->add_option("--out", ver.out, "report JSON path, - for stdout");
  verify->add_option("--threads", ver.threads, "grid scan threads, 0 = all cores")->capture_default_str();
  verify->add_flag("--quiet", ver.quiet, "only print the summary line");

  ParseArgs par;
  auto* parse = app.add_subcommand("parse-check", "Parse an expression and print its tree");
  parse->add_option("--expr", par.expr, "expression")->required();
  parse->add_option("--compare", par.compare, "second expression to compare jets against");
  parse->add_option("--eval-at", par.eval_at, "a,b point for evaluation");

  app.add_subcommand("list", "List built-in scenarios and equations");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  if (soliton->parsed()) return cmd_soliton(sol);
  if (verify->parsed()) {
    if (ver.scenario.empty() && ver.builtin.empty()) {
      std::cerr << "error: verify needs --scenario PATH or --builtin NAME\n";
      return kUsage;
    }
    return cmd_verify(ver);
  }
  if (parse->parsed()) return cmd_parse_check(par);
  return cmd_list();
}
