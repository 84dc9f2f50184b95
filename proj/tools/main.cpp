// translucent: batch front-end for the translucent rationality library.
//
//   translucent check --config c.json
//   translucent sweep --config s.json --out grid.csv
//   translucent equilibrium --config e.json
//   translucent population --config p.json
//   translucent validate-structure structure.json
//   translucent qre --config q.json
//
// Exit codes: 0 success, 1 verdict or violation, 2 input error.

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

using translucent::Json;
namespace cli = translucent::cli;

int run(const std::function<int(std::ostream&)>& body, const std::string& out_path) {
  std::ostringstream buffer;
  int code = body(buffer);
  if (out_path.empty()) {
    std::cout << buffer.str();
  } else {
    std::ofstream file(out_path, std::ios::binary);
    if (!file) throw translucent::InputError(out_path + ": cannot open for writing");
    file << buffer.str();
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Translucent rationality in social dilemmas"};
  app.require_subcommand(1);
  std::string config;
  std::string out;
  std::uint64_t budget = translucent::kDefaultBudget;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* opt = sub->add_option("--config", config, "JSON config file");
    if (needs_config) opt->required();
    sub->add_option("--out", out, "write output to this file instead of stdout");
    sub->add_option("--budget", budget, "enumeration budget")->check(CLI::PositiveNumber);
  };
  auto* check = app.add_subcommand("check", "closed-form and brute-force verdict for one type");
  auto* sweep = app.add_subcommand("sweep", "CSV feasibility grid");
  auto* equilibrium = app.add_subcommand("equilibrium", "translucent equilibrium conditions for a profile");
  auto* population = app.add_subcommand("population", "predicted cooperation rate of a type mixture");
  auto* validate = app.add_subcommand("validate-structure", "check a counterfactual structure file");
  auto* qre = app.add_subcommand("qre", "logit quantal response equilibrium");
  for (auto* sub : {check, sweep, equilibrium, population, qre}) add_common(sub, true);
  add_common(validate, false);
  std::string structure_path;
  validate->add_option("file", structure_path, "structure JSON file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitInput;
  }

  try {
    if (validate->parsed()) {
      std::string path = structure_path.empty() ? config : structure_path;
      if (path.empty()) throw translucent::InputError("validate-structure: no file given");
      Json doc = translucent::io::load_json_file(path);
      return run([&](std::ostream& os) { return cli::cmd_validate_structure(doc, os); }, out);
    }
    Json cfg = translucent::io::load_json_file(config);
    if (check->parsed()) return run([&](std::ostream& os) { return cli::cmd_check(cfg, os, budget); }, out);
    if (sweep->parsed()) return run([&](std::ostream& os) { return cli::cmd_sweep(cfg, os, budget); }, out);
    if (equilibrium->parsed()) return run([&](std::ostream& os) { return cli::cmd_equilibrium(cfg, os, budget); }, out);
    if (population->parsed()) return run([&](std::ostream& os) { return cli::cmd_population(cfg, os, budget); }, out);
    if (qre->parsed()) return run([&](std::ostream& os) { return cli::cmd_qre(cfg, os, budget); }, out);
  } catch (const translucent::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kExitInput;
  } catch (const translucent::BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kExitInput;
  } catch (const translucent::QreNotConverged& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kExitVerdict;
  } catch (const Json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kExitInput;
  }
  return cli::kExitInput;
}
