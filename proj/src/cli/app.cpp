#include <ostream>

#include "CLI11.hpp"
#include "mlspec/cli.hpp"

namespace mlspec::cli {

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Statistical epistemic specifications for classifiers"};
  app.require_subcommand(1);
  Options options;
  std::uint64_t seed = 0;
  std::string model;
  std::string world = "all";
  std::string formula;
  std::string spec;
  std::string only;
  std::string label;
  std::vector<std::string> groups;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--model,-m", model, "Model configuration (JSON)")->required();
    sub->add_flag("--json", options.json, "Machine-readable output");
    sub->add_option("--seed", seed, "Seed for every seeded transform");
  };

  CLI::App* eval = app.add_subcommand("eval", "Evaluate one formula");
  common(eval);
  eval->add_option("--world,-w", world, "World name or 'all'");
  eval->add_flag("--trace", options.trace, "Print the evaluation trace");
  eval->add_option("formula", formula, "Dataset formula")->required();

  CLI::App* check = app.add_subcommand("check", "Run the checks of a spec file");
  common(check);
  check->add_option("--spec,-s", spec, "Spec file (JSON)")->required();
  check->add_flag("--trace", options.trace, "Print evaluation traces");
  check->add_option("--only", only, "Run a single check");

  CLI::App* report = app.add_subcommand("report", "Confusion and fairness quantities");
  common(report);
  report->add_option("--world,-w", world, "World name")->required();
  report->add_option("--label,-l", label, "Label")->required();
  report->add_option("--groups,-g", groups, "Two groups, e.g. G0,G1 or G0,!G0")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : kError;
  }
  for (CLI::App* sub : {eval, check, report}) {
    if (sub->parsed() && sub->count("--seed")) options.seed = seed;
  }
  if (!only.empty()) options.only = only;

  if (eval->parsed()) return cmd_eval(model, world, formula, options, out, err);
  if (check->parsed()) return cmd_check(model, spec, options, out, err);
  return cmd_report(model, world, label, groups, options, out, err);
}

}  // namespace mlspec::cli
