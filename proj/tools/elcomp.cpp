// elcomp: certify or refute the comparison principle for weakly coupled
// elliptic systems given in a problem file.

#include <iostream>

#include <CLI11.hpp>

#include "elcomp/problem_file.hpp"
#include "elcomp/report.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Comparison-principle certifier for weakly coupled elliptic systems"};
  app.set_version_flag("--version", elcomp::tool_version());
  app.require_subcommand(1);

  elcomp::CommandArgs args;
  std::string json_path;
  std::string mode = "basic";
  bool quiet = false;

  auto common = [&](CLI::App* sub) {
    sub->add_option("problem", args.problem, "Problem file")->required();
    sub->add_option("--tol-eig", args.certify.eig.tol_eig, "Eigenvalue enclosure tolerance (relative)");
    sub->add_option("--tol-cond", args.certify.tol_cond, "Condition tolerance (relative)");
    sub->add_option("--max-iter", args.certify.eig.max_iter, "Power iteration limit");
    sub->add_option("--oracle-max-dof", args.certify.oracle_max_dof, "Largest system for the dense oracle");
    sub->add_option("--mode", mode, "basic or sharp")->check(CLI::IsMember({"basic", "sharp"}));
    sub->add_option("--json", json_path, "Write the JSON report here");
    sub->add_option("--seed", args.seed, "Seed for random probes");
    sub->add_flag("-q,--quiet", quiet, "Do not print the text summary");
  };

  auto* certify = app.add_subcommand("certify", "Run the full certification pipeline");
  common(certify);
  certify->add_option("--sub", args.sub, "Sub-solution field file (quasi-linear problems)");
  certify->add_option("--super", args.super, "Super-solution field file (quasi-linear problems)");

  auto* eigen = app.add_subcommand("eigen", "Principal eigenpair of the cooperative part");
  common(eigen);
  auto* comp = eigen->add_option("--component", args.component, "Species J (1-based): L_J + m_JJ^-");
  eigen->add_flag("--cooperative", args.cooperative, "L + M^- on the whole system (default)")->excludes(comp);

  auto* oracle = app.add_subcommand("oracle", "Discrete inverse-positivity check");
  common(oracle);
  oracle->add_flag("--gauge", args.gauge, "Use the sign gauge order");
  oracle->add_option("--probe", args.probe, "Random probe with T trials instead of dense inversion");

  auto* solve = app.add_subcommand("solve", "Solve the discrete linear system");
  common(solve);
  auto* rhs = solve->add_option("--rhs-from-file", args.rhs_file, "Field file with one right-hand side per species");
  solve->add_flag("--builtin", args.builtin, "Use f and g from the problem file")->excludes(rhs);
  solve->add_option("--out", args.out, "Write the solution fields here");

  auto* counter = app.add_subcommand("counterexample", "Build a verified counterexample if one exists");
  common(counter);
  counter->add_option("--out", args.out, "Write the counterexample fields here");

  auto* gauge = app.add_subcommand("gauge", "Search for a sign gauge making the coupling cooperative");
  common(gauge);

  auto* linearize = app.add_subcommand("linearize", "Linearize a quasi-linear problem between two fields");
  common(linearize);
  linearize->add_option("--sub", args.sub, "Sub-solution field file")->required();
  linearize->add_option("--super", args.super, "Super-solution field file")->required();
  linearize->add_option("--out", args.out, "Write the coefficient fields here");

  auto* thm8 = app.add_subcommand("thm8", "Comparison conditions for a quasi-linear problem");
  common(thm8);
  thm8->add_option("--sub", args.sub, "Sub-solution field file")->required();
  thm8->add_option("--super", args.super, "Super-solution field file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : elcomp::exit_input;
  }
  args.certify.mode = elcomp::parse_mode(mode);

  const std::string command = app.get_subcommands().front()->get_name();
  const elcomp::CommandResult result = elcomp::run_command(command, args);
  if (!quiet) std::cout << result.text;
  if (!json_path.empty()) {
    try {
      elcomp::write_file(json_path, result.report.dump(2) + "\n");
    } catch (const elcomp::Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return elcomp::exit_input;
    }
  }
  if (result.exit_code != 0 && quiet) {
    for (const auto& e : result.report["errors"]) std::cerr << "error: " << e.get<std::string>() << "\n";
  }
  return result.exit_code;
}
