// uos-recover: seeded experiment runner for union-of-subspaces recovery.
//
// Usage: uos-recover <command> --config <path> [--seed S] [--trials T] [--out path]
// Commands: recover, rip-scan, bounds-check, phase-transition, lowrank-demo,
// multiband-demo.  Exit codes: 0 success, 1 config error, 2 bound violation
// in bounds-check --assert mode.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>

#include "uos/uos.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_path;
  long long seed = -1;
  long trials = -1;
};

void add_common(CLI::App* sub, CommonOpts& opts) {
  sub->add_option("--config", opts.config_path, "experiment config file")->required();
  sub->add_option("--seed", opts.seed, "override the top-level seed");
  sub->add_option("--trials", opts.trials, "override the trial count");
  sub->add_option("--out", opts.out_path, "write the result table to this file (default stdout)");
}

int run(const std::string& command, const CommonOpts& opts, bool assert_bounds) {
  uos::Config cfg;
  try {
    cfg = uos::Config::parse_file(opts.config_path);
    if (opts.seed >= 0) cfg.set("seed", std::to_string(opts.seed));
    if (opts.trials >= 0) cfg.set("trials", std::to_string(opts.trials));
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }

  uos::RunOutcome outcome{uos::ResultTable({}), 0};
  try {
    outcome = uos::run_experiment(command, cfg);
  } catch (const uos::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  if (opts.out_path.empty()) {
    outcome.table.write(std::cout);
  } else {
    std::ofstream f(opts.out_path);
    if (!f) {
      std::cerr << "error: cannot open '" << opts.out_path << "' for writing\n";
      return 1;
    }
    outcome.table.write(f);
  }

  if (assert_bounds && outcome.violations > 0) {
    std::cerr << "bounds-check: " << outcome.violations << " bound violation(s)\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"union-of-subspaces recovery experiments"};
  app.require_subcommand(1);

  const std::vector<std::string> commands = {"recover",          "rip-scan",
                                             "bounds-check",     "phase-transition",
                                             "lowrank-demo",     "multiband-demo"};
  std::map<std::string, CommonOpts> opts;
  bool assert_bounds = false;
  for (const auto& name : commands) {
    auto* sub = app.add_subcommand(name);
    add_common(sub, opts[name]);
    if (name == "bounds-check")
      sub->add_flag("--assert", assert_bounds, "exit 2 when any accepted trial violates a bound");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  return run(command, opts[command], assert_bounds);
}
