// Command-line front end: one experiment per invocation.
//
//   actionalg <experiment> --config run.cfg [--out prefix] [--csv] [--svg]
//             [--seed N] [--slack X] [--set key=value ...]

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "actionalg/cli.hpp"

namespace cli = actionalg::cli;

int main(int argc, char** argv) {
  CLI::App app{"Action-representation experiments on Cayley graphs of free products"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out;
  bool csv = false;
  bool svg = false;
  std::optional<std::uint64_t> seed;
  std::optional<double> slack;
  std::vector<std::string> overrides;

  app.add_option("--config", config_path, "flat key = value config file");
  app.add_option("--out", out, "output prefix for .csv, .summary.txt, .svg, .witness.txt");
  app.add_flag("--csv", csv, "print the CSV rows to stdout instead of the summary");
  app.add_flag("--svg", svg, "also write an estimate-vs-bound chart (needs --out)");
  app.add_option("--seed", seed, "seed for random pairs and randomized restarts");
  app.add_option("--slack", slack, "falsification slack (default 1e-9)");
  app.add_option("--set", overrides, "override a config key, e.g. --set budget.J_max=4");

  // every subcommand shares the global flags; set before the subcommands
  // are added so they inherit it
  app.fallthrough();

  std::string experiment;
  const std::pair<const char*, const char*> subcommands[] = {
      {"panalytic", "norm of the averaged conjugates of h against C/sqrt(J)"},
      {"average", "decay of M_J(T) - a_e e, plus exact identity-coefficient checks"},
      {"norm", "certified lower bound for one operator"},
      {"trace", "tracial identities on given or random pairs"},
      {"orbits", "W_j orbit disjointness, orbit decomposition and faithfulness"},
      {"pingpong", "injectivity, disjointness, ellipticity and displacement checks"},
      {"blowup", "the finite-order sqrt(N) counterexample"},
      {"ideal", "pivot coefficient and closing index of the averaging argument"},
  };
  for (const auto& [name, help] : subcommands) {
    app.add_subcommand(name, help)->callback([&experiment, name] { experiment = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitUsage;
  }

  try {
    cli::RawConfig raw = config_path.empty() ? cli::RawConfig{} : cli::load_config_file(config_path);
    for (const std::string& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw cli::ConfigError("--set expects key=value, got '" + kv + "'");
      raw.entries[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    if (seed) raw.entries["seed"] = std::to_string(*seed);
    if (slack) raw.entries["slack"] = cli::format_decimal(*slack);
    if (svg) raw.entries["output.format"] = "csv+svg";
    if (!out.empty()) raw.entries["output.path"] = out;

    const cli::ExperimentConfig config = cli::build_config(raw, experiment);
    const cli::RunResult result = cli::run(config);
    if (!config.output_path.empty()) cli::write_artifacts(config, result, config.output_path);
    if (csv) {
      std::cout << cli::render_csv(result);
    } else {
      std::cout << cli::render_summary(config, result);
    }
    return result.exit_code;
  } catch (const cli::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kExitUsage;
  } catch (const actionalg::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kExitUsage;
  }
}
