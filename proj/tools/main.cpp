#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "jetflow - simulation and finite-horizon analysis of time-varying "
      "linear consensus dynamics"};
  app.require_subcommand(1);

  jetflow::cli::RunConfig config;
  std::string x0_arg;
  std::string within_arg;
  std::vector<std::string> param_args;

  app.add_option("--input", config.input, "Chain-spec JSON file");
  app.add_option("--out", config.out, "Report path (default: stdout)");
  app.add_option("--format", config.format, "json or csv (series only)");
  app.add_option("-T,--horizon", config.horizon, "Finite horizon")
      ->check(CLI::PositiveNumber);
  app.add_option("--eps", config.eps, "Convergence/clustering tolerance")
      ->check(CLI::PositiveNumber);
  app.add_option("--theta", config.theta, "Island divergence threshold")
      ->check(CLI::PositiveNumber);
  app.add_option("--psi", config.psi, "Balance bound");
  app.add_option("--rowtol", config.row_tol, "Row-sum validation tolerance")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", config.seed, "Seed for probes and generators");
  app.add_option("--probes", config.probes, "Probe count for dsdecompose");
  app.add_flag("--strict", config.strict,
               "Exit 2 when a verdict is required but inconclusive");
  app.add_option("--step", config.step, "Chain step for match");
  app.add_option("--x0", x0_arg, "Comma-separated initial state (simulate)");
  app.add_option("--within", within_arg,
                 "Comma-separated island members (scanjets)");
  app.add_option("--family", config.family, "Generator family (gen)");
  app.add_option("--n", config.agents, "Agent count (gen)");
  app.add_option("--param", param_args, "Generator parameter key=value (gen)");

  for (const char* name :
       {"simulate", "classify", "islands", "pstar", "match", "normalize",
        "dsdecompose", "scanjets", "gen"}) {
    app.add_subcommand(name)->fallthrough();
  }

  CLI11_PARSE(app, argc, argv);
  config.command = app.get_subcommands().front()->get_name();

  auto split_list = [](const std::string& arg) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= arg.size()) {
      const std::size_t comma = arg.find(',', start);
      parts.push_back(arg.substr(
          start, comma == std::string::npos ? std::string::npos : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return parts;
  };

  try {
    if (!x0_arg.empty()) {
      std::vector<double> x0;
      for (const auto& p : split_list(x0_arg)) x0.push_back(std::stod(p));
      config.x0 = std::move(x0);
    }
    if (!within_arg.empty()) {
      std::vector<int> within;
      for (const auto& p : split_list(within_arg)) within.push_back(std::stoi(p));
      config.within = std::move(within);
    }
    for (const auto& kv : param_args) {
      const std::size_t eq = kv.find('=');
      if (eq == std::string::npos) {
        throw jetflow::Error("--param expects key=value, got: " + kv);
      }
      config.params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: bad option value: " << e.what() << "\n";
    return jetflow::cli::kExitValidation;
  }

  return jetflow::cli::run(config);
}
