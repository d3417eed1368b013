#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "jetflow/chain.hpp"

namespace jetflow::cli {

/// Effective run configuration; every field is echoed into the report so
/// runs are auditable and reproducible.
struct RunConfig {
  std::string command;
  std::string input;
  std::string out;             // empty = stdout
  std::string format = "json"; // json | csv (csv: per-step series only)
  Step horizon = 2000;
  double eps = 1e-6;
  double theta = 50.0;
  double psi = 1.0;
  double row_tol = 1e-9;
  std::uint64_t seed = 0;
  int probes = 0;              // 0 = max(2N, N)
  bool strict = false;
  Step step = 0;               // match: which A(n) to match
  std::optional<std::vector<double>> x0;      // simulate initial state
  std::optional<std::vector<int>> within;     // scanjets island restriction
  // gen family and its parameters
  std::string family;
  int agents = 0;
  std::map<std::string, double> params;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitInconclusive = 2;  // only under --strict

/// Dispatches the command, writes the report (JSON or CSV) to config.out
/// or stdout, and returns the exit code.
int run(const RunConfig& config);

}  // namespace jetflow::cli
