#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "chain_io.hpp"
#include "commands.hpp"
#include "jetflow/generators.hpp"

using namespace jetflow;
using nlohmann::json;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    std::string tmpl = (std::filesystem::temp_directory_path() /
                        "jetflow_cli_XXXXXX").string();
    dir_ = mkdtemp(tmpl.data());
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string path(const std::string& name) const {
    return (std::filesystem::path(dir_) / name).string();
  }

  std::string write_file(const std::string& name, const std::string& text) {
    const std::string p = path(name);
    std::ofstream out(p);
    out << text;
    return p;
  }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  std::string dir_;
};

constexpr const char* kAveraging =
    R"({"n": 2, "kind": "static", "matrices": [[[0.5, 0.5], [0.5, 0.5]]]})";
constexpr const char* kSwap =
    R"({"n": 2, "kind": "static", "matrices": [[[0, 1], [1, 0]]]})";

}  // namespace

TEST_F(CliTest, ParsesStaticChainRoundTrip) {
  const std::string file = write_file("avg.json", kAveraging);
  const ChainSpec spec = cli::parse_chain_file(file);
  EXPECT_EQ(spec.kind(), ChainSpec::Kind::kStatic);
  EXPECT_EQ(spec.agents(), 2);
  EXPECT_DOUBLE_EQ(matrix_at(spec, 5)(0, 1), 0.5);
  const auto doc = cli::chain_to_json(spec);
  EXPECT_EQ(cli::parse_chain_json(doc).agents(), 2);
}

TEST_F(CliTest, BadRowSumNamesTheRow) {
  const std::string file = write_file(
      "bad.json",
      R"({"n": 2, "kind": "static", "matrices": [[[0.5, 0.5], [0.6, 0.5]]]})");
  try {
    cli::parse_chain_file(file);
    FAIL() << "expected ChainFileError";
  } catch (const cli::ChainFileError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("matrices[0]"), std::string::npos);
    EXPECT_NE(msg.find("row 1"), std::string::npos);
  }
}

TEST_F(CliTest, GeneratorFileMapsToSeededFamily) {
  const std::string file = write_file(
      "gen.json",
      R"({"n": 4, "kind": "generator", "family": "doubly_stochastic", "seed": 7})");
  const ChainSpec spec = cli::parse_chain_file(file);
  EXPECT_EQ(spec.kind(), ChainSpec::Kind::kGenerator);
  EXPECT_EQ(matrix_at(spec, 3).data(),
            matrix_at(gen_doubly_stochastic(4, 7), 3).data());
}

TEST_F(CliTest, ExplicitChainRequiresTailPolicy) {
  const std::string file = write_file(
      "explicit.json",
      R"({"n": 2, "kind": "explicit", "matrices": [[[1, 0], [0, 1]]]})");
  EXPECT_THROW(cli::parse_chain_file(file), cli::ChainFileError);
}

TEST_F(CliTest, ClassifyTwoLeaderReportsBlocks) {
  cli::RunConfig gen;
  gen.command = "gen";
  gen.family = "two_leader";
  gen.agents = 4;
  gen.seed = 3;
  gen.out = path("two.json");
  ASSERT_EQ(cli::run(gen), cli::kExitOk);

  cli::RunConfig cfg;
  cfg.command = "classify";
  cfg.input = path("two.json");
  cfg.out = path("report.json");
  cfg.horizon = 400;
  ASSERT_EQ(cli::run(cfg), cli::kExitOk);

  const json report = json::parse(slurp(path("report.json")));
  EXPECT_EQ(report["result"]["verdict"], "class-ergodic");
  EXPECT_EQ(report["result"]["cluster_count"], 2);
  EXPECT_EQ(report["result"]["clusters"][0], (json::array({0, 1})));
  EXPECT_EQ(report["result"]["clusters"][1], (json::array({2, 3})));
  EXPECT_TRUE(report["result"]["clusters_match_islands"].get<bool>());
  EXPECT_TRUE(report.contains("config"));
  EXPECT_TRUE(report.contains("residuals"));
  EXPECT_TRUE(report.contains("warnings"));
}

TEST_F(CliTest, MatchSwapReportsPermutation) {
  cli::RunConfig cfg;
  cfg.command = "match";
  cfg.input = write_file("swap.json", kSwap);
  cfg.out = path("match.json");
  cfg.psi = 1.0;
  ASSERT_EQ(cli::run(cfg), cli::kExitOk);
  const json report = json::parse(slurp(path("match.json")));
  EXPECT_TRUE(report["result"]["matched"].get<bool>());
  EXPECT_EQ(report["result"]["tau"], (json::array({1, 0})));
  EXPECT_DOUBLE_EQ(report["result"]["delta"].get<double>(), 0.5);
}

TEST_F(CliTest, PstarUniformOnDoublyStochastic) {
  cli::RunConfig gen;
  gen.command = "gen";
  gen.family = "doubly_stochastic";
  gen.agents = 4;
  gen.seed = 11;
  gen.out = path("ds.json");
  ASSERT_EQ(cli::run(gen), cli::kExitOk);

  cli::RunConfig cfg;
  cfg.command = "pstar";
  cfg.input = path("ds.json");
  cfg.out = path("pstar.json");
  cfg.horizon = 40;
  ASSERT_EQ(cli::run(cfg), cli::kExitOk);
  const json report = json::parse(slurp(path("pstar.json")));
  EXPECT_NEAR(report["result"]["pstar"].get<double>(), 0.25, 1e-12);
  EXPECT_TRUE(report["result"]["estimate_only"].get<bool>());
}

TEST_F(CliTest, SimulateWritesCsvSeries) {
  cli::RunConfig cfg;
  cfg.command = "simulate";
  cfg.input = write_file("avg.json", kAveraging);
  cfg.out = path("traj.csv");
  cfg.format = "csv";
  cfg.horizon = 10;
  cfg.x0 = std::vector<double>{0.0, 2.0};
  ASSERT_EQ(cli::run(cfg), cli::kExitOk);
  const std::string csv = slurp(path("traj.csv"));
  std::istringstream lines(csv);
  std::string header;
  std::getline(lines, header);
  EXPECT_EQ(header, "n,x0,x1,spread,z0,z1");
  int rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  EXPECT_EQ(rows, 11);  // n = 0..10
}

TEST_F(CliTest, CsvIsRefusedForStructuralReports) {
  cli::RunConfig cfg;
  cfg.command = "classify";
  cfg.input = write_file("avg.json", kAveraging);
  cfg.format = "csv";
  cfg.horizon = 50;
  EXPECT_EQ(cli::run(cfg), cli::kExitValidation);
}

TEST_F(CliTest, StrictModeFlagsInconclusive) {
  cli::RunConfig cfg;
  cfg.command = "classify";
  cfg.input = write_file("swap.json", kSwap);
  cfg.out = path("swap_report.json");
  cfg.horizon = 100;
  EXPECT_EQ(cli::run(cfg), cli::kExitOk);  // non-strict still succeeds
  cfg.strict = true;
  EXPECT_EQ(cli::run(cfg), cli::kExitInconclusive);
}

TEST_F(CliTest, ValidationFailuresExitOne) {
  cli::RunConfig cfg;
  cfg.command = "classify";
  cfg.input = path("missing.json");
  EXPECT_EQ(cli::run(cfg), cli::kExitValidation);

  cli::RunConfig gen;
  gen.command = "gen";
  gen.family = "no_such_family";
  gen.agents = 4;
  EXPECT_EQ(cli::run(gen), cli::kExitValidation);

  cli::RunConfig unknown;
  unknown.command = "frobnicate";
  unknown.input = write_file("avg2.json", kAveraging);
  EXPECT_EQ(cli::run(unknown), cli::kExitValidation);
}

TEST_F(CliTest, ReportsAreByteIdenticalAcrossRuns) {
  cli::RunConfig gen;
  gen.command = "gen";
  gen.family = "balanced_asymmetric";
  gen.agents = 4;
  gen.seed = 21;
  gen.out = path("ba.json");
  ASSERT_EQ(cli::run(gen), cli::kExitOk);

  for (const std::string command : {"classify", "pstar", "dsdecompose"}) {
    std::vector<std::string> outputs;
    for (int run = 0; run < 3; ++run) {
      cli::RunConfig cfg;
      cfg.command = command;
      cfg.input = path("ba.json");
      cfg.out = path(command + std::to_string(run) + ".json");
      cfg.horizon = 120;
      cfg.seed = 5;
      ASSERT_EQ(cli::run(cfg), cli::kExitOk);
      outputs.push_back(slurp(cfg.out));
    }
    // The config echo differs only in the out path; strip it.
    json a = json::parse(outputs[0]);
    json b = json::parse(outputs[1]);
    json c = json::parse(outputs[2]);
    for (json* r : {&a, &b, &c}) (*r)["config"].erase("out");
    EXPECT_EQ(a.dump(), b.dump()) << command;
    EXPECT_EQ(b.dump(), c.dump()) << command;
  }
}
