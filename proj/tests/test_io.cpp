#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "riskgp/io.hpp"

using namespace riskgp;
namespace fs = std::filesystem;

namespace {

std::string config_error(const std::string& text) {
  try {
    (void)config_from_json(json::parse(text));
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("riskgp_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  // Exit status of the CLI with stdout captured to out.txt.
  int run(const std::string& args) const {
    const std::string cmd =
        "\"" + std::string(RISKGP_CLI_PATH) + "\" " + args + " > \"" + (dir_ / "out.txt").string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  std::string output() const { return slurp(dir_ / "out.txt"); }

  fs::path dir_;
};

}  // namespace

TEST(Config, ErrorsNameTheOffendingKey) {
  EXPECT_NE(config_error(R"({"fixture": "linear-2002", "goals": [1, "x", 3]})").find("goals[1]"), std::string::npos);
  EXPECT_NE(config_error(R"({"fixture": "nope"})").find("fixture"), std::string::npos);
  EXPECT_NE(config_error(R"({"fixture": "entropic", "colour": 1})").find("colour: unknown key"), std::string::npos);
  EXPECT_NE(config_error(R"({"fixture": "entropic", "solver": {"grid": 0}})").find("solver.grid"), std::string::npos);
  EXPECT_NE(config_error(R"({"fixture": "entropic", "solver": {"threads": "many"}})").find("solver.threads"),
            std::string::npos);
  EXPECT_NE(config_error(R"({"model": {"assets": "linear", "criteria": [{"kind": "expected-loss"}]}, "goals": [0]})")
                .find("model.criteria[0].i"),
            std::string::npos);
  EXPECT_NE(config_error(R"({"model": {"assets": "linear", "criteria": [{"kind": "cvar", "i": 2}]}, "goals": [0]})")
                .find("model.criteria[0].kind"),
            std::string::npos);
  EXPECT_NE(config_error(R"({"model": {"assets": "linear", "criteria": [{"kind": "expected-loss", "i": 2}]}})")
                .find("goals"),
            std::string::npos);
  EXPECT_NE(config_error(R"({})").find("fixture/model"), std::string::npos);
  EXPECT_NE(config_error(R"({"fixture": "entropic", "sense": "up"})").find("sense"), std::string::npos);
}

TEST(Config, InlineModelWithScenarioExpansion) {
  const auto c = config_from_json(json::parse(R"({
    "model": {"assets": "entropic", "scenarios": [2, 3, 4],
              "criteria": [{"kind": "entropic", "lambda": [4, 5, 6], "mode": "paper"}]},
    "goals": [-4, -5, -6],
    "satisfaction": {"kind": "paper", "xi_i": 10, "xi_d": 60, "xi_v": 60, "eps": 1e-6},
    "objective": "satisfaction-gp", "sense": "max",
    "solver": {"grid": 50, "refine_iters": 10, "tol": 1e-9, "threads": "auto"}})"));
  ASSERT_EQ(c.criteria.size(), 3u);
  EXPECT_EQ(c.criteria[2].scenario, 4.0);
  EXPECT_EQ(c.criteria[2].risk_aversion, 6.0);
  EXPECT_EQ(c.criteria[0].mode, EvalMode::printed);
  EXPECT_EQ(c.solver.grid, 50);
  EXPECT_EQ(c.solver.threads, 0);
  EXPECT_EQ(c.program().sense(), Sense::maximize);
}

TEST(Config, PayoffPiecesParse) {
  const auto c = config_from_json(json::parse(R"({
    "model": {"assets": [[1], [0, 2], [{"end": 0.25, "coeffs": [0]}, {"end": 1, "coeffs": [-1, 4]}]],
              "criteria": [{"kind": "expected-loss", "i": 2}]},
    "goals": [-1]})"));
  ASSERT_EQ(c.assets.size(), 3u);
  EXPECT_DOUBLE_EQ(c.assets[2](0.5), 1.0);
  EXPECT_EQ(c.objective, ObjectiveKind::weighted_gp);
}

TEST(Config, ExpandedRoundTrip) {
  for (const auto& f : fixtures()) {
    const auto c = fixture_config(f);
    const auto j = config_to_json(c);
    const auto back = expanded_config_from_json(j);
    EXPECT_EQ(config_to_json(back).dump(), j.dump()) << f.id;
    EXPECT_EQ(back.fixture, c.fixture);
  }
}

TEST(Report, RoundTripReproducesObjective) {
  for (const auto& f : fixtures()) {
    auto cfg = fixture_config(f);
    cfg.solver.grid = 30;
    const auto gp = cfg.program();
    const auto r = solve(gp, cfg.solver);
    const auto text = run_report(cfg, r, true).dump();
    const auto doc = json::parse(text);
    const auto back = solve_report_from_json(doc.at("solution"), gp.sense());
    const auto cfg_back = expanded_config_from_json(doc.at("config"));
    EXPECT_NEAR(objective(cfg_back.program(), back.best_alpha), r.objective, 1e-10) << f.id;
    EXPECT_EQ(back.trace.method, r.trace.method);
    EXPECT_EQ(back.region.has_value(), r.region.has_value());
    EXPECT_EQ(run_report(cfg, r, true).dump(), text) << "deterministic report differs";
    EXPECT_TRUE(doc["provenance"].contains("config_hash"));
    EXPECT_FALSE(doc["provenance"].contains("timestamp"));
    EXPECT_TRUE(run_report(cfg, r, false)["provenance"].contains("timestamp"));
  }
}

TEST(Csv, QuotingAndNumbers) {
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv_number(0.1), "0.10000000000000001");
  EXPECT_EQ(std::stod(csv_number(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Csv, GridRowCount) {
  const auto cfg = fixture_config(*find_fixture("linear-2002"));
  const auto grid = simplex_grid(3, 20);
  std::vector<Evaluation> evals;
  for (const auto& a : grid) evals.push_back(evaluate(cfg.program(), a));
  std::ostringstream os;
  write_grid_csv(os, cfg.criteria, grid, evals);
  const std::string s = os.str();
  std::size_t rows = 0;
  for (std::size_t p = s.find("\r\n"); p != std::string::npos; p = s.find("\r\n", p + 2)) ++rows;
  EXPECT_EQ(rows, grid_size(3, 20) + 1);
  EXPECT_EQ(s.substr(0, s.find(',')), "alpha_1");
}

TEST(Hash, Fnv1a) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(hex64(fnv1a64("a")), "af63dc4c8601ec8c");
}

TEST_F(Cli, RunWritesReportsAndCsv) {
  ASSERT_EQ(run("run --fixture var-triangle --grid 20 --deterministic -o \"" + dir_.string() + "\""), 0) << output();
  const auto report = json::parse(slurp(dir_ / "report.json"));
  const auto& region = report["solution"]["region"];
  EXPECT_EQ(region["variant"], "triangle");
  const std::string grid = slurp(dir_ / "grid.csv");
  EXPECT_EQ(static_cast<std::size_t>(std::count(grid.begin(), grid.end(), '\n')), grid_size(3, 20) + 1);
  EXPECT_TRUE(fs::exists(dir_ / "front.csv"));
}

TEST_F(Cli, DeterministicReportsAreByteIdentical) {
  ASSERT_EQ(run("run --fixture entropic --grid 15 --deterministic -o \"" + (dir_ / "a").string() + "\""), 0);
  ASSERT_EQ(run("run --fixture entropic --grid 15 --deterministic -o \"" + (dir_ / "b").string() + "\""), 0);
  EXPECT_EQ(slurp(dir_ / "a" / "report.json"), slurp(dir_ / "b" / "report.json"));
}

TEST_F(Cli, ConfigFileAndModeOverride) {
  {
    std::ofstream cfg(dir_ / "cfg.json");
    cfg << R"({"fixture": "linear-2002", "solver": {"grid": 12}, "output": {"directory": ")" << dir_.string()
        << R"("}})";
  }
  EXPECT_EQ(run("run -c \"" + (dir_ / "cfg.json").string() + "\" --mode paper --deterministic"), 0) << output();
  const auto report = json::parse(slurp(dir_ / "report.json"));
  EXPECT_EQ(report["provenance"]["mode"], "paper");
  EXPECT_EQ(report["solution"]["trace"]["grid"], 12);
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run("run -c \"" + (dir_ / "missing.json").string() + "\""), 1);
  EXPECT_NE(output().find("missing.json"), std::string::npos);
  EXPECT_EQ(run("run --fixture nope"), 1);
  EXPECT_EQ(run("run"), 1);
  EXPECT_EQ(run("frobnicate"), 1);
  {
    std::ofstream cfg(dir_ / "bad.json");
    cfg << R"({"fixture": "entropic", "goals": [1, 2]})";
  }
  EXPECT_EQ(run("run -c \"" + (dir_ / "bad.json").string() + "\""), 1);
  {
    std::ofstream cfg(dir_ / "veto.json");
    cfg << R"({"fixture": "linear-2002", "goals": [100, 100, 100], "solver": {"grid": 5}, "output": {"directory": ")"
        << dir_.string() << R"("}})";
  }
  EXPECT_EQ(run("run -c \"" + (dir_ / "veto.json").string() + "\""), 2);
}

TEST_F(Cli, ListFixturesIsStable) {
  ASSERT_EQ(run("list-fixtures"), 0);
  const std::string first = output();
  ASSERT_EQ(run("list-fixtures"), 0);
  EXPECT_EQ(output(), first);
  EXPECT_EQ(std::count(first.begin(), first.end(), '\n'), 3);
  for (const char* id : {"linear-2002", "entropic", "var-triangle"}) EXPECT_NE(first.find(id), std::string::npos);
  ASSERT_EQ(run("list-fixtures --json"), 0);
  const auto j = json::parse(output());
  ASSERT_EQ(j.size(), 3u);
  EXPECT_EQ(j[0]["id"], "linear-2002");
}

TEST_F(Cli, ParetoAndAudit) {
  ASSERT_EQ(run("pareto --fixture linear-2002 --grid 10 -o \"" + dir_.string() + "\""), 0);
  const std::string front = slurp(dir_ / "front.csv");
  EXPECT_EQ(std::count(front.begin(), front.end(), '\n'), 2);  // header + the ideal corner
}
