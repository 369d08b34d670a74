#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "report.hpp"
#include "spacelike/battery.hpp"
#include "spacelike/expr.hpp"

using nlohmann::json;
using namespace spacelike;
using namespace spacelike::cli;
namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("spacelike_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write_config(const json& doc, const std::string& name = "job.json") {
    const fs::path p = dir_ / name;
    std::ofstream(p) << doc.dump(2);
    return p.string();
  }

  /// Runs `command` with JSON output and returns (exit code, parsed output).
  std::pair<int, json> run(const std::string& command, const json& doc, RunOptions opt = {}) {
    opt.config_path = write_config(doc);
    opt.out = (dir_ / "out.json").string();
    opt.format = Format::Json;
    std::ostringstream err;
    const int code = run_command(command, opt, err);
    stderr_ = err.str();
    json out;
    if (fs::exists(opt.out)) out = json::parse(std::ifstream(opt.out));
    return {code, out};
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  }

  fs::path dir_;
  std::string stderr_;
};

json grid(double half, double h) { return {{"lower", {-half, -half}}, {"upper", {half, half}}, {"spacing", h}}; }

std::string config_error_path(const json& doc, const std::string& command) {
  try {
    (void)parse_config(doc, command);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<no error>";
}

}  // namespace

TEST(Config, ErrorsNameTheField) {
  const json base = {{"m", 2}, {"components", {"x1*x2"}}, {"lattice", grid(1, 0.25)}};
  EXPECT_EQ(config_error_path(base, "analyze"), "<no error>");

  json d = base;
  d.erase("lattice");
  EXPECT_EQ(config_error_path(d, "analyze"), "/lattice");
  d = base;
  d["lattice"]["spacing"] = -1;
  EXPECT_EQ(config_error_path(d, "analyze"), "/lattice/spacing");
  d = base;
  d["lattice"]["upper"] = {1, "x"};
  EXPECT_EQ(config_error_path(d, "analyze"), "/lattice/upper/1");
  d = base;
  d["components"] = {"x1", "x1 +"};
  EXPECT_EQ(config_error_path(d, "analyze"), "/components/1");
  d = base;
  d["components"] = {"x3"};
  EXPECT_EQ(config_error_path(d, "analyze"), "/components/0");
  d = base;
  d["m"] = 9;
  EXPECT_EQ(config_error_path(d, "analyze"), "/m");
  d = base;
  d["output"] = {{"format", "xml"}};
  EXPECT_EQ(config_error_path(d, "analyze"), "/output/format");
  d = base;
  d["command"] = "scan";
  EXPECT_EQ(config_error_path(d, "analyze"), "/command");
  d = base;
  d["lattice"]["mask"] = {{"inner", 1.0}, {"outer", 0.5}};
  EXPECT_EQ(config_error_path(d, "analyze"), "/lattice/mask/outer");

  const json scan = {{"boundary", "x1"}, {"scan", {{"radii", {1, 3, 2}}}}};
  EXPECT_EQ(config_error_path(scan, "scan"), "/scan/radii/2");
  EXPECT_EQ(config_error_path({{"m", 4}, {"boundary", "x1"}, {"lattice", grid(1, 0.5)}}, "solve-maximal"), "/m");
  EXPECT_EQ(config_error_path({{"m", 2}, {"boundary", "x1"}, {"c", 0}, {"lattice", grid(1, 0.5)}}, "solve-ma"), "/c");
  EXPECT_EQ(config_error_path({{"m", 2}, {"potential", "log("}, {"lattice", grid(1, 0.5)}}, "lagrangian"), "/potential");
  EXPECT_EQ(config_error_path({{"m", 2}, {"boundary", "x1"}, {"lattice", grid(1, 0.5)}, {"solver", {{"tol", 0}}}},
                              "solve-maximal"),
            "/solver/tol");
}

TEST_F(Cli, ConfigErrorExitCode) {
  const auto [code, out] = run("analyze", {{"m", 2}, {"components", {"x1^0.5"}}, {"lattice", grid(1, 0.5)}});
  EXPECT_EQ(code, kExitConfig);
  EXPECT_NE(stderr_.find("/components/0"), std::string::npos);
  std::ostringstream err;
  RunOptions opt;
  opt.config_path = (dir_ / "missing.json").string();
  EXPECT_EQ(run_command("analyze", opt, err), kExitConfig);
  std::ofstream(dir_ / "bad.json") << "{ not json";
  opt.config_path = (dir_ / "bad.json").string();
  EXPECT_EQ(run_command("analyze", opt, err), kExitConfig);
}

TEST_F(Cli, AnalyzeTiltedLine) {
  const auto [code, out] = run("analyze", {{"m", 1}, {"components", {"0.6*x1"}},
                                           {"lattice", {{"lower", {-1}}, {"upper", {1}}, {"spacing", 0.25}}}});
  ASSERT_EQ(code, kExitOk);
  ASSERT_EQ(out["records"].size(), 9u);
  const double d0 = out["records"][0]["gauss_distance"];
  EXPECT_NEAR(d0, 0.0, 1e-15);
  for (const auto& r : out["records"]) {
    EXPECT_EQ(r["status"], "ok");
    EXPECT_EQ(r["spacelike"], 1);
    EXPECT_EQ(r["S"], 0.0);
    EXPECT_NEAR(r["gauss_distance"].get<double>(), d0, 1e-15);
    const double x = r["x1"];
    EXPECT_NEAR(r["z"].get<double>(), 0.64 * x * x, 1e-14);
  }
  EXPECT_EQ(out["meta"]["command"], "analyze");
  EXPECT_EQ(out["meta"]["config"]["components"][0], "0.6*x1");
}

TEST_F(Cli, AnalyzeShiftedHyperboloid) {
  const auto [code, out] = run("analyze", {{"m", 2}, {"components", {hyperboloid_text(2, true)}}, {"lattice", grid(1.5, 0.25)}});
  ASSERT_EQ(code, kExitOk);
  for (const auto& r : out["records"]) EXPECT_NEAR(r["H_norm"].get<double>(), 1.0, 1e-9);
}

TEST_F(Cli, AnalyzeFlagsTimelikeNodes) {
  const auto [code, out] = run("analyze", {{"m", 1}, {"components", {"2*x1"}},
                                           {"lattice", {{"lower", {0}}, {"upper", {1}}, {"spacing", 0.5}}}});
  EXPECT_EQ(code, kExitOk);
  for (const auto& r : out["records"]) {
    EXPECT_EQ(r["status"], "not-spacelike");
    EXPECT_EQ(r["spacelike"], 0);
    EXPECT_EQ(r["S"], "nan");
  }
  EXPECT_NE(stderr_.find("warning: 3 of 3"), std::string::npos);
}

TEST_F(Cli, AnalyzeOracleColumn) {
  RunOptions opt;
  opt.oracle = true;
  const auto [code, out] = run("analyze", {{"m", 2}, {"components", {"0.2*x1^3 - 0.1*x1*x2^2", "0.15*x2^2*x1"}},
                                           {"lattice", grid(0.5, 0.25)}}, opt);
  ASSERT_EQ(code, kExitOk);
  for (const auto& r : out["records"]) EXPECT_LE(r["gauss_oracle_dev"].get<double>(), 1e-10);
}

TEST_F(Cli, AnalyzeWithoutBasePoint) {
  // asinh(sqrt(r^2)) is undefined at the origin, so z cannot be measured from X(0).
  const json doc = {{"m", 2}, {"components", {catenoid_text()}},
                    {"lattice", {{"lower", {0.5, 0.5}}, {"upper", {1, 1}}, {"spacing", 0.25}}}};
  const auto [code, out] = run("analyze", doc);
  EXPECT_EQ(code, kExitOk);
  for (const auto& r : out["records"]) {
    EXPECT_EQ(r["z"], "nan");
    EXPECT_EQ(r["status"].get<std::string>().rfind("partial", 0), 0u);
    EXPECT_LE(r["H_norm"].get<double>(), 1e-9);
  }
}

TEST_F(Cli, LagrangianColumns) {
  RunOptions opt;
  opt.oracle = true;
  auto [code, out] = run("lagrangian", {{"m", 2}, {"potential", "0.5*(x1^2 + x2^2)"}, {"lattice", grid(1, 0.5)}}, opt);
  ASSERT_EQ(code, kExitOk);
  for (const auto& r : out["records"]) {
    for (const char* c : {"scalar_curvature", "min_ricci_eig", "H_norm", "S", "B_1_1_2", "ma_residual"}) EXPECT_EQ(r[c], 0.0) << c;
    EXPECT_EQ(r["g_1_1"], 1.0);
  }
  std::tie(code, out) = run("lagrangian", {{"m", 2}, {"potential", "x1^4 + x2^4 + 0.5*(x1^2 + x2^2)"}, {"lattice", grid(1, 0.5)}}, opt);
  ASSERT_EQ(code, kExitOk);
  for (const auto& r : out["records"]) EXPECT_LE(r["riemann_oracle_dev"].get<double>(), 1e-6);
}

TEST_F(Cli, LagrangianFlagsNonConvexNodes) {
  const auto [code, out] = run("lagrangian", {{"m", 2}, {"potential", "x1^4 - x2^2"}, {"lattice", grid(1, 0.5)}});
  EXPECT_EQ(code, kExitOk);
  int flagged = 0;
  for (const auto& r : out["records"]) {
    if (r["status"] == "not-convex") {
      ++flagged;
      EXPECT_EQ(r["scalar_curvature"], "nan");
      EXPECT_TRUE(r["ma_residual"].is_number());
    }
  }
  EXPECT_EQ(flagged, 25);
}

TEST_F(Cli, SolveCatenoidWritesFieldAndLog) {
  const double h = 1.0 / 8;
  const json doc = {{"m", 2},
                    {"boundary", catenoid_text()},
                    {"lattice", {{"lower", {-2.25, -2.25}}, {"upper", {2.25, 2.25}}, {"spacing", h},
                                 {"mask", {{"center", {0, 0}}, {"inner", 0.5}, {"outer", 2}}}}},
                    {"solver", {{"tol", 1e-10}}}};
  const auto [code, out] = run("solve-maximal", doc);
  ASSERT_EQ(code, kExitOk);
  const json log = json::parse(std::ifstream(dir_ / "out.json.log.json"));
  ASSERT_FALSE(log["records"].empty());
  EXPECT_LE(log["records"].back()["residual"].get<double>(), 1e-10);
  EXPECT_EQ(log["records"].back()["lambda"], 1.0);

  // Round trip through the field reader.
  const GridField f = read_field_json(out);
  EXPECT_EQ(f.lattice.size(), out["meta"]["lattice"].is_object() ? f.lattice.size() : 0u);
  std::size_t seen = 0;
  for (const auto& r : out["records"]) {
    const std::size_t node = r["node"];
    EXPECT_EQ(f.values[node], r["value"].get<double>());
    EXPECT_EQ(std::string(to_string(f.roles[node])), r["role"].get<std::string>());
    ++seen;
  }
  EXPECT_EQ(seen, out["records"].size());
  EXPECT_LE(maximal_residual_norm(f), 1e-10);
}

TEST_F(Cli, SolveFailureExitCode) {
  const auto [code, out] = run("solve-maximal", {{"m", 2}, {"boundary", "1.5*x1"}, {"lattice", grid(1, 0.25)}});
  EXPECT_EQ(code, kExitNumerical);
  EXPECT_NE(stderr_.find("solver failed"), std::string::npos);
}

TEST_F(Cli, SolveMongeAmpere) {
  const auto [code, out] = run("solve-ma", {{"m", 2}, {"boundary", "0.5*(2*x1^2 + 0.5*x2^2)"}, {"c", 1},
                                            {"lattice", {{"lower", {0, 0}}, {"upper", {1, 1}}, {"spacing", 0.125}}}});
  ASSERT_EQ(code, kExitOk);
  const Expr exact = parse("0.5*(2*x1^2 + 0.5*x2^2)", 2);
  for (const auto& r : out["records"])
    EXPECT_NEAR(r["value"].get<double>(), evaluate(exact, std::vector<double>{r["x1"], r["x2"]}), 1e-10);
  EXPECT_GT(out["meta"]["min_discrete_hessian_eig"].get<double>(), 0.0);
}

TEST_F(Cli, ScanAffineIsExactZero) {
  const auto [code, out] = run("scan", {{"boundary", "0.3*x1 - 0.2*x2"}, {"scan", {{"radii", {1, 2}}, {"nodes_per_radius", 8}}}});
  ASSERT_EQ(code, kExitOk);
  ASSERT_EQ(out["records"].size(), 2u);
  for (const auto& r : out["records"]) EXPECT_EQ(r["slope"], "exact-zero");
}

TEST_F(Cli, CheckPasses) {
  RunOptions opt;
  opt.seed = 42;
  std::ostringstream err;
  opt.out = (dir_ / "check.csv").string();
  EXPECT_EQ(run_command("check", opt, err), kExitOk);
  const std::string csv = slurp(opt.out);
  EXPECT_EQ(csv.rfind("suite,name,value,tolerance,status,detail\n", 0), 0u);
  EXPECT_EQ(csv.find(",fail,"), std::string::npos);
  for (const char* suite : {"exprparse", "jets", "graphgeom", "grassmann", "lagrangian", "solver", "bernstein"})
    EXPECT_NE(csv.find(std::string("\n") + suite + ","), std::string::npos) << suite;
}

TEST_F(Cli, ThreadCountDoesNotChangeOutput) {
  const json doc = {{"m", 2}, {"components", {"0.3*x1^3 + 0.2*x1*x2 - 0.1*x2^2"}}, {"lattice", grid(1, 0.125)}};
  const std::string cfg = write_config(doc);
  std::ostringstream err;
  RunOptions opt;
  opt.config_path = cfg;
  opt.out = (dir_ / "one.csv").string();
  ASSERT_EQ(run_command("analyze", opt, err), kExitOk);
  opt.threads = 4;
  opt.out = (dir_ / "four.csv").string();
  ASSERT_EQ(run_command("analyze", opt, err), kExitOk);
  EXPECT_EQ(slurp(dir_ / "one.csv"), slurp(dir_ / "four.csv"));
}

TEST(Report, NumberFormatting) {
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(format_number(std::nan("")), "nan");
  EXPECT_EQ(format_number(INFINITY), "nan");
  EXPECT_EQ(format_number(-2.0), "-2");
}

TEST(Report, CsvEscaping) {
  Table t;
  t.columns = {"a", "b"};
  t.rows.push_back({std::string("x, \"y\""), std::int64_t{3}});
  std::ostringstream os;
  write_csv(os, t);
  EXPECT_EQ(os.str(), "a,b\n\"x, \"\"y\"\"\",3\n");
}

TEST(Tool, ExecutableRunsCheck) {
  const std::string cmd = std::string(SPACELIKE_TOOL_PATH) + " check --seed 3 > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  EXPECT_EQ(WEXITSTATUS(status), 0);
  const std::string bad = std::string(SPACELIKE_TOOL_PATH) + " analyze --config /nonexistent.json > /dev/null 2>&1";
  EXPECT_EQ(WEXITSTATUS(std::system(bad.c_str())), 1);
}
