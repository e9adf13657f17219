#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "sqg/cli.hpp"
#include "sqg/io.hpp"

namespace sqg {
namespace {

namespace fs = std::filesystem;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("sqg_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return cli_main(args, out_, err_);
  }
  std::string write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

TEST_F(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run({}), kExitUsage);
  EXPECT_NE(err_.str().find("simulate"), std::string::npos);
  EXPECT_EQ(run({"frobnicate"}), kExitUsage);
  EXPECT_EQ(run({"simulate", "--bogus"}), kExitUsage);
  EXPECT_EQ(run({"simulate", "--seed", "abc"}), kExitUsage);
  EXPECT_EQ(run({"simulate", "--config", (dir_ / "missing.json").string()}), kExitUsage);
  EXPECT_EQ(run({"report"}), kExitUsage);
}

TEST_F(Cli, HelpExitsZero) {
  EXPECT_EQ(run({"--help"}), kExitPass);
  EXPECT_NE(out_.str().find("verify-inequalities"), std::string::npos);
  EXPECT_EQ(run({"simulate", "--help"}), kExitPass);
  EXPECT_NE(out_.str().find("--config"), std::string::npos);
}

TEST_F(Cli, ConfigErrorsExitTwoAndNameTheField) {
  const std::string cfg = write("bad.json", R"({"initial": {"amplitud": 1}})");
  EXPECT_EQ(run({"simulate", "--config", cfg}), kExitUsage);
  EXPECT_NE(err_.str().find("initial.amplitud"), std::string::npos);
  const std::string invalid = write("invalid.json", R"({"n": 33})");
  EXPECT_EQ(run({"verify-estimates", "--config", invalid}), kExitUsage);
}

TEST_F(Cli, SimulateWritesTrajectoryAndSnapshot) {
  const std::string cfg = write("c.json", R"({"n": 32, "t_end": 0.0, "small_n": 32})");
  const fs::path out = dir_ / "run";
  EXPECT_EQ(run({"simulate", "--config", cfg, "--out", out.string(), "--seed", "9", "--quiet"}), kExitPass);
  EXPECT_EQ(out_.str(), "");
  const NormTrajectory traj = read_timeseries(out / "trajectory.csv");
  EXPECT_EQ(traj.size(), 1u);
  const Snapshot snap = read_snapshot(out / "final.sqgf");
  EXPECT_EQ(snap.state.theta.grid().n(), 32);
  EXPECT_EQ(snap.state.t, 0.0);

  // A short evolution lands on t_end.
  const std::string cfg2 = write("c2.json", R"({"n": 32, "t_end": 0.01, "small_n": 32,
      "schedule": {"kind": "linear", "count": 4}})");
  EXPECT_EQ(run({"simulate", "--config", cfg2, "--out", out.string()}), kExitPass);
  EXPECT_NE(out_.str().find("samples=5"), std::string::npos);
  EXPECT_EQ(read_snapshot(out / "final.sqgf").state.t, 0.01);
}

TEST_F(Cli, SmallInequalitySuitePasses) {
  const std::string cfg = write("q.json", R"({"inequalities": {"ensemble": 2, "grid_sizes": [32, 64],
      "commutator_grid_sizes": [32, 64], "extra_commutator_tuples": 0}})");
  EXPECT_EQ(run({"verify-inequalities", "--config", cfg, "--out", dir_.string()}), kExitPass);
  EXPECT_TRUE(fs::exists(dir_ / "inequalities.json"));
  EXPECT_EQ(run({"report", (dir_ / "inequalities.json").string()}), kExitPass);
  EXPECT_NE(out_.str().find("semigroup_block"), std::string::npos);
}

TEST_F(Cli, ReportExitCodeFollowsTheVerdict) {
  const std::string head = R"({"schema_version": 1, "kind": "estimate_report",
      "environment": {"gamma": 1.0, "n": 64, "dt": 1e-4, "t_end": 20.0, "seed": 1},
      "claims": [)";
  const std::string pass = write("p.json", head + R"({"id": "data", "verdict": "pass", "measured": 0.1, "threshold": 0.05}]})");
  const std::string fail = write("f.json", head + R"({"id": "thm2", "verdict": "fail", "measured": 1.0, "threshold": 0.0}]})");
  const std::string div = write("d.json", head + R"({"id": "diverged", "verdict": "diverged", "measured": null, "threshold": null}]})");
  EXPECT_EQ(run({"report", pass}), kExitPass);
  EXPECT_EQ(run({"report", fail, "--quiet"}), kExitFailed);
  EXPECT_EQ(out_.str(), "");
  EXPECT_EQ(run({"report", div}), kExitDiverged);
  EXPECT_EQ(run({"report", write("junk.json", "[")}), kExitUsage);
}

TEST_F(Cli, EstimatesOnAZeroHorizonPass) {
  const std::string cfg = write("e.json", R"({"n": 32, "small_n": 32, "t_end": 0.0})");
  EXPECT_EQ(run({"verify-estimates", "--config", cfg, "--out", dir_.string(), "--quiet"}), kExitPass);
  EXPECT_TRUE(fs::exists(dir_ / "estimates.json"));
  EXPECT_TRUE(fs::exists(dir_ / "trajectory.csv"));
}

TEST_F(Cli, BenchRuns) {
  const std::string cfg = write("b.json", R"({"n": 32, "small_n": 32})");
  EXPECT_EQ(run({"bench", "--config", cfg, "--steps", "2"}), kExitPass);
  EXPECT_NE(out_.str().find("etd2"), std::string::npos);
  EXPECT_EQ(run({"bench", "--steps", "0"}), kExitUsage);
}

TEST_F(Cli, ExecutableUsesTheSameExitCodes) {
  const std::string exe = SQG_CLI_PATH;
  auto status = [&](const std::string& args, const std::string& env = "") {
    const int raw = std::system((env + " " + exe + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  EXPECT_EQ(status(""), kExitUsage);
  EXPECT_EQ(status("--help"), kExitPass);
  const std::string cfg = write("x.json", R"({"n": 32, "small_n": 32, "t_end": 0.0})");
  EXPECT_EQ(status("simulate --quiet --config " + cfg + " --out " + dir_.string()), kExitPass);
  EXPECT_EQ(status("simulate --quiet --config " + cfg + " --out " + dir_.string(), "SQG_THREADS=1"),
            kExitPass);
  EXPECT_EQ(status("simulate extra"), kExitUsage);
}

}  // namespace
}  // namespace sqg
