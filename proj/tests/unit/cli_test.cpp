// Runs the built command-line binary end to end.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code = -1;
  std::string output;
};

CliRun run(const std::string& args) {
  static int counter = 0;
  const fs::path log = fs::temp_directory_path() / ("slelab_cli_test_" + std::to_string(counter++) + ".log");
  const std::string cmd = std::string(SLELAB_BIN) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  CliRun r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  r.output = ss.str();
  fs::remove(log);
  return r;
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
    dir_ = fs::temp_directory_path() /
           ("slelab_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

}  // namespace

TEST_F(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("solve --points banana").code, 2);
  EXPECT_EQ(run("--help").code, 0);
}

TEST_F(Cli, MalformedConfigExitsTwoAndWritesNothing) {
  const fs::path cfg = dir_ / "bad.cfg";
  std::ofstream(cfg) << "[grid]\npoints = 17\n[nonsense]\nx = 1\n";
  const fs::path out = dir_ / "out";
  const CliRun r = run("verify --config " + cfg.string() + " --out " + out.string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.output.find("bad.cfg:3:"), std::string::npos) << r.output;
  EXPECT_FALSE(fs::exists(out));
}

TEST_F(Cli, UnreachablePhaseExitsTwo) {
  const fs::path out = dir_ / "out";
  const CliRun r = run("solve --points 9 --theta 5 --out " + out.string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.output.find("unreachable"), std::string::npos) << r.output;
  EXPECT_FALSE(fs::exists(out));
}

TEST_F(Cli, SolveRecoversQuadraticAndReports) {
  const fs::path out = dir_ / "solve";
  const CliRun r = run("solve --points 9 --spectrum 2,1,0.5 --out " + out.string());
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_TRUE(fs::exists(out / "solution.slgf"));
  const std::string json = slurp(out / "solve.json");
  EXPECT_NE(json.find("\"converged\": true"), std::string::npos);
  EXPECT_NE(json.find("max_error_vs_quadratic"), std::string::npos);
  const CliRun rep = run("report " + (out / "solve.json").string());
  EXPECT_EQ(rep.code, 0);
  EXPECT_NE(rep.output.find("overall PASS"), std::string::npos);
}

TEST_F(Cli, ReportRejectsNonReports) {
  const fs::path junk = dir_ / "junk.json";
  std::ofstream(junk) << "not json";
  EXPECT_EQ(run("report " + junk.string()).code, 2);
  EXPECT_EQ(run("report " + (dir_ / "missing.json").string()).code, 2);
}

TEST_F(Cli, OutputRootFromEnvironment) {
  const std::string cmd = "env SLELAB_OUTPUT_ROOT=" + dir_.string() + " ";
  const int status = std::system((cmd + SLELAB_BIN + " solve --points 9 --out rooted > /dev/null 2>&1").c_str());
  EXPECT_EQ(WEXITSTATUS(status), 0);
  EXPECT_TRUE(fs::exists(dir_ / "rooted" / "solve.json"));
}

// The report records the configured output name, so both runs use the same
// relative name under different roots; the worker count is not recorded.
TEST_F(Cli, VerifyRerunsAreByteIdentical) {
  const std::string args = " verify --points 17 --count 2 --check jacobi,gradient,measures --out rerun";
  for (const char* root : {"a", "b"}) {
    const std::string cmd = "env SLELAB_OUTPUT_ROOT=" + (dir_ / root).string() + " " + SLELAB_BIN + args +
                            (std::string(root) == "b" ? " --jobs 2" : "") + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    ASSERT_EQ(WEXITSTATUS(status), 0) << root;
  }
  const std::string ja = slurp(dir_ / "a" / "rerun" / "verify.json");
  ASSERT_FALSE(ja.empty());
  EXPECT_EQ(ja, slurp(dir_ / "b" / "rerun" / "verify.json"));
}

TEST_F(Cli, SpectralFuzzWritesCampaign) {
  const fs::path out = dir_ / "fuzz";
  const CliRun r = run("spectral-fuzz --n 4 --samples 2000 --out " + out.string());
  EXPECT_EQ(r.code, 0) << r.output;
  const std::string json = slurp(out / "spectral_fuzz.json");
  EXPECT_NE(json.find("\"campaign\""), std::string::npos);
}

TEST_F(Cli, SweepWritesEstimateRecords) {
  const fs::path out = dir_ / "sweep";
  const CliRun r = run("sweep --points 17 --count 2 --out " + out.string());
  EXPECT_EQ(r.code, 0) << r.output;
  EXPECT_TRUE(fs::exists(out / "estimates.csv"));
  EXPECT_TRUE(fs::exists(out / "sweep.json"));
}
