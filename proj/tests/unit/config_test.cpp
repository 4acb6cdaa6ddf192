#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "slelab/config.hpp"

using namespace slelab;

namespace {

RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in, "test.cfg");
}

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Config, DefaultsAreValid) {
  const RunConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(cfg.jacobi_k, kJacobiK);
  EXPECT_TRUE(cfg.constraint_spec().is_gamma_cone());
}

TEST(Config, ParsesSectionsListsAndComments) {
  const RunConfig cfg = parse(
      "# header\n"
      "[run]\noutput = out_dir   # trailing\njobs = 2\n"
      "[problem]\nn = 3\nconstraint = sigma2\neps = 0.6\n"
      "[grid]\nhalf_width = 1.5\npoints = 21\n"
      "[family]\nseed = 9\ncount = 3\namplitudes = 0, 0.05\nscales = 1,10\n"
      "[checks]\nlist = jacobi, cutoff\ncutoff_y = 0,0,0; 0.25,0,0\n");
  EXPECT_EQ(cfg.output, "out_dir");
  EXPECT_EQ(cfg.jobs, 2u);
  EXPECT_EQ(cfg.constraint, "sigma2");
  EXPECT_DOUBLE_EQ(cfg.eps, 0.6);
  EXPECT_EQ(cfg.points, 21);
  EXPECT_EQ(cfg.seed, 9u);
  EXPECT_EQ(cfg.amplitudes, (std::vector<double>{0.0, 0.05}));
  EXPECT_EQ(cfg.checks, (std::vector<std::string>{"jacobi", "cutoff"}));
  ASSERT_EQ(cfg.cutoff_y.size(), 2u);
  EXPECT_EQ(cfg.cutoff_y[1], (std::vector<double>{0.25, 0.0, 0.0}));
  EXPECT_FALSE(cfg.constraint_spec().is_gamma_cone());
}

TEST(Config, ErrorsCarryLineNumbers) {
  EXPECT_NE(error_of("[grid]\npoints = 17\n[bogus]\n").find("test.cfg:3:"), std::string::npos);
  EXPECT_NE(error_of("[grid]\n\npoints = seventeen\n").find("test.cfg:3:"), std::string::npos);
  EXPECT_NE(error_of("[grid]\nno equals sign\n").find("test.cfg:2:"), std::string::npos);
  EXPECT_NE(error_of("[grid\n").find("test.cfg:1:"), std::string::npos);
  EXPECT_NE(error_of("[grid]\nwidth = 2\n").find("unknown key"), std::string::npos);
  EXPECT_NE(error_of("[problem]\neps = nan\n").find("finite"), std::string::npos);
}

TEST(Config, ValidationRejectsBadValues) {
  EXPECT_NE(error_of("[grid]\npoints = 16\n").find("grid.points"), std::string::npos);
  EXPECT_NE(error_of("[grid]\npoints = 7\n").find("grid.points"), std::string::npos);
  EXPECT_NE(error_of("[problem]\ntheta = 4.8\n").find("unreachable"), std::string::npos);
  EXPECT_NE(error_of("[problem]\nconstraint = sigma2\nn = 4\n").find("sigma2 needs n = 3"), std::string::npos);
  EXPECT_NE(error_of("[problem]\nconstraint = other\n").find("problem.constraint"), std::string::npos);
  EXPECT_NE(error_of("[checks]\nlist = jacobi, nope\n").find("unknown check"), std::string::npos);
  EXPECT_NE(error_of("[checks]\ndoubling_r = 0.3\n").find("doubling_r"), std::string::npos);
  EXPECT_NE(error_of("[checks]\ncutoff_y = 0,0\n").find("cutoff_y"), std::string::npos);
  EXPECT_NE(error_of("[family]\nscales = 1, -1\n").find("family.scales"), std::string::npos);
  EXPECT_NE(error_of("[problem]\nspectrum = 1, 2\n").find("problem.spectrum"), std::string::npos);
  EXPECT_THROW(load_config("/nonexistent/dir/x.cfg"), ConfigError);
}

TEST(Config, CanonicalFormAndHash) {
  const RunConfig a = parse("[grid]\npoints = 17\n[family]\namplitudes = 0, 0.1\n");
  const RunConfig b = parse("[family]\namplitudes = 0.0,0.10\n[grid]\npoints = 17\n");
  EXPECT_EQ(a.canonical(), b.canonical());
  EXPECT_EQ(a.hash(), b.hash());
  // Worker count does not change the outputs, so it is not hashed.
  RunConfig c = a;
  c.jobs = 4;
  EXPECT_EQ(c.hash(), a.hash());
  c.seed = 2;
  EXPECT_NE(c.hash(), a.hash());
  // Canonical lines are sorted and numbers round-trip.
  RunConfig d;
  d.newton_tol = 0.1 + 0.2;
  const std::string text = d.canonical();
  EXPECT_NE(text.find("solver.tol = 0.30000000000000004"), std::string::npos);
  std::string previous;
  std::istringstream lines(text);
  for (std::string line; std::getline(lines, line);) {
    EXPECT_LT(previous, line);
    previous = line;
  }
}

TEST(Config, SetValueMatchesParser) {
  RunConfig cfg;
  set_config_value(cfg, "checks", "jacobi_k", "2.5");
  EXPECT_EQ(cfg.jacobi_k, 2.5);
  EXPECT_THROW(set_config_value(cfg, "checks", "nothing", "1"), ConfigError);
  EXPECT_THROW(set_config_value(cfg, "grid", "points", "-3"), ConfigError);
  EXPECT_THROW(set_config_value(cfg, "run", "output", "  "), ConfigError);
  EXPECT_EQ(known_checks().size(), 7u);
}
