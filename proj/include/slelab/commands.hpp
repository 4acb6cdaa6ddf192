#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "slelab/config.hpp"
#include "slelab/report.hpp"
#include "slelab/solver.hpp"

namespace slelab {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Environment variable naming the directory relative outputs resolve under.
inline constexpr const char* kOutputRootEnv = "SLELAB_OUTPUT_ROOT";

std::filesystem::path resolve_output_dir(const RunConfig& cfg);

struct SolvedInstance {
  FamilyMember member;
  SolveOutcome outcome;
};

/// Builds the configured family and solves every member from its smooth
/// initial guess, up to cfg.jobs at a time. Order follows member index.
std::vector<SolvedInstance> solve_family(const RunConfig& cfg);

/// Cutoff centers: cfg.cutoff_y, or the origin and the node nearest 0.2 e_1.
std::vector<std::vector<double>> cutoff_centers(const RunConfig& cfg, const Grid& grid);

/// Runs the selected checks over solved instances. Returns the "checks"
/// object; `passed` is cleared by any failed assertion.
Json run_checks(const RunConfig& cfg, const std::vector<SolvedInstance>& solved, bool& passed);

/// Report preamble shared by all commands.
Json report_header(const RunConfig& cfg, const std::string& command);

/// Each command stages its files and writes them only after every step
/// succeeded. Return values are exit codes; configuration problems throw
/// ConfigError.
int cmd_spectral_fuzz(const RunConfig& cfg, std::ostream& log);
int cmd_solve(const RunConfig& cfg, std::ostream& log);
int cmd_verify(const RunConfig& cfg, std::ostream& log);
int cmd_sweep(const RunConfig& cfg, std::ostream& log);
/// Summarizes a JSON report written by another command.
int cmd_report(const std::string& path, std::ostream& log);

}  // namespace slelab
