// Command-line front end: spectral-fuzz, solve, verify, sweep, report.

#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "slelab/commands.hpp"
#include "slelab/config.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::optional<std::string> out, constraint, check, spectrum, amplitudes;
  std::optional<int> n, points, max_iter;
  std::optional<double> eps, theta, r, half_width, amplitude, tol, jacobi_k;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples, count;
  std::optional<unsigned> jobs;
};

void add_common(CLI::App* sub, Overrides& o) {
  sub->add_option("--config", o.config_path, "Configuration file");
  sub->add_option("--out", o.out, "Output directory");
  sub->add_option("--n", o.n, "Dimension");
  sub->add_option("--constraint", o.constraint, "cone or sigma2");
  sub->add_option("--eps", o.eps, "eps of the sigma2 family");
  sub->add_option("--seed", o.seed, "Seed");
  sub->add_option("--jobs", o.jobs, "Worker count");
}

void add_grid(CLI::App* sub, Overrides& o) {
  sub->add_option("--points", o.points, "Grid points per axis (odd, >= 9)");
  sub->add_option("--half-width", o.half_width, "Grid half width L");
  sub->add_option("--tol", o.tol, "Newton tolerance");
  sub->add_option("--max-iter", o.max_iter, "Newton iteration limit");
}

void add_family(CLI::App* sub, Overrides& o) {
  sub->add_option("--count", o.count, "Family size");
  sub->add_option("--amplitudes", o.amplitudes, "Comma-separated perturbation amplitudes");
}

template <typename T>
void apply(slelab::RunConfig& cfg, const char* section, const char* key, const std::optional<T>& v) {
  if (!v) return;
  if constexpr (std::is_same_v<T, std::string>) {
    slelab::set_config_value(cfg, section, key, *v);
  } else {
    std::ostringstream s;
    s.precision(17);
    s << *v;
    slelab::set_config_value(cfg, section, key, s.str());
  }
}

slelab::RunConfig build_config(const Overrides& o) {
  slelab::RunConfig cfg = o.config_path.empty() ? slelab::RunConfig{} : slelab::load_config(o.config_path);
  apply(cfg, "run", "output", o.out);
  apply(cfg, "run", "jobs", o.jobs);
  apply(cfg, "problem", "n", o.n);
  apply(cfg, "problem", "constraint", o.constraint);
  apply(cfg, "problem", "eps", o.eps);
  apply(cfg, "problem", "theta", o.theta);
  apply(cfg, "problem", "spectrum", o.spectrum);
  apply(cfg, "problem", "amplitude", o.amplitude);
  apply(cfg, "grid", "points", o.points);
  apply(cfg, "grid", "half_width", o.half_width);
  apply(cfg, "family", "seed", o.seed);
  apply(cfg, "family", "count", o.count);
  apply(cfg, "family", "amplitudes", o.amplitudes);
  apply(cfg, "solver", "tol", o.tol);
  apply(cfg, "solver", "max_iter", o.max_iter);
  apply(cfg, "fuzz", "samples", o.samples);
  apply(cfg, "checks", "list", o.check);
  apply(cfg, "checks", "doubling_r", o.r);
  apply(cfg, "checks", "jacobi_k", o.jacobi_k);
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Special Lagrangian equation numerical laboratory"};
  app.require_subcommand(1);
  Overrides o;
  std::string report_path;

  auto* fuzz = app.add_subcommand("spectral-fuzz", "Eigenvalue lemma sampling campaign");
  add_common(fuzz, o);
  fuzz->add_option("--samples", o.samples, "Admissible spectra to draw");

  auto* solve = app.add_subcommand("solve", "Solve one Dirichlet problem");
  add_common(solve, o);
  add_grid(solve, o);
  solve->add_option("--theta", o.theta, "Phase");
  solve->add_option("--spectrum", o.spectrum, "Comma-separated generating spectrum");
  solve->add_option("--amplitude", o.amplitude, "Boundary perturbation amplitude");

  auto* verify = app.add_subcommand("verify", "Solve a family and run the estimate checks");
  add_common(verify, o);
  add_grid(verify, o);
  add_family(verify, o);
  verify->add_option("--check", o.check, "Comma-separated subset of checks");
  verify->add_option("--r", o.r, "Small doubling radius");
  verify->add_option("--jacobi-k", o.jacobi_k, "Jacobi threshold constant K");

  auto* sweep = app.add_subcommand("sweep", "Solve a family and write estimate records");
  add_common(sweep, o);
  add_grid(sweep, o);
  add_family(sweep, o);
  sweep->add_option("--r", o.r, "Small doubling radius");

  auto* report = app.add_subcommand("report", "Summarize a JSON report");
  report->add_option("path", report_path, "Report file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? slelab::kExitPass : slelab::kExitUsage;
  }

  try {
    if (report->parsed()) return slelab::cmd_report(report_path, std::cout);
    const slelab::RunConfig cfg = build_config(o);
    if (fuzz->parsed()) return slelab::cmd_spectral_fuzz(cfg, std::cout);
    if (solve->parsed()) return slelab::cmd_solve(cfg, std::cout);
    if (verify->parsed()) return slelab::cmd_verify(cfg, std::cout);
    if (sweep->parsed()) return slelab::cmd_sweep(cfg, std::cout);
  } catch (const slelab::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return slelab::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return slelab::kExitFailure;
  }
  return slelab::kExitUsage;
}
