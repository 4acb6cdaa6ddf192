#include "slelab/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <future>
#include <limits>
#include <numbers>
#include <sstream>

#include "slelab/estimates.hpp"
#include "slelab/field.hpp"
#include "slelab/lemma_campaign.hpp"
#include "slelab/measures.hpp"

namespace slelab {

namespace {

Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Grid make_grid(const RunConfig& cfg) {
  if (cfg.n > kMaxGridDim) {
    throw ConfigError("problem.n: grid commands support n <= " + std::to_string(kMaxGridDim));
  }
  return Grid(cfg.n, std::vector<double>(static_cast<std::size_t>(cfg.n), 0.0), cfg.half_width,
              cfg.points);
}

bool wants(const RunConfig& cfg, const std::string& check) {
  return cfg.checks.empty() ||
         std::find(cfg.checks.begin(), cfg.checks.end(), check) != cfg.checks.end();
}

bool admissible(const RunConfig& cfg, const SolvedInstance& s) {
  return s.outcome.converged && s.outcome.constraint_violation_fraction <= cfg.admissible_fraction;
}

Json instance_summary(const SolvedInstance& s) {
  const FamilyMember& m = s.member;
  std::vector<double> spectrum(m.spectrum.values().begin(), m.spectrum.values().end());
  return {{"index", m.index},
          {"amplitude", m.amplitude},
          {"sampling_scale", m.sampling_scale},
          {"spectrum", spectrum},
          {"theta", m.problem.theta},
          {"converged", s.outcome.converged},
          {"iterations", s.outcome.iterations},
          {"residual_norm", num(s.outcome.residual_norm)},
          {"continuation_steps", s.outcome.continuation_steps},
          {"constraint_violation_fraction", s.outcome.constraint_violation_fraction},
          {"diagnostics", s.outcome.diagnostics}};
}

/// I_n + t (e_i e_j^T + e_j e_i^T).
Eigen::MatrixXd off_diagonal_test_matrix(int n, double t, int i, int j) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n);
  a(i, j) += t;
  a(j, i) += t;
  return a;
}

Json check_jacobi(const RunConfig& cfg, const std::vector<SolvedInstance>& solved, bool& passed) {
  const Grid& grid = solved.front().member.problem.grid;
  const double dx = grid.spacing();
  const JacobiParams p = cfg.constraint == "sigma2" ? JacobiParams::for_sigma2(cfg.eps, dx)
                                                    : JacobiParams::for_cone(dx);
  const double threshold = cfg.jacobi_k * dx;
  Json per = Json::array();
  bool ok = true;
  for (const auto& s : solved) {
    if (!admissible(cfg, s)) {
      per.push_back({{"index", s.member.index}, {"status", "gated"}});
      continue;
    }
    const JacobiScan scan = jacobi_scan(s.outcome.u, p, threshold);
    const bool pass = scan.violations == 0 && scan.anomalies == 0;
    ok = ok && pass;
    per.push_back({{"index", s.member.index},
                   {"status", pass ? "pass" : "fail"},
                   {"evaluated", scan.evaluated},
                   {"applicable", scan.applicable},
                   {"violations", scan.violations},
                   {"anomalies", scan.anomalies},
                   {"violation_fraction", scan.violation_fraction()},
                   {"min_applicable_residual", num(scan.min_applicable_residual)}});
  }
  passed = passed && ok;
  Json meta = {{"alpha", p.alpha},
               {"delta", p.delta},
               {"m", p.m},
               {"eigengap_tol", p.eigengap_tol},
               {"K", cfg.jacobi_k},
               {"threshold", threshold}};
  meta["eps"] = p.eps ? Json(*p.eps) : Json(nullptr);
  return {{"passed", ok}, {"metadata", meta}, {"instances", per}};
}

Json check_gradient(const std::vector<SolvedInstance>& solved, int n, bool& passed) {
  Json per = Json::array();
  bool ok = true;
  double worst = 0.0;
  const double cap = gradient_ratio_cap(n);
  for (const auto& s : solved) {
    if (!s.outcome.converged) continue;
    const GradientRatio g = gradient_ratio(s.outcome.u, 1.0);
    const bool pass = !g.anomaly && g.ratio <= cap;
    ok = ok && pass;
    worst = std::max(worst, g.ratio);
    per.push_back({{"index", s.member.index},
                   {"gradient_norm", g.gradient_norm},
                   {"oscillation", g.oscillation},
                   {"ratio", num(g.ratio)},
                   {"anomaly", g.anomaly},
                   {"status", pass ? "pass" : "fail"}});
  }
  passed = passed && ok;
  return {{"passed", ok}, {"metadata", {{"radius", 1.0}, {"cap", cap}, {"max_ratio", worst}}},
          {"instances", per}};
}

Json check_appendix(const std::vector<SolvedInstance>& solved, bool& passed) {
  Json per = Json::array();
  bool ok = true;
  for (const auto& s : solved) {
    if (!s.outcome.converged) continue;
    const AppendixResult a = appendix_test_function(s.outcome.u, true);
    const bool pass = a.chain_holds() && a.shell_bound_holds();
    ok = ok && pass;
    per.push_back({{"index", s.member.index},
                   {"M", a.m},
                   {"grad_at_0", a.grad_at_center},
                   {"w_at_0", a.w_at_center},
                   {"w_max", a.w_max},
                   {"argmax_on_shell", a.argmax_on_shell},
                   {"argmax_cutoff_term", a.argmax_cutoff_term},
                   {"status", pass ? "pass" : "fail"}});
  }
  passed = passed && ok;
  return {{"passed", ok}, {"instances", per}};
}

Json check_cutoff(const RunConfig& cfg, const std::vector<SolvedInstance>& solved, bool& passed) {
  const Grid& grid = solved.front().member.problem.grid;
  const auto ys = cutoff_centers(cfg, grid);
  Json per = Json::array();
  bool ok = true;
  for (const auto& s : solved) {
    if (!s.outcome.converged) continue;
    for (const auto& y : ys) {
      const AlphaSweep sweep = cutoff_alpha_sweep(s.outcome.u, y);
      const bool pass = sweep.smallest_ok.has_value() && *sweep.smallest_ok <= 64.0;
      ok = ok && pass;
      per.push_back({{"index", s.member.index},
                     {"y", y},
                     {"smallest_alpha", sweep.smallest_ok ? Json(*sweep.smallest_ok) : Json(nullptr)},
                     {"status", pass ? "pass" : "fail"}});
    }
  }
  passed = passed && ok;
  return {{"passed", ok}, {"metadata", {{"alphas", kDefaultAlphas}, {"cutoff_scale", 1.0}}},
          {"instances", per}};
}

Json check_doubling(const RunConfig& cfg, const std::vector<SolvedInstance>& solved, bool& passed) {
  const Grid& grid = solved.front().member.problem.grid;
  if (cfg.doubling_r < grid.spacing()) {
    // B_r(y) would hold only y: nothing to compare at this resolution.
    return {{"passed", true},
            {"status", "skipped"},
            {"reason", "r is below the grid spacing"},
            {"metadata", {{"r", cfg.doubling_r}, {"spacing", grid.spacing()}}}};
  }
  std::vector<DoublingSample> samples;
  Json per = Json::array();
  for (const auto& s : solved) {
    if (!s.outcome.converged) continue;
    const DoublingSample d = doubling_check(s.outcome.u, grid.center(), cfg.doubling_r);
    samples.push_back(d);
    per.push_back({{"index", s.member.index},
                   {"sup_quarter", d.sup_quarter},
                   {"sup_r", d.sup_r},
                   {"status", d.sup_quarter >= d.sup_r ? "pass" : "fail"}});
  }
  if (samples.empty()) {
    passed = false;
    return {{"passed", false}, {"instances", per}};
  }
  const DoublingFit fit = fit_doubling(samples);
  const bool ok = fit.nested_monotone && std::isfinite(fit.c_emp) && std::isfinite(fit.c0);
  passed = passed && ok;
  return {{"passed", ok},
          {"metadata",
           {{"r", cfg.doubling_r},
            {"C_emp", num(fit.c_emp)},
            {"intercept", num(fit.c0)},
            {"max_ratio", num(fit.max_ratio)},
            {"nested_monotone", fit.nested_monotone},
            {"samples", fit.samples}}},
          {"instances", per}};
}

Json check_measures(const RunConfig& cfg, const std::vector<SolvedInstance>& solved, bool& passed) {
  const int n = cfg.n;
  const ConstraintSpec spec = cfg.constraint_spec();
  const auto bumps = standard_bumps(n);
  Json per = Json::array();
  bool ok = true;
  for (const auto& s : solved) {
    if (!s.outcome.converged) continue;
    const GridFunction& u = s.outcome.u;
    Json entry = {{"index", s.member.index}};

    // Reconstruction identity on the first bump.
    const Eigen::MatrixXd pairings = pairing_matrix(u, bumps.front());
    const double t = 0.5;
    const double t_identity = t_a_from_pairings(pairings, Eigen::MatrixXd::Identity(n, n));
    double identity_err = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double t_ij = t_a_from_pairings(pairings, off_diagonal_test_matrix(n, t, i, j));
        const double rebuilt = (t_ij - t_identity) / (2.0 * t);
        const double scale = std::max({std::abs(pairings(i, j)), std::abs(t_identity), 1e-300});
        identity_err = std::max(identity_err, std::abs(rebuilt - pairings(i, j)) / scale);
      }
    }
    const bool identity_ok = identity_err <= 1e-12;
    entry["reconstruction_relative_error"] = identity_err;

    double discrepancy = 0.0;
    bool ibp_ok = true;
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        const PairingResult pr = distributional_hessian_pairing(u, bumps.front(), i, j);
        discrepancy = std::max(discrepancy, pr.discrepancy);
        ibp_ok = ibp_ok && pr.within_bound(kPairingK);
      }
    }
    entry["integration_by_parts_discrepancy"] = discrepancy;
    entry["integration_by_parts_ok"] = ibp_ok;

    const WeightedLipschitzResult wl = weighted_lipschitz(u, {u.grid().center(), 1.0}, 20000);
    entry["weighted_lipschitz_ratio"] = wl.ratio;
    Json probe = Json::array();
    for (const auto& p : quadratic_approx_probe(u, u.grid().center_node(), {0.4, 0.2, 0.1})) {
      probe.push_back({{"r", p.r}, {"quotient", p.quotient}});
    }
    entry["quadratic_probe"] = probe;

    bool pass = identity_ok && ibp_ok;
    if (admissible(cfg, s)) {
      const PositivityReport rep = positivity_checks(u, spec, bumps, cfg.quadrature_tol);
      entry["case"] = to_string(rep.routed);
      entry["min_T_A"] = rep.min_value;
      entry["negative_lambda2_nodes"] = rep.negative_lambda2_nodes;
      entry["two_convexity_failures"] = rep.two_convexity_failures;
      entry["positivity"] = rep.passed() ? "pass" : "fail";
      pass = pass && rep.passed();
    } else {
      entry["positivity"] = "gated";
    }
    entry["status"] = pass ? "pass" : "fail";
    ok = ok && pass;
    per.push_back(entry);
  }
  passed = passed && ok;
  return {{"passed", ok},
          {"metadata", {{"quadrature_tol", cfg.quadrature_tol}, {"bumps", bumps.size()}, {"t", 0.5}, {"pairing_K", kPairingK}}},
          {"instances", per}};
}

Json check_minimal_surface(const std::vector<SolvedInstance>& solved, bool& passed) {
  Json per = Json::array();
  bool ok = true;
  for (const auto& s : solved) {
    if (!s.outcome.converged) continue;
    const GridFunction& u = s.outcome.u;
    const double r = max_in_box(minimal_surface_residual_field(u), 0.5 * u.grid().half_width());
    ok = ok && std::isfinite(r);
    per.push_back({{"index", s.member.index}, {"max_residual", num(r)}});
  }
  passed = passed && ok;
  return {{"passed", ok}, {"instances", per}};
}

}  // namespace

std::filesystem::path resolve_output_dir(const RunConfig& cfg) {
  std::filesystem::path p(cfg.output);
  if (p.is_absolute()) return p;
  if (const char* root = std::getenv(kOutputRootEnv); root && *root) return std::filesystem::path(root) / p;
  return p;
}

std::vector<SolvedInstance> solve_family(const RunConfig& cfg) {
  const Grid grid = make_grid(cfg);
  FamilyOptions opts;
  opts.amplitudes = cfg.amplitudes;
  opts.scales = cfg.scales;
  auto family = instance_family(cfg.seed, cfg.constraint_spec(), cfg.count, grid, opts);
  std::vector<SolvedInstance> out;
  out.reserve(family.size());
  auto solve_one = [&cfg](const FamilyMember& m) {
    return newton_solve(m.problem, m.initial_guess(), cfg.newton_tol, cfg.max_iter);
  };
  const std::size_t jobs = std::max<std::size_t>(1, cfg.jobs);
  for (std::size_t start = 0; start < family.size(); start += jobs) {
    const std::size_t end = std::min(family.size(), start + jobs);
    std::vector<std::future<SolveOutcome>> pending;
    for (std::size_t k = start; k < end; ++k) {
      pending.push_back(std::async(jobs > 1 ? std::launch::async : std::launch::deferred, solve_one,
                                   std::cref(family[k])));
    }
    for (std::size_t k = start; k < end; ++k) {
      out.push_back({family[k], pending[k - start].get()});
    }
  }
  return out;
}

std::vector<std::vector<double>> cutoff_centers(const RunConfig& cfg, const Grid& grid) {
  if (!cfg.cutoff_y.empty()) {
    for (const auto& y : cfg.cutoff_y) {
      bool exact = false;
      grid.nearest_node(y, &exact);
      if (!exact) throw ConfigError("checks.cutoff_y: cutoff centers must be grid nodes");
    }
    return cfg.cutoff_y;
  }
  std::vector<double> y0(grid.center());
  std::vector<double> y1(grid.center());
  const long k = std::max(1L, std::lround(0.2 / grid.spacing()));
  y1[0] += static_cast<double>(k) * grid.spacing();
  return {y0, y1};
}

Json run_checks(const RunConfig& cfg, const std::vector<SolvedInstance>& solved, bool& passed) {
  Json checks = Json::object();
  if (solved.empty()) {
    passed = false;
    return checks;
  }
  if (wants(cfg, "jacobi")) checks["jacobi"] = check_jacobi(cfg, solved, passed);
  if (wants(cfg, "gradient")) checks["gradient"] = check_gradient(solved, cfg.n, passed);
  if (wants(cfg, "appendix")) checks["appendix"] = check_appendix(solved, passed);
  if (wants(cfg, "cutoff")) checks["cutoff"] = check_cutoff(cfg, solved, passed);
  if (wants(cfg, "doubling")) checks["doubling"] = check_doubling(cfg, solved, passed);
  if (wants(cfg, "measures")) checks["measures"] = check_measures(cfg, solved, passed);
  if (wants(cfg, "minimal-surface")) checks["minimal-surface"] = check_minimal_surface(solved, passed);
  return checks;
}

Json report_header(const RunConfig& cfg, const std::string& command) {
  return {{"version", std::string(kVersion)},
          {"config_hash", hex64(cfg.hash())},
          {"command", command},
          {"config", cfg.canonical()}};
}

int cmd_spectral_fuzz(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  CampaignConfig cc;
  cc.spec = cfg.constraint_spec();
  cc.samples = cfg.samples;
  cc.seed = cfg.seed;
  cc.scales = cfg.fuzz_scales;
  cc.jobs = cfg.jobs;
  const CampaignResult r = run_lemma_campaign(cc);
  Json rep = report_header(cfg, "spectral-fuzz");
  rep["campaign"] = to_json(r);
  rep["passed"] = r.passed();
  OutputSet files;
  files.add_json("spectral_fuzz.json", rep);
  files.commit(resolve_output_dir(cfg));

  log << "constraint " << r.constraint << ": " << r.samples << " samples, " << r.lambda2_negative
      << " with lambda_2 < 0\n";
  for (const auto& [key, t] : r.tallies) {
    log << (t.violations == 0 ? "PASS " : "FAIL ") << key << " evaluated=" << t.evaluated
        << " violations=" << t.violations << " skipped=" << t.skipped << "\n";
  }
  return r.passed() ? kExitPass : kExitFailure;
}

int cmd_solve(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  const Grid grid = make_grid(cfg);
  const int n = cfg.n;
  std::vector<double> s = cfg.spectrum.empty() ? std::vector<double>(static_cast<std::size_t>(n), 1.0)
                                               : cfg.spectrum;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) a(i, i) = s[static_cast<std::size_t>(i)];
  const Spectrum spectrum(s);
  const double theta = cfg.theta.value_or(phase(spectrum));
  const double L = grid.half_width();
  const double amp = cfg.amplitude;
  std::vector<double> dir(static_cast<std::size_t>(n), 1.0 / std::sqrt(static_cast<double>(n)));
  auto boundary = [&](const SmallVector& x) {
    double q = 0.0, proj = 0.0;
    for (int k = 0; k < n; ++k) {
      q += s[static_cast<std::size_t>(k)] * x(k) * x(k);
      proj += dir[static_cast<std::size_t>(k)] * x(k);
    }
    return 0.5 * q + amp * L * L * std::sin(std::numbers::pi * proj / (2.0 * L));
  };
  std::optional<ConstraintSpec> constraint;
  if (cfg.n >= 3) constraint = cfg.constraint_spec();
  PhaseProblem problem = PhaseProblem::with_boundary_from(grid, theta, boundary, constraint);
  try {
    problem.validate();
  } catch (const SolverError& e) {
    throw ConfigError(e.what());
  }
  FamilyMember member{0, problem, a, spectrum, 1.0, amp, dir, 0.0};
  const SolveOutcome out = newton_solve(problem, member.initial_guess(), cfg.newton_tol, cfg.max_iter);

  Json rep = report_header(cfg, "solve");
  rep["theta"] = theta;
  rep["converged"] = out.converged;
  rep["iterations"] = out.iterations;
  rep["residual_norm"] = num(out.residual_norm);
  rep["residual_history"] = out.residual_history;
  rep["continuation_steps"] = out.continuation_steps;
  rep["constraint_violation_fraction"] = out.constraint_violation_fraction;
  rep["diagnostics"] = out.diagnostics;
  rep["tolerance"] = out.tolerance;
  if (amp == 0.0 && !cfg.theta) {
    const GridFunction exact = member.core_function();
    double err = 0.0;
    for (NodeIndex i = 0; i < grid.size(); ++i) err = std::max(err, std::abs(out.u[i] - exact[i]));
    rep["max_error_vs_quadratic"] = err;
  }
  rep["passed"] = out.converged;
  std::ostringstream bin;
  write_grid_function(bin, out.u);
  OutputSet files;
  files.add("solution.slgf", bin.str());
  files.add_json("solve.json", rep);
  files.commit(resolve_output_dir(cfg));
  log << (out.converged ? "converged" : "not converged") << " in " << out.iterations
      << " iterations, residual " << out.residual_norm << "\n";
  if (!out.diagnostics.empty()) log << out.diagnostics << "\n";
  return out.converged ? kExitPass : kExitFailure;
}

int cmd_verify(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  const Grid grid = make_grid(cfg);
  cutoff_centers(cfg, grid);  // reject bad centers before any solving
  const auto solved = solve_family(cfg);
  bool passed = true;
  Json instances = Json::array();
  for (const auto& s : solved) {
    instances.push_back(instance_summary(s));
    passed = passed && s.outcome.converged;
  }
  Json checks = run_checks(cfg, solved, passed);
  Json rep = report_header(cfg, "verify");
  rep["instances"] = instances;
  rep["checks"] = checks;
  rep["passed"] = passed;
  OutputSet files;
  files.add_json("verify.json", rep);
  files.commit(resolve_output_dir(cfg));
  for (const auto& [name, c] : checks.items()) {
    log << (c.at("passed").get<bool>() ? "PASS " : "FAIL ") << name << "\n";
  }
  return passed ? kExitPass : kExitFailure;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  const Grid grid = make_grid(cfg);
  const auto ys = cutoff_centers(cfg, grid);
  const auto solved = solve_family(cfg);
  std::vector<EstimateRecord> records;
  bool passed = true;
  std::vector<DoublingSample> doubling;
  double max_ratio = 0.0;
  const std::vector<double> origin = grid.center();
  for (const auto& s : solved) {
    const std::string id = std::to_string(s.member.index);
    auto add = [&](const std::string& q, double v, std::optional<double> r = std::nullopt,
                   std::vector<double> y = {}) {
      records.push_back({id, q, v, r, y.empty() ? origin : y, grid.points()});
    };
    add("newton_iterations", s.outcome.iterations);
    add("constraint_violation_fraction", s.outcome.constraint_violation_fraction);
    if (!s.outcome.converged) {
      passed = false;
      continue;
    }
    const GridFunction& u = s.outcome.u;
    const GradientRatio g = gradient_ratio(u, 1.0);
    add("oscillation", g.oscillation, 1.0);
    add("gradient_norm", g.gradient_norm);
    add("gradient_ratio", g.ratio, 1.0);
    max_ratio = std::max(max_ratio, g.ratio);
    const HessianProbe h = hessian_probe(u);
    add("hessian_norm", h.hessian_norm_at_center);
    add("lipschitz_norm", h.lipschitz_norm, 1.0);
    add("theta", h.theta);
    if (cfg.doubling_r >= grid.spacing()) {
      const DoublingSample d = doubling_check(u, origin, cfg.doubling_r);
      doubling.push_back(d);
      add("sup_lambda_max_quarter", d.sup_quarter, 0.25);
      add("sup_lambda_max_r", d.sup_r, cfg.doubling_r);
    }
    const WeightedLipschitzResult wl = weighted_lipschitz(u, {origin, 1.0}, 20000);
    add("weighted_lipschitz_ratio", wl.ratio, 1.0);
    const AppendixResult a = appendix_test_function(u, true);
    add("appendix_w_max", a.w_max, 1.0);
    add("appendix_w_at_0", a.w_at_center, 1.0);
    for (const auto& y : ys) {
      const AlphaSweep sweep = cutoff_alpha_sweep(u, y);
      add("cutoff_smallest_alpha", sweep.smallest_ok ? *sweep.smallest_ok : std::nan(""), 0.5, y);
    }
    add("minimal_surface_residual", max_in_box(minimal_surface_residual_field(u), 0.5 * grid.half_width()));
  }
  Json rep = report_header(cfg, "sweep");
  Json instances = Json::array();
  for (const auto& s : solved) instances.push_back(instance_summary(s));
  rep["instances"] = instances;
  rep["max_gradient_ratio"] = max_ratio;
  if (!doubling.empty()) {
    const DoublingFit fit = fit_doubling(doubling);
    rep["doubling"] = {{"r", cfg.doubling_r}, {"C_emp", num(fit.c_emp)}, {"intercept", num(fit.c0)},
                       {"nested_monotone", fit.nested_monotone}};
  }
  rep["passed"] = passed;
  OutputSet files;
  files.add("estimates.csv", estimates_csv(records));
  files.add_json("sweep.json", rep);
  files.commit(resolve_output_dir(cfg));
  log << records.size() << " estimate records over " << solved.size() << " instances\n";
  return passed ? kExitPass : kExitFailure;
}

int cmd_report(const std::string& path, std::ostream& log) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open report");
  Json rep;
  try {
    rep = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError(path + ": not a JSON report (" + e.what() + ")");
  }
  if (!rep.is_object() || !rep.contains("passed")) throw ConfigError(path + ": missing 'passed' field");
  log << "command " << rep.value("command", "?") << ", version " << rep.value("version", "?")
      << ", config " << rep.value("config_hash", "?") << "\n";
  if (rep.contains("checks")) {
    for (const auto& [name, c] : rep["checks"].items()) {
      log << (c.value("passed", false) ? "PASS " : "FAIL ") << name << "\n";
    }
  }
  if (rep.contains("campaign")) {
    for (const auto& [name, c] : rep["campaign"]["clauses"].items()) {
      log << (c.value("pass", false) ? "PASS " : "FAIL ") << name << "\n";
    }
  }
  const bool passed = rep["passed"].get<bool>();
  log << (passed ? "overall PASS" : "overall FAIL") << "\n";
  return passed ? kExitPass : kExitFailure;
}

}  // namespace slelab
