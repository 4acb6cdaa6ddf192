#include "slelab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>

#include "slelab/field.hpp"
#include "slelab/lemma_campaign.hpp"
#include "slelab/sampling.hpp"

namespace slelab {

namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxHalvings = 30;
constexpr int kHomotopySteps = 8;

using RowSparse = Eigen::SparseMatrix<double, Eigen::RowMajor>;

double max_norm(const std::vector<double>& r) {
  double m = 0.0;
  for (double v : r) m = std::max(m, std::abs(v));
  return m;
}

std::vector<double> phase_defect(std::span<const double> u, const Grid& grid,
                                 const std::vector<NodeIndex>& unknowns, double theta) {
  std::vector<double> r(unknowns.size());
  for (std::size_t k = 0; k < unknowns.size(); ++k) {
    r[k] = phase(eigen_desc(hessian_at(u, grid, unknowns[k]))) - theta;
  }
  return r;
}

Eigen::VectorXd solve_linear(const RowSparse& a, const Eigen::VectorXd& rhs, int iteration,
                             bool symmetric) {
  std::ostringstream where;
  where << "linear solve failed at Newton iteration " << iteration;
  if (static_cast<std::size_t>(a.rows()) <= kDirectSolveLimit) {
    Eigen::SparseMatrix<double> col(a);
    col.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(col);
    lu.factorize(col);
    if (lu.info() != Eigen::Success) throw SolverError(where.str() + " (singular factorization)");
    Eigen::VectorXd x = lu.solve(rhs);
    if (lu.info() != Eigen::Success || !x.allFinite()) {
      throw SolverError(where.str() + " (back substitution)");
    }
    return x;
  }
  Eigen::VectorXd x;
  double error = 0.0;
  Eigen::ComputationInfo info;
  if (symmetric) {
    Eigen::ConjugateGradient<RowSparse, Eigen::Lower | Eigen::Upper> cg;
    cg.setTolerance(1e-12);
    cg.setMaxIterations(20000);
    cg.compute(a);
    x = cg.solve(rhs);
    info = cg.info();
    error = cg.error();
  } else {
    Eigen::BiCGSTAB<RowSparse, Eigen::DiagonalPreconditioner<double>> bicg;
    bicg.setTolerance(1e-12);
    bicg.setMaxIterations(20000);
    bicg.compute(a);
    x = bicg.solve(rhs);
    info = bicg.info();
    error = bicg.error();
  }
  if (info == Eigen::NumericalIssue || !x.allFinite() || (info != Eigen::Success && error > 1e-8)) {
    std::ostringstream msg;
    msg << where.str() << " (iterative solver, relative residual " << error << ")";
    throw SolverError(msg.str());
  }
  return x;
}

/// Column of each grid node among the unknowns, or -1.
std::vector<std::ptrdiff_t> column_map(const Grid& grid, const std::vector<NodeIndex>& unknowns) {
  std::vector<std::ptrdiff_t> col(grid.size(), -1);
  for (std::size_t k = 0; k < unknowns.size(); ++k) col[unknowns[k]] = static_cast<std::ptrdiff_t>(k);
  return col;
}

RowSparse assemble(const Grid& grid, const std::vector<NodeIndex>& unknowns,
                   const std::vector<SmallMatrix>& coefficients) {
  const int n = grid.dim();
  const double inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
  const auto col = column_map(grid, unknowns);
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(unknowns.size() * static_cast<std::size_t>(1 + 2 * n * n));
  auto add = [&](std::size_t row, NodeIndex node, double v) {
    if (col[node] >= 0) triplets.emplace_back(static_cast<int>(row), static_cast<int>(col[node]), v);
  };
  for (std::size_t k = 0; k < unknowns.size(); ++k) {
    const NodeIndex p = unknowns[k];
    const SmallMatrix& c = coefficients[k];
    double diag = 0.0;
    for (int i = 0; i < n; ++i) {
      const std::size_t si = grid.stride(i);
      add(k, p + si, c(i, i) * inv_h2);
      add(k, p - si, c(i, i) * inv_h2);
      diag -= 2.0 * c(i, i) * inv_h2;
      for (int j = i + 1; j < n; ++j) {
        const std::size_t sj = grid.stride(j);
        // Both (i,j) and (j,i) entries of the symmetric cross stencil.
        const double w = 2.0 * c(i, j) * 0.25 * inv_h2;
        add(k, p + si + sj, w);
        add(k, p - si - sj, w);
        add(k, p + si - sj, -w);
        add(k, p - si + sj, -w);
      }
    }
    add(k, p, diag);
  }
  RowSparse a(static_cast<int>(unknowns.size()), static_cast<int>(unknowns.size()));
  a.setFromTriplets(triplets.begin(), triplets.end());
  a.makeCompressed();
  return a;
}

std::vector<double> with_boundary(const Grid& grid, std::vector<double> values,
                                  std::span<const double> boundary) {
  const auto nodes = grid.boundary_nodes();
  for (std::size_t k = 0; k < nodes.size(); ++k) values[nodes[k]] = boundary[k];
  return values;
}

struct NewtonRun {
  std::vector<double> u;
  int iterations = 0;
  double residual_norm = 0.0;
  bool converged = false;
  std::vector<double> history;
  std::string diagnostics;
};

NewtonRun run_newton(const Grid& grid, const std::vector<NodeIndex>& unknowns,
                     std::vector<double> u, double theta, double tol, int max_iter,
                     int iteration_offset) {
  NewtonRun run;
  std::vector<double> r = phase_defect(u, grid, unknowns, theta);
  double rn = max_norm(r);
  run.history.push_back(rn);
  while (true) {
    if (rn <= tol) {
      run.converged = true;
      break;
    }
    if (run.iterations >= max_iter) {
      run.diagnostics = "maximum Newton iterations reached";
      break;
    }
    const LinearizedOperator op = sle_linearization(GridFunction(grid, u));
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(r.size()));
    for (std::size_t k = 0; k < r.size(); ++k) rhs(static_cast<Eigen::Index>(k)) = -r[k];
    const Eigen::VectorXd step =
        solve_linear(op.matrix, rhs, iteration_offset + run.iterations + 1, false);

    double t = 1.0;
    bool accepted = false;
    std::vector<double> trial = u;
    std::vector<double> trial_r;
    double trial_norm = 0.0;
    for (int halving = 0; halving <= kMaxHalvings; ++halving) {
      for (std::size_t k = 0; k < unknowns.size(); ++k) {
        trial[unknowns[k]] = u[unknowns[k]] + t * step(static_cast<Eigen::Index>(k));
      }
      trial_r = phase_defect(trial, grid, unknowns, theta);
      trial_norm = max_norm(trial_r);
      if (trial_norm <= (1.0 - kArmijo * t) * rn) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      std::ostringstream msg;
      msg << "line search stalled at iteration " << iteration_offset + run.iterations + 1
          << " with residual " << rn;
      run.diagnostics = msg.str();
      break;
    }
    u.swap(trial);
    r.swap(trial_r);
    rn = trial_norm;
    ++run.iterations;
    run.history.push_back(rn);
  }
  run.u = std::move(u);
  run.residual_norm = rn;
  return run;
}

}  // namespace

PhaseProblem PhaseProblem::with_boundary_from(const Grid& grid, double theta,
                                              const std::function<double(const SmallVector&)>& f,
                                              std::optional<ConstraintSpec> constraint) {
  PhaseProblem p{grid, theta, {}, std::move(constraint)};
  for (NodeIndex i : grid.boundary_nodes()) p.boundary.push_back(f(grid.position(i)));
  return p;
}

void PhaseProblem::validate() const {
  const double limit = grid.dim() * std::numbers::pi / 2.0;
  if (!std::isfinite(theta) || std::abs(theta) >= limit) {
    std::ostringstream msg;
    msg << "PhaseProblem: |theta| = " << std::abs(theta) << " is unreachable (must be < n pi/2 = "
        << limit << ")";
    throw SolverError(msg.str());
  }
  if (boundary.size() != grid.boundary_nodes().size()) {
    throw SolverError("PhaseProblem: boundary value count does not match the grid");
  }
  for (double b : boundary) {
    if (!std::isfinite(b)) throw SolverError("PhaseProblem: non-finite boundary value");
  }
  if (constraint && constraint->dimension() != grid.dim()) {
    throw SolverError("PhaseProblem: constraint dimension differs from the grid");
  }
}

NodeField sle_residual(const GridFunction& u, double theta) {
  const Grid& grid = u.grid();
  NodeField out(grid);
  for (NodeIndex i : grid.nodes_with_depth(2)) {
    out.set(i, phase(eigen_desc(hessian_at(u.values(), grid, i))) - theta);
  }
  return out;
}

std::vector<double> LinearizedOperator::apply(std::span<const double> v) const {
  Eigen::VectorXd x(static_cast<Eigen::Index>(unknowns.size()));
  for (std::size_t k = 0; k < unknowns.size(); ++k) x(static_cast<Eigen::Index>(k)) = v[unknowns[k]];
  const Eigen::VectorXd y = matrix * x;
  return std::vector<double>(y.data(), y.data() + y.size());
}

LinearizedOperator sle_linearization(const GridFunction& u) {
  const Grid& grid = u.grid();
  LinearizedOperator op;
  op.unknowns = grid.nodes_with_depth(2);
  std::vector<SmallMatrix> coefficients(op.unknowns.size());
  for (std::size_t k = 0; k < op.unknowns.size(); ++k) {
    coefficients[k] = metric_inverse(hessian_at(u.values(), grid, op.unknowns[k]));
  }
  op.matrix = assemble(grid, op.unknowns, coefficients);
  return op;
}

GridFunction harmonic_extension(const Grid& grid, std::span<const double> boundary) {
  const auto bnodes = grid.boundary_nodes();
  if (boundary.size() != bnodes.size()) {
    throw SolverError("harmonic_extension: boundary value count does not match the grid");
  }
  std::vector<double> values = with_boundary(grid, std::vector<double>(grid.size(), 0.0), boundary);
  const auto unknowns = grid.nodes_with_depth(2);
  const int n = grid.dim();
  // Negated Laplacian: symmetric positive definite.
  std::vector<SmallMatrix> coefficients(unknowns.size(), -SmallMatrix::Identity(n, n));
  const RowSparse a = assemble(grid, unknowns, coefficients);
  const double inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(unknowns.size()));
  for (std::size_t k = 0; k < unknowns.size(); ++k) {
    for (int i = 0; i < n; ++i) {
      for (NodeIndex q : {unknowns[k] + grid.stride(i), unknowns[k] - grid.stride(i)}) {
        if (grid.depth(q) == 1) rhs(static_cast<Eigen::Index>(k)) += values[q] * inv_h2;
      }
    }
  }
  const Eigen::VectorXd x = solve_linear(a, rhs, 0, true);
  for (std::size_t k = 0; k < unknowns.size(); ++k) values[unknowns[k]] = x(static_cast<Eigen::Index>(k));
  return GridFunction(grid, std::move(values));
}

SolveOutcome newton_solve(const PhaseProblem& problem, const std::optional<GridFunction>& init,
                          double tol, int max_iter) {
  if (!(tol > 0.0)) throw SolverError("newton_solve: tolerance must be positive");
  problem.validate();
  const Grid& grid = problem.grid;
  if (init && !(init->grid() == grid)) throw SolverError("newton_solve: initial guess grid differs");

  std::vector<double> start;
  if (init) {
    start = with_boundary(grid, std::vector<double>(init->values().begin(), init->values().end()),
                          problem.boundary);
  } else {
    const GridFunction h = harmonic_extension(grid, problem.boundary);
    start.assign(h.values().begin(), h.values().end());
  }
  const auto unknowns = grid.nodes_with_depth(2);

  int continuation_steps = 0;
  NewtonRun run = run_newton(grid, unknowns, start, problem.theta, tol, max_iter, 0);
  int total_iterations = run.iterations;
  std::vector<double> history = run.history;

  if (!run.converged) {
    // Phase homotopy from the mean phase of the initial guess.
    const std::vector<double> defect = phase_defect(start, grid, unknowns, 0.0);
    double theta0 = 0.0;
    for (double d : defect) theta0 += d;
    theta0 /= static_cast<double>(std::max<std::size_t>(1, defect.size()));
    std::vector<double> u = start;
    std::string diag = run.diagnostics + "; phase homotopy engaged";
    bool ok = true;
    for (int k = 1; k <= kHomotopySteps; ++k) {
      const double theta_k = theta0 + (problem.theta - theta0) * k / kHomotopySteps;
      const double tol_k = k == kHomotopySteps ? tol : std::max(tol, 1e-6);
      NewtonRun step = run_newton(grid, unknowns, u, theta_k, tol_k, max_iter, total_iterations);
      total_iterations += step.iterations;
      history.insert(history.end(), step.history.begin() + 1, step.history.end());
      u = std::move(step.u);
      continuation_steps = k;
      if (!step.converged) {
        diag += "; homotopy step " + std::to_string(k) + ": " + step.diagnostics;
        ok = false;
        run.residual_norm = step.residual_norm;
        break;
      }
      run.residual_norm = step.residual_norm;
    }
    run.u = std::move(u);
    run.converged = ok;
    run.diagnostics = diag;
  }

  SolveOutcome out{GridFunction(grid, std::move(run.u)),
                   total_iterations,
                   run.residual_norm,
                   0.0,
                   run.converged,
                   tol,
                   std::move(history),
                   continuation_steps,
                   run.diagnostics};
  if (problem.constraint) {
    out.constraint_violation_fraction = constraint_violation_fraction(out.u, *problem.constraint);
  }
  return out;
}

QuadraticSolution quadratic_solution(const Grid& grid, const Eigen::MatrixXd& a) {
  const int n = grid.dim();
  if (a.rows() != n || a.cols() != n) throw SolverError("quadratic_solution: matrix size mismatch");
  const Spectrum s = eigen_desc(a);
  const Eigen::MatrixXd sym = 0.5 * (a + a.transpose());
  std::vector<double> v(grid.size());
  for (NodeIndex i = 0; i < grid.size(); ++i) {
    const SmallVector d = grid.offset(i);
    double q = 0.0;
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) q += d(r) * sym(r, c) * d(c);
    }
    v[i] = 0.5 * q;
  }
  return {GridFunction(grid, std::move(v)), phase(s)};
}

GridFunction FamilyMember::core_function() const {
  return quadratic_solution(problem.grid, core).u;
}

GridFunction FamilyMember::core_with_boundary() const {
  const GridFunction c = core_function();
  return GridFunction(problem.grid,
                      with_boundary(problem.grid, std::vector<double>(c.values().begin(), c.values().end()),
                                    problem.boundary));
}

GridFunction FamilyMember::initial_guess() const {
  const Grid& grid = problem.grid;
  const GridFunction c = core_function();
  const auto nodes = grid.boundary_nodes();
  std::vector<double> mismatch(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) mismatch[k] = problem.boundary[k] - c[nodes[k]];
  const GridFunction h = harmonic_extension(grid, mismatch);
  std::vector<double> v(grid.size());
  for (NodeIndex i = 0; i < grid.size(); ++i) v[i] = c[i] + h[i];
  return GridFunction(grid, with_boundary(grid, std::move(v), problem.boundary));
}

double constraint_slack(const Spectrum& s, const ConstraintSpec& spec) {
  const int n = spec.dimension();
  const double sc = s.scale();
  double slack;
  if (spec.is_gamma_cone()) {
    double tail = 1.0;
    for (int i = 1; i < n; ++i) tail *= s[static_cast<std::size_t>(i)];
    slack = (sigma_k(s, n - 1) - 0.5 * (n - 2) * tail) / std::pow(sc, n - 1);
    slack = std::min(slack, s[static_cast<std::size_t>(n - 2)] / sc);
  } else {
    slack = (sigma_k(s, 2) - (0.6 - spec.eps()) * s[1] * s[2]) / (sc * sc);
  }
  slack = std::min(slack, phase(s));
  if (n == 3 && s[1] >= 0.0) {
    for (const Spectrum& v : dual_family_vectors()) slack = std::min(slack, dual_pairing_min(v, s) / sc);
  }
  return slack;
}

double constraint_violation_fraction(const GridFunction& u, const ConstraintSpec& spec) {
  const Grid& grid = u.grid();
  const auto nodes = grid.nodes_with_depth(2);
  if (nodes.empty()) return 0.0;
  std::size_t bad = 0;
  for (NodeIndex i : nodes) {
    if (!satisfies_constraint(eigen_desc(hessian_at(u.values(), grid, i)), spec)) ++bad;
  }
  return static_cast<double>(bad) / static_cast<double>(nodes.size());
}

std::vector<FamilyMember> instance_family(std::uint64_t seed, const ConstraintSpec& spec,
                                          std::size_t count, const Grid& grid,
                                          const FamilyOptions& options) {
  if (count < 1) throw SolverError("instance_family: count must be >= 1");
  if (spec.dimension() != grid.dim()) throw SolverError("instance_family: dimension mismatch");
  if (options.amplitudes.empty()) throw SolverError("instance_family: no amplitudes");
  const int n = grid.dim();
  const double L = grid.half_width();
  std::mt19937_64 rng(derive_seed(seed, 0x5eed));
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);

  std::vector<FamilyMember> family;
  family.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double scale = options.scales[k % options.scales.size()];
    AdmissibleSampler sampler(spec, derive_seed(seed, k), {scale}, 200'000);
    std::optional<Spectrum> core_spectrum;
    for (int attempt = 0; attempt < 100'000 && !core_spectrum; ++attempt) {
      Spectrum s = sampler.next();
      if (options.negative_lambda2 && !(s[1] < 0.0)) continue;
      if (constraint_slack(s, spec) >= options.slack) core_spectrum = s;
    }
    if (!core_spectrum) {
      throw SamplingError("instance_family: no core with slack " + std::to_string(options.slack) +
                          " for " + spec.name());
    }

    Eigen::MatrixXd g(n, n);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) g(r, c) = gauss(rng);
    }
    const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
    Eigen::VectorXd lambda(n);
    for (int i = 0; i < n; ++i) lambda(i) = (*core_spectrum)[static_cast<std::size_t>(i)];
    Eigen::MatrixXd a = q * lambda.asDiagonal() * q.transpose();
    a = 0.5 * (a + a.transpose()).eval();

    std::vector<double> w(static_cast<std::size_t>(n));
    double norm = 0.0;
    for (double& x : w) {
      x = gauss(rng);
      norm += x * x;
    }
    norm = std::sqrt(norm);
    for (double& x : w) x /= norm;
    const double phi = angle(rng);
    const double amplitude = options.amplitudes[k % options.amplitudes.size()];

    const auto& center = grid.center();
    auto boundary = [&](const SmallVector& x) {
      double quad = 0.0, proj = 0.0;
      for (int r = 0; r < n; ++r) {
        const double dr = x(r) - center[static_cast<std::size_t>(r)];
        proj += w[static_cast<std::size_t>(r)] * dr;
        for (int c = 0; c < n; ++c) quad += dr * a(r, c) * (x(c) - center[static_cast<std::size_t>(c)]);
      }
      return 0.5 * quad + amplitude * L * L * std::sin(std::numbers::pi * proj / (2.0 * L) + phi);
    };
    FamilyMember m{k,
                   PhaseProblem::with_boundary_from(grid, phase(*core_spectrum), boundary, spec),
                   a,
                   *core_spectrum,
                   scale,
                   amplitude,
                   w,
                   phi};
    family.push_back(std::move(m));
  }
  return family;
}

}  // namespace slelab
