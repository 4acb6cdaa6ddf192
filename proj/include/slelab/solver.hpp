#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "slelab/grid.hpp"
#include "slelab/spectral.hpp"

namespace slelab {

/// Dirichlet problem  sum_i arctan lambda_i(D^2 u) = theta  on a box grid.
struct PhaseProblem {
  Grid grid;
  double theta = 0.0;
  /// One value per node of grid.boundary_nodes(), in that order.
  std::vector<double> boundary;
  std::optional<ConstraintSpec> constraint;

  /// Boundary values sampled from `f`.
  static PhaseProblem with_boundary_from(const Grid& grid, double theta,
                                         const std::function<double(const SmallVector&)>& f,
                                         std::optional<ConstraintSpec> constraint = std::nullopt);

  /// Throws SolverError if |theta| >= n pi / 2 or the boundary is malformed.
  void validate() const;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolveOutcome {
  GridFunction u;
  int iterations = 0;
  double residual_norm = 0.0;
  double constraint_violation_fraction = 0.0;
  bool converged = false;
  double tolerance = 0.0;
  /// Max-norm residual after each accepted Newton step (index 0 = start).
  std::vector<double> residual_history;
  /// Phase homotopy steps taken (0 when the direct solve converged).
  int continuation_steps = 0;
  std::string diagnostics;
};

/// Phase defect sum arctan lambda_i(H) - theta at every depth >= 2 node.
NodeField sle_residual(const GridFunction& u, double theta);

/// Frozen-coefficient linearization v -> sum_ij g^{ij} v_ij on the depth >= 2
/// unknowns, boundary columns eliminated (homogeneous Dirichlet).
struct LinearizedOperator {
  Eigen::SparseMatrix<double, Eigen::RowMajor> matrix;
  /// Grid node of each unknown, ascending.
  std::vector<NodeIndex> unknowns;

  /// Applies the operator to a full-grid perturbation (boundary entries ignored).
  std::vector<double> apply(std::span<const double> v) const;
};

LinearizedOperator sle_linearization(const GridFunction& u);

/// Discrete harmonic function with the problem's boundary values.
GridFunction harmonic_extension(const Grid& grid, std::span<const double> boundary);

/// Damped Newton with Armijo backtracking on the residual max-norm; falls
/// back to an 8-step phase homotopy from the initial guess's mean phase when
/// the direct iteration stalls. Line-search stalls yield converged = false;
/// a failed linear solve throws SolverError naming the iteration.
SolveOutcome newton_solve(const PhaseProblem& problem, const std::optional<GridFunction>& init,
                          double tol = 1e-10, int max_iter = 50);

/// Interior unknown count at or below which the linear solves are direct.
inline constexpr std::size_t kDirectSolveLimit = 25 * 25 * 25;

struct QuadraticSolution {
  GridFunction u;
  double theta;
};

/// u(x) = 1/2 (x - c)^T A (x - c), theta = phase of A.
QuadraticSolution quadratic_solution(const Grid& grid, const Eigen::MatrixXd& a);

struct FamilyOptions {
  std::vector<double> scales = {1.0, 10.0};
  std::vector<double> amplitudes = {0.0, 0.01, 0.05, 0.1};
  /// Minimum normalized slack of the core spectrum inside the constraint.
  double slack = 0.05;
  /// Keep only cores with lambda_2 < 0 (sigma_2 family; needs eps > 3.6).
  bool negative_lambda2 = false;
};

/// One manufactured instance: an admissible quadratic core, rotated, plus a
/// smooth boundary perturbation amplitude * L^2 * sin(pi w.(x-c)/(2L) + phi).
struct FamilyMember {
  std::size_t index = 0;
  PhaseProblem problem;
  Eigen::MatrixXd core;
  Spectrum spectrum{std::vector<double>{0.0}};
  double sampling_scale = 0.0;
  double amplitude = 0.0;
  std::vector<double> direction;
  double phase_shift = 0.0;

  /// The quadratic core sampled on the grid (exact solution when amplitude = 0).
  GridFunction core_function() const;
  /// Core in the interior with this member's boundary values.
  GridFunction core_with_boundary() const;
  /// Core plus the harmonic extension of the boundary mismatch; smooth, so
  /// Newton starts without a boundary layer.
  GridFunction initial_guess() const;
};

/// Deterministic family of `count` instances; amplitudes cycle through
/// options.amplitudes. Throws SamplingError naming the constraint if no
/// admissible core is found within bounded retries.
std::vector<FamilyMember> instance_family(std::uint64_t seed, const ConstraintSpec& spec,
                                          std::size_t count, const Grid& grid,
                                          const FamilyOptions& options = {});

/// Normalized slack of a spectrum inside its constraint (and, for n = 3
/// with lambda_2 >= 0, inside the dual test family); negative if outside.
double constraint_slack(const Spectrum& s, const ConstraintSpec& spec);

/// Fraction of depth >= 2 nodes whose FD Hessian spectrum fails `spec`.
double constraint_violation_fraction(const GridFunction& u, const ConstraintSpec& spec);

}  // namespace slelab
