#pragma once

#include <optional>
#include <vector>

#include "slelab/grid.hpp"
#include "slelab/spectral.hpp"

namespace slelab {

/// First and second derivatives of a grid function at one node from
/// second-order central differences (4-point cross stencil for mixed terms).
struct JetSample {
  NodeIndex node = 0;
  SmallVector gradient;
  SmallMatrix hessian;
  Spectrum spectrum{std::vector<double>{0.0}};
  int depth = 0;
};

JetSample jet(const GridFunction& u, NodeIndex node);

/// Raw-array forms used by the solver and field scans. The node must have
/// depth >= 2; no checks are made.
SmallMatrix hessian_at(std::span<const double> u, const Grid& grid, NodeIndex node);
SmallVector gradient_at(std::span<const double> u, const Grid& grid, NodeIndex node);

struct InducedMetric {
  SmallMatrix g;
  SmallMatrix g_inv;
};

/// g = I + H H and its inverse.
InducedMetric induced_metric(const SmallMatrix& hessian);
SmallMatrix metric_inverse(const SmallMatrix& hessian);

/// sum_ij g^{ij}(u) f_ij at `node`.
double laplace_beltrami(const GridFunction& u, const GridFunction& f, NodeIndex node);

/// sum_ij g^{ij} u_{ijk}, with u_{ijk} the central difference of the
/// Hessian field along axis k. Needs depth >= 3.
double minimal_surface_residual(const GridFunction& u, NodeIndex node, int k);

/// max_k |sum_ij g^{ij} u_{ijk}| at every depth >= 3 node.
NodeField minimal_surface_residual_field(const GridFunction& u);

/// Largest |residual| over valid nodes lying in the centered sub-box
/// |x - center|_inf <= half_width.
double max_in_box(const NodeField& field, double half_width);

/// Average of the top m Hessian eigenvalues; valid at depth >= 2.
NodeField b_m_field(const GridFunction& u, int m);

struct JacobiParams {
  int m = 1;
  double alpha = 1.0 / 16.0;
  double delta = 5.0;
  /// Present for the n = 3 sigma_2 family, absent for the cone family.
  std::optional<double> eps;
  double eigengap_tol = 0.0;

  /// alpha = min(1, eps)/16, delta = 4 min(1, eps)^{-1/2} + max(1, eps).
  static JacobiParams for_sigma2(double eps, double spacing, int m = 1);
  /// Cone family: no explicit constants are available, so the eps = 1 values
  /// of the n = 3 family are used (alpha = 1/16, delta = 5).
  static JacobiParams for_cone(double spacing, int m = 1);

  ConstraintSpec constraint(int n) const;
};

struct JacobiSample {
  double residual = 0.0;
  bool applicable = false;
  double eigengap = 0.0;
  double b = 0.0;
  double lambda_max = 0.0;
  /// b_m <= 0 at an applicable node.
  bool anomaly = false;
};

/// Delta_g b_m - (1 + alpha) |grad_g b_m|_g^2 / b_m at a node of depth >= 4.
JacobiSample jacobi_residual(const GridFunction& u, NodeIndex node, const JacobiParams& p);

struct JacobiScan {
  std::size_t evaluated = 0;
  std::size_t applicable = 0;
  std::size_t violations = 0;
  std::size_t anomalies = 0;
  double min_applicable_residual = 0.0;
  NodeIndex worst_node = 0;
  double threshold = 0.0;

  double violation_fraction() const {
    return applicable == 0 ? 0.0 : static_cast<double>(violations) / applicable;
  }
};

/// Scans every depth >= 4 node; a violation is an applicable node with
/// residual < -threshold.
JacobiScan jacobi_scan(const GridFunction& u, const JacobiParams& p, double threshold);

}  // namespace slelab
