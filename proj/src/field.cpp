#include "slelab/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace slelab {

namespace {

void require_depth(const Grid& grid, NodeIndex node, int min_depth, const char* who) {
  if (node >= grid.size()) throw GridError(std::string(who) + ": node out of range");
  if (grid.depth(node) < min_depth) {
    std::ostringstream msg;
    msg << who << ": node depth " << grid.depth(node) << " below required " << min_depth;
    throw GridError(msg.str());
  }
}

double contract(const SmallMatrix& g_inv, const SmallMatrix& f) {
  return (g_inv.array() * f.array()).sum();
}

/// Top-m average and the gap lambda_m - lambda_{m+1} (+inf for m = n).
void top_block(const Spectrum& s, int m, double& b, double& gap) {
  double sum = 0.0;
  for (int i = 0; i < m; ++i) sum += s[static_cast<std::size_t>(i)];
  b = sum / m;
  gap = m < static_cast<int>(s.size())
            ? s[static_cast<std::size_t>(m - 1)] - s[static_cast<std::size_t>(m)]
            : std::numeric_limits<double>::infinity();
}

JacobiSample jacobi_at(const GridFunction& u, std::span<const double> b, NodeIndex node,
                       const JacobiParams& p, const ConstraintSpec& constraint) {
  const Grid& grid = u.grid();
  const SmallMatrix h = hessian_at(u.values(), grid, node);
  const Spectrum s = eigen_desc(h);
  JacobiSample out;
  double bm = 0.0;
  top_block(s, p.m, bm, out.eigengap);
  out.b = b[node];
  out.lambda_max = s[0];

  const SmallMatrix g_inv = metric_inverse(h);
  const SmallVector db = gradient_at(b, grid, node);
  const SmallMatrix d2b = hessian_at(b, grid, node);
  const double lap = contract(g_inv, d2b);
  const double grad_sq = db.dot(g_inv * db);
  out.residual = lap - (1.0 + p.alpha) * grad_sq / out.b;

  out.applicable = s[0] > p.delta && out.eigengap > p.eigengap_tol &&
                   satisfies_constraint(s, constraint);
  out.anomaly = out.applicable && out.b <= 0.0;
  return out;
}

}  // namespace

SmallMatrix hessian_at(std::span<const double> u, const Grid& grid, NodeIndex node) {
  const int n = grid.dim();
  const double inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
  SmallMatrix h(n, n);
  const double c = u[node];
  for (int i = 0; i < n; ++i) {
    const std::size_t si = grid.stride(i);
    h(i, i) = (u[node + si] - 2.0 * c + u[node - si]) * inv_h2;
    for (int j = i + 1; j < n; ++j) {
      const std::size_t sj = grid.stride(j);
      const double v = (u[node + si + sj] - u[node + si - sj] - u[node - si + sj] +
                        u[node - si - sj]) * 0.25 * inv_h2;
      h(i, j) = v;
      h(j, i) = v;
    }
  }
  return h;
}

SmallVector gradient_at(std::span<const double> u, const Grid& grid, NodeIndex node) {
  const int n = grid.dim();
  const double inv_2h = 0.5 / grid.spacing();
  SmallVector g(n);
  for (int i = 0; i < n; ++i) {
    const std::size_t si = grid.stride(i);
    g(i) = (u[node + si] - u[node - si]) * inv_2h;
  }
  return g;
}

JetSample jet(const GridFunction& u, NodeIndex node) {
  const Grid& grid = u.grid();
  require_depth(grid, node, 2, "jet");
  JetSample j;
  j.node = node;
  j.gradient = gradient_at(u.values(), grid, node);
  j.hessian = hessian_at(u.values(), grid, node);
  j.spectrum = eigen_desc(j.hessian);
  j.depth = grid.depth(node);
  return j;
}

SmallMatrix metric_inverse(const SmallMatrix& hessian) {
  const int n = static_cast<int>(hessian.rows());
  SmallMatrix g = SmallMatrix::Identity(n, n) + hessian * hessian;
  return g.llt().solve(SmallMatrix::Identity(n, n));
}

InducedMetric induced_metric(const SmallMatrix& hessian) {
  if (hessian.rows() != hessian.cols()) throw SpectralError("induced_metric: non-square input");
  const int n = static_cast<int>(hessian.rows());
  InducedMetric m;
  m.g = SmallMatrix::Identity(n, n) + hessian * hessian;
  m.g_inv = m.g.llt().solve(SmallMatrix::Identity(n, n));
  m.g_inv = 0.5 * (m.g_inv + m.g_inv.transpose()).eval();
  return m;
}

double laplace_beltrami(const GridFunction& u, const GridFunction& f, NodeIndex node) {
  if (!(u.grid() == f.grid())) throw GridError("laplace_beltrami: grids differ");
  require_depth(u.grid(), node, 2, "laplace_beltrami");
  const SmallMatrix g_inv = metric_inverse(hessian_at(u.values(), u.grid(), node));
  return contract(g_inv, hessian_at(f.values(), f.grid(), node));
}

double minimal_surface_residual(const GridFunction& u, NodeIndex node, int k) {
  const Grid& grid = u.grid();
  require_depth(grid, node, 3, "minimal_surface_residual");
  if (k < 0 || k >= grid.dim()) throw GridError("minimal_surface_residual: bad axis");
  const std::size_t sk = grid.stride(k);
  const SmallMatrix g_inv = metric_inverse(hessian_at(u.values(), grid, node));
  const SmallMatrix dk = (hessian_at(u.values(), grid, node + sk) -
                          hessian_at(u.values(), grid, node - sk)) / (2.0 * grid.spacing());
  return contract(g_inv, dk);
}

NodeField minimal_surface_residual_field(const GridFunction& u) {
  const Grid& grid = u.grid();
  NodeField out(grid);
  std::vector<SmallMatrix> hess(grid.size());
  for (NodeIndex i : grid.nodes_with_depth(2)) hess[i] = hessian_at(u.values(), grid, i);
  const double inv_2h = 0.5 / grid.spacing();
  for (NodeIndex i : grid.nodes_with_depth(3)) {
    const SmallMatrix g_inv = metric_inverse(hess[i]);
    double worst = 0.0;
    for (int k = 0; k < grid.dim(); ++k) {
      const std::size_t sk = grid.stride(k);
      worst = std::max(worst, std::abs(contract(g_inv, (hess[i + sk] - hess[i - sk]) * inv_2h)));
    }
    out.set(i, worst);
  }
  return out;
}

double max_in_box(const NodeField& field, double half_width) {
  const Grid& grid = field.grid;
  double m = 0.0;
  for (NodeIndex i = 0; i < grid.size(); ++i) {
    if (!field.is_valid(i)) continue;
    if (grid.offset(i).cwiseAbs().maxCoeff() <= half_width + 1e-12) {
      m = std::max(m, std::abs(field.values[i]));
    }
  }
  return m;
}

NodeField b_m_field(const GridFunction& u, int m) {
  const Grid& grid = u.grid();
  if (m < 1 || m > grid.dim()) throw GridError("b_m_field: m must lie in [1, n]");
  NodeField out(grid);
  for (NodeIndex i : grid.nodes_with_depth(2)) {
    const Spectrum s = eigen_desc(hessian_at(u.values(), grid, i));
    double b = 0.0, gap = 0.0;
    top_block(s, m, b, gap);
    out.set(i, b);
  }
  return out;
}

JacobiParams JacobiParams::for_sigma2(double eps, double spacing, int m) {
  if (!(eps > 0.0)) throw SpectralError("JacobiParams: eps must be positive");
  JacobiParams p;
  p.m = m;
  p.eps = eps;
  p.alpha = std::min(1.0, eps) / 16.0;
  p.delta = 4.0 / std::sqrt(std::min(1.0, eps)) + std::max(1.0, eps);
  p.eigengap_tol = 10.0 * spacing;
  return p;
}

JacobiParams JacobiParams::for_cone(double spacing, int m) {
  JacobiParams p;
  p.m = m;
  p.alpha = 1.0 / 16.0;
  p.delta = 5.0;
  p.eigengap_tol = 10.0 * spacing;
  return p;
}

ConstraintSpec JacobiParams::constraint(int n) const {
  return eps ? ConstraintSpec::sigma2_lower(*eps) : ConstraintSpec::gamma_cone(n);
}

JacobiSample jacobi_residual(const GridFunction& u, NodeIndex node, const JacobiParams& p) {
  const Grid& grid = u.grid();
  require_depth(grid, node, 4, "jacobi_residual");
  if (p.m < 1 || p.m > grid.dim()) throw GridError("jacobi_residual: m must lie in [1, n]");
  // Only the b_m values the stencil touches are needed.
  std::vector<double> b(grid.size(), 0.0);
  auto fill = [&](NodeIndex i) {
    double bm = 0.0, gap = 0.0;
    top_block(eigen_desc(hessian_at(u.values(), grid, i)), p.m, bm, gap);
    b[i] = bm;
  };
  fill(node);
  for (int i = 0; i < grid.dim(); ++i) {
    const std::size_t si = grid.stride(i);
    fill(node + si);
    fill(node - si);
    for (int j = i + 1; j < grid.dim(); ++j) {
      const std::size_t sj = grid.stride(j);
      fill(node + si + sj);
      fill(node + si - sj);
      fill(node - si + sj);
      fill(node - si - sj);
    }
  }
  return jacobi_at(u, b, node, p, p.constraint(grid.dim()));
}

JacobiScan jacobi_scan(const GridFunction& u, const JacobiParams& p, double threshold) {
  const Grid& grid = u.grid();
  const NodeField b = b_m_field(u, p.m);
  const ConstraintSpec constraint = p.constraint(grid.dim());
  JacobiScan scan;
  scan.threshold = threshold;
  scan.min_applicable_residual = std::numeric_limits<double>::infinity();
  for (NodeIndex i : grid.nodes_with_depth(4)) {
    const JacobiSample s = jacobi_at(u, b.values, i, p, constraint);
    ++scan.evaluated;
    if (!s.applicable) continue;
    ++scan.applicable;
    if (s.anomaly) ++scan.anomalies;
    if (s.residual < -threshold) ++scan.violations;
    if (s.residual < scan.min_applicable_residual) {
      scan.min_applicable_residual = s.residual;
      scan.worst_node = i;
    }
  }
  if (scan.applicable == 0) scan.min_applicable_residual = 0.0;
  return scan;
}

}  // namespace slelab
