#include "slelab/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "slelab/field.hpp"

namespace slelab {

namespace {

constexpr double kExpClamp = 700.0;

std::vector<double> origin(const Grid& grid) { return grid.center(); }

double distance(const SmallVector& x, const std::vector<double>& y) {
  double s = 0.0;
  for (int k = 0; k < x.size(); ++k) {
    const double d = x(k) - y[static_cast<std::size_t>(k)];
    s += d * d;
  }
  return std::sqrt(s);
}

void require_depth(const Grid& grid, const std::vector<NodeIndex>& nodes, int min_depth,
                   const char* who) {
  for (NodeIndex i : nodes) {
    if (grid.depth(i) < min_depth) {
      throw EstimateError(std::string(who) + ": ball reaches the grid boundary stencil margin");
    }
  }
}

/// In-ball nodes with an axis neighbor outside the ball.
bool on_inner_shell(const Grid& grid, NodeIndex i, const std::vector<double>& c, double r) {
  const MultiIndex mi = grid.multi_index(i);
  const double lim = r * (1.0 + 1e-12);
  for (int k = 0; k < grid.dim(); ++k) {
    const int idx = mi[static_cast<std::size_t>(k)];
    if (idx == 0 || idx == grid.points() - 1) return true;
    if (distance(grid.position(i + grid.stride(k)), c) > lim) return true;
    if (distance(grid.position(i - grid.stride(k)), c) > lim) return true;
  }
  return false;
}

double lambda_max_at(const GridFunction& u, NodeIndex i) {
  return eigen_desc(hessian_at(u.values(), u.grid(), i))[0];
}

}  // namespace

double oscillation(const GridFunction& u, const Ball& ball) {
  const auto nodes = nodes_in_ball(u.grid(), ball);
  if (nodes.empty()) throw EstimateError("oscillation: no grid node in the ball");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (NodeIndex i : nodes) {
    lo = std::min(lo, u[i]);
    hi = std::max(hi, u[i]);
  }
  return hi - lo;
}

GradientRatio gradient_ratio(const GridFunction& u, double radius) {
  const Grid& grid = u.grid();
  if (!(radius > 0.0)) throw EstimateError("gradient_ratio: radius must be positive");
  const NodeIndex c = grid.center_node();
  if (grid.depth(c) < 2) throw EstimateError("gradient_ratio: center too close to the boundary");
  GradientRatio out;
  out.gradient_norm = gradient_at(u.values(), grid, c).norm();
  out.oscillation = oscillation(u, {origin(grid), radius});
  if (out.oscillation > 0.0) {
    out.ratio = out.gradient_norm * radius / out.oscillation;
  } else if (out.gradient_norm > 0.0) {
    out.anomaly = true;
    out.ratio = std::numeric_limits<double>::infinity();
  }
  return out;
}

double gradient_ratio_cap(int n) { return 4.0 * n; }

bool AppendixResult::chain_holds() const {
  return grad_at_center <= w_at_center && w_at_center <= w_max;
}

bool AppendixResult::shell_bound_holds() const {
  if (!argmax_on_shell) return true;
  return grad_at_center <= 4.0 * u.grid().dim() * m;
}

AppendixResult appendix_test_function(const GridFunction& u, bool shift_to_band) {
  const Grid& grid = u.grid();
  const std::vector<double> c = origin(grid);
  const Ball unit{c, 1.0};
  const auto nodes = nodes_in_ball(grid, unit);
  require_depth(grid, nodes, 2, "appendix_test_function");
  const double m = oscillation(u, unit);
  if (!(m > 0.0)) throw EstimateError("appendix_test_function: constant function (M = 0)");

  std::vector<double> v(u.values().begin(), u.values().end());
  if (shift_to_band) {
    double lo = std::numeric_limits<double>::infinity();
    for (NodeIndex i : nodes) lo = std::min(lo, u[i]);
    for (double& x : v) x = x - lo + m;
  }
  AppendixResult out{NodeField(grid), GridFunction(grid, std::move(v))};
  out.m = m;
  const int n = grid.dim();
  out.w_max = -std::numeric_limits<double>::infinity();
  for (NodeIndex i : nodes) {
    const double r2 = grid.offset(i).squaredNorm();
    const double grad = gradient_at(out.u.values(), grid, i).norm();
    const double cutoff = (1.0 - r2) * grad;
    const double w = cutoff + (n / m) * out.u[i] * out.u[i];
    out.w.set(i, w);
    if (w > out.w_max) {
      out.w_max = w;
      out.argmax = i;
      out.argmax_cutoff_term = cutoff;
    }
  }
  const NodeIndex center = grid.center_node();
  out.grad_at_center = gradient_at(out.u.values(), grid, center).norm();
  out.w_at_center = out.w.values[center];
  out.argmax_on_shell = on_inner_shell(grid, out.argmax, c, 1.0);
  return out;
}

CutoffResult korevaar_cutoff(const GridFunction& u, const CutoffParams& p) {
  const Grid& grid = u.grid();
  if (static_cast<int>(p.y.size()) != grid.dim()) throw EstimateError("korevaar_cutoff: y has wrong dimension");
  if (!(p.alpha >= 1.0)) throw EstimateError("korevaar_cutoff: alpha must be >= 1");
  if (!(p.cutoff_scale > 0.0)) throw EstimateError("korevaar_cutoff: cutoff scale must be positive");
  bool exact = false;
  const NodeIndex ynode = grid.nearest_node(p.y, &exact);
  if (!exact) throw EstimateError("korevaar_cutoff: y must be a grid node");
  const std::vector<double> y = [&] {
    std::vector<double> out(p.y.size());
    const SmallVector x = grid.position(ynode);
    for (int k = 0; k < grid.dim(); ++k) out[static_cast<std::size_t>(k)] = x(k);
    return out;
  }();

  const double half = 0.5;
  const auto ball = nodes_in_ball(grid, {y, half});
  // Shell: nodes at distance >= 1/2 with an axis neighbor strictly inside.
  const double inside = half * (1.0 - 1e-12);
  std::vector<NodeIndex> shell;
  for (NodeIndex i : ball) {
    if (distance(grid.position(i), y) >= inside) continue;
    for (int k = 0; k < grid.dim(); ++k) {
      for (NodeIndex j : {i + grid.stride(k), i - grid.stride(k)}) {
        if (distance(grid.position(j), y) >= inside) shell.push_back(j);
      }
    }
  }
  std::sort(shell.begin(), shell.end());
  shell.erase(std::unique(shell.begin(), shell.end()), shell.end());
  require_depth(grid, ball, 2, "korevaar_cutoff");
  require_depth(grid, shell, 2, "korevaar_cutoff");

  const SmallVector yv = grid.offset(ynode);
  auto q = [&](NodeIndex i) {
    const SmallVector d = grid.offset(i) - yv;
    return d.dot(gradient_at(u.values(), grid, i)) - u[i] + u[ynode];
  };

  CutoffResult out{NodeField(grid), NodeField(grid)};
  for (NodeIndex i : ball) out.q_norm = std::max(out.q_norm, std::abs(q(i)));
  const double a = p.alpha;
  const double log_const = a * std::log(2.0) - std::log(a);
  out.s = -1.0 - out.q_norm - std::exp(log_const + 2.0 * a * std::log(2.0));

  auto phi_at = [&](NodeIndex i) {
    const double rho = (grid.offset(i) - yv).norm();
    return q(i) - std::exp(log_const - 2.0 * a * std::log(rho));
  };
  auto record = [&](NodeIndex i) {
    if (i == ynode) return;
    const double phi = phi_at(i);
    out.phi.set(i, phi);
    const double e = std::min((out.s - phi) / p.cutoff_scale, kExpClamp);
    out.eta.set(i, std::max(0.0, std::expm1(e)));
  };
  for (NodeIndex i : ball) record(i);
  for (NodeIndex i : shell) record(i);

  out.shell_max = -std::numeric_limits<double>::infinity();
  for (NodeIndex i : shell) out.shell_max = std::max(out.shell_max, out.s - out.phi.values[i]);
  out.shell_nodes = shell.size();
  out.inner_min = std::numeric_limits<double>::infinity();
  for (NodeIndex i : nodes_in_ball(grid, {y, 0.25})) {
    if (i == ynode) continue;
    out.inner_min = std::min(out.inner_min, out.s - out.phi.values[i]);
    ++out.inner_nodes;
  }
  out.sign_ok = out.shell_nodes > 0 && out.inner_nodes > 0 && out.shell_max < 0.0 && out.inner_min > 0.0;
  return out;
}

AlphaSweep cutoff_alpha_sweep(const GridFunction& u, const std::vector<double>& y,
                              double cutoff_scale, const std::vector<double>& alphas) {
  AlphaSweep sweep;
  for (double a : alphas) {
    const bool ok = korevaar_cutoff(u, {a, cutoff_scale, y}).sign_ok;
    sweep.alphas.push_back(a);
    sweep.sign_ok.push_back(ok);
    if (ok && !sweep.smallest_ok) sweep.smallest_ok = a;
  }
  return sweep;
}

DoublingSample doubling_check(const GridFunction& u, const std::vector<double>& y, double r) {
  const Grid& grid = u.grid();
  if (static_cast<int>(y.size()) != grid.dim()) throw EstimateError("doubling_check: y has wrong dimension");
  double ny = 0.0;
  for (int k = 0; k < grid.dim(); ++k) {
    const double d = y[static_cast<std::size_t>(k)] - grid.center()[static_cast<std::size_t>(k)];
    ny += d * d;
  }
  if (std::sqrt(ny) > 0.5 + 1e-12) throw EstimateError("doubling_check: y must lie in B_1/2(0)");
  if (!(r < 0.25)) throw EstimateError("doubling_check: r must be < 1/4");
  if (r < grid.spacing()) throw EstimateError("doubling_check: r is below the grid spacing");
  const auto quarter = nodes_in_ball(grid, {y, 0.25});
  const auto small = nodes_in_ball(grid, {y, r});
  if (small.empty()) throw EstimateError("doubling_check: empty small ball");
  require_depth(grid, quarter, 2, "doubling_check");

  DoublingSample out;
  out.y = y;
  out.r = r;
  out.quarter_nodes = quarter.size();
  out.r_nodes = small.size();
  out.sup_quarter = -std::numeric_limits<double>::infinity();
  out.sup_r = out.sup_quarter;
  for (NodeIndex i : quarter) out.sup_quarter = std::max(out.sup_quarter, lambda_max_at(u, i));
  for (NodeIndex i : small) out.sup_r = std::max(out.sup_r, lambda_max_at(u, i));
  return out;
}

DoublingFit fit_doubling(const std::vector<DoublingSample>& samples) {
  if (samples.empty()) throw EstimateError("fit_doubling: no samples");
  DoublingFit fit;
  fit.samples = samples.size();
  double mx = 0.0, my = 0.0;
  for (const auto& s : samples) {
    mx += s.sup_r;
    my += s.sup_quarter;
    if (s.sup_quarter < s.sup_r) fit.nested_monotone = false;
    if (s.sup_r > 0.0) fit.max_ratio = std::max(fit.max_ratio, s.sup_quarter / s.sup_r);
  }
  mx /= static_cast<double>(samples.size());
  my /= static_cast<double>(samples.size());
  double sxx = 0.0, sxy = 0.0;
  for (const auto& s : samples) {
    sxx += (s.sup_r - mx) * (s.sup_r - mx);
    sxy += (s.sup_r - mx) * (s.sup_quarter - my);
  }
  if (sxx <= 1e-24 * std::max(1.0, mx * mx) * static_cast<double>(samples.size())) {
    // No spread in sup_r: the slope is not identifiable.
    fit.c_emp = fit.max_ratio;
    fit.c0 = 0.0;
  } else {
    fit.c_emp = sxy / sxx;
    fit.c0 = my - fit.c_emp * mx;
  }
  return fit;
}

HessianProbe hessian_probe(const GridFunction& u, std::size_t subsample) {
  const Grid& grid = u.grid();
  const NodeIndex c = grid.center_node();
  if (grid.depth(c) < 2) throw EstimateError("hessian_probe: center too close to the boundary");
  const SmallMatrix h = hessian_at(u.values(), grid, c);
  HessianProbe out;
  out.hessian_norm_at_center = h.norm();
  out.theta = phase(eigen_desc(h));
  const LipschitzResult lip = lipschitz_norm(u, {origin(grid), 1.0}, subsample);
  out.lipschitz_norm = lip.norm;
  out.sup_abs = lip.sup_abs;
  out.lipschitz = lip.lipschitz;
  return out;
}

GridFunction rescale(const GridFunction& u, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw EstimateError("rescale: factor must be positive");
  const Grid& g = u.grid();
  std::vector<double> c(g.center());
  for (double& x : c) x /= r;
  Grid scaled(g.dim(), c, g.half_width() / r, g.points());
  std::vector<double> v(u.values().begin(), u.values().end());
  for (double& x : v) x /= r * r;
  return GridFunction(std::move(scaled), std::move(v));
}

}  // namespace slelab
