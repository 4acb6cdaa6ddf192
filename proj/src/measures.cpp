#include "slelab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "slelab/field.hpp"
#include "slelab/sampling.hpp"

namespace slelab {

namespace {

double dist2(const SmallVector& x, const std::vector<double>& c) {
  double s = 0.0;
  for (int k = 0; k < x.size(); ++k) {
    const double d = x(k) - c[static_cast<std::size_t>(k)];
    s += d * d;
  }
  return s;
}

double cell_volume(const Grid& grid) { return std::pow(grid.spacing(), grid.dim()); }

void check_ball(const Grid& grid, const Ball& ball, const char* who) {
  if (static_cast<int>(ball.center.size()) != grid.dim()) {
    throw MeasureError(std::string(who) + ": ball center has wrong dimension");
  }
  if (!(ball.radius > 0.0)) throw MeasureError(std::string(who) + ": ball radius must be positive");
}

void check_bump(const Grid& grid, const TestFunction& phi, const char* who) {
  if (static_cast<int>(phi.center.size()) != grid.dim()) {
    throw MeasureError(std::string(who) + ": test function center has wrong dimension");
  }
  if (!phi.support_inside(grid, 2)) {
    throw MeasureError(std::string(who) + ": test function support escapes the grid");
  }
}

/// Deterministic node pairs: all pairs for small sets, else axis neighbors
/// plus seeded random pairs.
template <typename Visit>
std::size_t for_each_pair(const Grid& grid, const std::vector<NodeIndex>& nodes,
                          std::size_t subsample, std::uint64_t seed, bool& all_pairs,
                          Visit&& visit) {
  std::size_t count = 0;
  all_pairs = nodes.size() <= kAllPairsLimit;
  if (all_pairs) {
    for (std::size_t a = 0; a < nodes.size(); ++a) {
      for (std::size_t b = a + 1; b < nodes.size(); ++b) {
        visit(nodes[a], nodes[b]);
        ++count;
      }
    }
    return count;
  }
  std::vector<std::uint8_t> member(grid.size(), 0);
  for (NodeIndex i : nodes) member[i] = 1;
  for (NodeIndex i : nodes) {
    const MultiIndex mi = grid.multi_index(i);
    for (int k = 0; k < grid.dim(); ++k) {
      if (mi[static_cast<std::size_t>(k)] + 1 >= grid.points()) continue;
      const NodeIndex j = i + grid.stride(k);
      if (member[j]) {
        visit(i, j);
        ++count;
      }
    }
  }
  std::mt19937_64 rng(derive_seed(seed, 0x11b));
  std::uniform_int_distribution<std::size_t> pick(0, nodes.size() - 1);
  for (std::size_t s = 0; s < subsample; ++s) {
    const std::size_t a = pick(rng);
    const std::size_t b = pick(rng);
    if (a == b) continue;
    visit(nodes[a], nodes[b]);
    ++count;
  }
  return count;
}

}  // namespace

std::vector<NodeIndex> nodes_in_ball(const Grid& grid, const Ball& ball, int min_depth) {
  check_ball(grid, ball, "nodes_in_ball");
  const double r2 = ball.radius * ball.radius * (1.0 + 1e-12);
  std::vector<NodeIndex> out;
  for (NodeIndex i = 0; i < grid.size(); ++i) {
    if (grid.depth(i) >= min_depth && dist2(grid.position(i), ball.center) <= r2) out.push_back(i);
  }
  return out;
}

double TestFunction::value(const SmallVector& x) const {
  const double s = 1.0 - dist2(x, center) / (radius * radius);
  return s > 0.0 ? s * s * s * s : 0.0;
}

SmallVector TestFunction::gradient(const SmallVector& x) const {
  const int n = static_cast<int>(x.size());
  SmallVector g = SmallVector::Zero(n);
  const double r2 = radius * radius;
  const double s = 1.0 - dist2(x, center) / r2;
  if (s <= 0.0) return g;
  for (int k = 0; k < n; ++k) g(k) = -8.0 * s * s * s * (x(k) - center[static_cast<std::size_t>(k)]) / r2;
  return g;
}

SmallMatrix TestFunction::hessian(const SmallVector& x) const {
  const int n = static_cast<int>(x.size());
  SmallMatrix h = SmallMatrix::Zero(n, n);
  const double r2 = radius * radius;
  const double s = 1.0 - dist2(x, center) / r2;
  if (s <= 0.0) return h;
  SmallVector d(n);
  for (int k = 0; k < n; ++k) d(k) = x(k) - center[static_cast<std::size_t>(k)];
  h = (48.0 * s * s / (r2 * r2)) * (d * d.transpose());
  h.diagonal().array() -= 8.0 * s * s * s / r2;
  return h;
}

bool TestFunction::support_inside(const Grid& grid, int min_depth) const {
  if (static_cast<int>(center.size()) != grid.dim() || !(radius > 0.0)) return false;
  const double inner = grid.half_width() - (min_depth - 1) * grid.spacing();
  for (int k = 0; k < grid.dim(); ++k) {
    const double d = std::abs(center[static_cast<std::size_t>(k)] - grid.center()[static_cast<std::size_t>(k)]);
    if (d + radius > inner) return false;
  }
  return true;
}

std::vector<TestFunction> standard_bumps(int n) {
  const std::vector<std::vector<double>> offsets = {
      {0.0, 0.0, 0.0, 0.0}, {0.3, 0.0, 0.0, 0.0}, {0.0, -0.3, 0.2, 0.0},
      {-0.2, 0.2, -0.2, 0.1}, {0.1, 0.1, 0.3, -0.1}};
  const std::vector<double> radii = {0.5, 0.4, 0.45, 0.4, 0.5};
  std::vector<TestFunction> out;
  for (std::size_t b = 0; b < offsets.size(); ++b) {
    std::vector<double> c(offsets[b].begin(), offsets[b].begin() + n);
    out.push_back({c, radii[b]});
  }
  return out;
}

PairingResult distributional_hessian_pairing(const GridFunction& u, const TestFunction& phi,
                                             int i, int j) {
  const Grid& grid = u.grid();
  check_bump(grid, phi, "distributional_hessian_pairing");
  if (i < 0 || j < 0 || i >= grid.dim() || j >= grid.dim()) {
    throw MeasureError("distributional_hessian_pairing: index out of range");
  }
  PairingResult out;
  out.spacing = grid.spacing();
  const double r2 = phi.radius * phi.radius;
  const double inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
  for (NodeIndex node = 0; node < grid.size(); ++node) {
    const SmallVector x = grid.position(node);
    if (dist2(x, phi.center) >= r2) continue;
    ++out.support_nodes;
    out.value += u[node] * phi.hessian(x)(i, j);
    double uij;
    const auto vals = u.values();
    if (i == j) {
      const std::size_t si = grid.stride(i);
      uij = (vals[node + si] - 2.0 * vals[node] + vals[node - si]) * inv_h2;
    } else {
      const std::size_t si = grid.stride(i), sj = grid.stride(j);
      uij = (vals[node + si + sj] - vals[node + si - sj] - vals[node - si + sj] +
             vals[node - si - sj]) * 0.25 * inv_h2;
    }
    out.transposed += uij * phi.value(x);
    out.hessian_sup = std::max(out.hessian_sup, hessian_at(vals, grid, node).cwiseAbs().maxCoeff());
  }
  const double vol = cell_volume(grid);
  out.value *= vol;
  out.transposed *= vol;
  out.discrepancy = std::abs(out.value - out.transposed);
  return out;
}

Eigen::MatrixXd pairing_matrix(const GridFunction& u, const TestFunction& phi) {
  const int n = u.grid().dim();
  Eigen::MatrixXd p(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      p(i, j) = distributional_hessian_pairing(u, phi, i, j).value;
      p(j, i) = p(i, j);
    }
  }
  return p;
}

double t_a_from_pairings(const Eigen::MatrixXd& pairings, const Eigen::MatrixXd& a) {
  if (a.rows() != pairings.rows() || a.cols() != pairings.cols()) {
    throw MeasureError("t_a_functional: matrix size mismatch");
  }
  // Diagonal first, then off-diagonal pairs, in a fixed order.
  double diag = 0.0;
  for (int i = 0; i < a.rows(); ++i) diag += a(i, i) * pairings(i, i);
  double off = 0.0;
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = i + 1; j < a.cols(); ++j) off += (a(i, j) + a(j, i)) * pairings(i, j);
  }
  return diag + off;
}

double t_a_functional(const GridFunction& u, const TestFunction& phi, const Eigen::MatrixXd& a) {
  return t_a_from_pairings(pairing_matrix(u, phi), a);
}

GridFunction shifted_solution(const GridFunction& u, double eps) {
  if (!(eps > 0.0)) throw MeasureError("shifted_solution: eps must be positive");
  const Grid& grid = u.grid();
  const double c = 0.5 * std::max(1.0, eps);
  std::vector<double> v(u.values().begin(), u.values().end());
  for (NodeIndex i = 0; i < grid.size(); ++i) v[i] += c * grid.offset(i).squaredNorm();
  return GridFunction(grid, std::move(v));
}

GridFunction unshifted_solution(const GridFunction& u, double eps) {
  if (!(eps > 0.0)) throw MeasureError("unshifted_solution: eps must be positive");
  const Grid& grid = u.grid();
  const double c = 0.5 * std::max(1.0, eps);
  std::vector<double> v(u.values().begin(), u.values().end());
  for (NodeIndex i = 0; i < grid.size(); ++i) v[i] -= c * grid.offset(i).squaredNorm();
  return GridFunction(grid, std::move(v));
}

LipschitzResult lipschitz_norm(const GridFunction& u, const Ball& ball, std::size_t subsample,
                               std::uint64_t seed) {
  const Grid& grid = u.grid();
  const auto nodes = nodes_in_ball(grid, ball);
  if (nodes.size() < 2) throw MeasureError("lipschitz_norm: fewer than two nodes in the ball");
  LipschitzResult out;
  for (NodeIndex i : nodes) out.sup_abs = std::max(out.sup_abs, std::abs(u[i]));
  out.pairs = for_each_pair(grid, nodes, subsample, seed, out.all_pairs, [&](NodeIndex a, NodeIndex b) {
    const double d = (grid.offset(a) - grid.offset(b)).norm();
    out.lipschitz = std::max(out.lipschitz, std::abs(u[a] - u[b]) / d);
  });
  out.norm = out.sup_abs + out.lipschitz;
  return out;
}

WeightedLipschitzResult weighted_lipschitz(const GridFunction& u, const Ball& ball,
                                           std::size_t subsample, std::uint64_t seed) {
  const Grid& grid = u.grid();
  const auto nodes = nodes_in_ball(grid, ball);
  if (nodes.size() < 2) throw MeasureError("weighted_lipschitz: fewer than two nodes in the ball");
  const int n = grid.dim();
  std::vector<double> dist_to_edge(grid.size(), 0.0);
  for (NodeIndex i : nodes) {
    dist_to_edge[i] = std::max(0.0, ball.radius - std::sqrt(dist2(grid.position(i), ball.center)));
  }
  WeightedLipschitzResult out;
  bool all_pairs = false;
  out.pairs = for_each_pair(grid, nodes, subsample, seed, all_pairs, [&](NodeIndex a, NodeIndex b) {
    const double d = (grid.offset(a) - grid.offset(b)).norm();
    const double w = std::pow(std::min(dist_to_edge[a], dist_to_edge[b]), n + 1);
    out.lhs = std::max(out.lhs, w * std::abs(u[a] - u[b]) / d);
  });
  for (NodeIndex i : nodes) out.rhs_integral += std::abs(u[i]);
  out.rhs_integral *= cell_volume(grid);
  out.ratio = out.rhs_integral > 0.0 ? out.lhs / out.rhs_integral : 0.0;
  return out;
}

std::vector<QuadraticProbePoint> quadratic_approx_probe(const GridFunction& u, NodeIndex node,
                                                        const std::vector<double>& radii) {
  const Grid& grid = u.grid();
  const JetSample j = jet(u, node);
  const SmallVector x0 = grid.offset(node);
  std::vector<QuadraticProbePoint> out;
  for (double r : radii) {
    if (r < 2.0 * grid.spacing()) continue;
    std::vector<double> c(grid.center());
    for (int k = 0; k < grid.dim(); ++k) c[static_cast<std::size_t>(k)] = grid.position(node)(k);
    QuadraticProbePoint p;
    p.r = r;
    for (NodeIndex i : nodes_in_ball(grid, {c, r})) {
      const SmallVector d = grid.offset(i) - x0;
      const double q = u[node] + j.gradient.dot(d) + 0.5 * d.dot(j.hessian * d);
      p.sup_error = std::max(p.sup_error, std::abs(u[i] - q));
    }
    p.quotient = p.sup_error / (r * r);
    out.push_back(p);
  }
  return out;
}

std::string to_string(PositivityCase c) {
  switch (c) {
    case PositivityCase::kTwoConvex: return "two_convex";
    case PositivityCase::kConeDual: return "cone_dual";
    case PositivityCase::kSigma2Dual: return "sigma2_dual";
    case PositivityCase::kSigma2ShiftedDual: return "sigma2_shifted_dual";
  }
  return "unknown";
}

PositivityCase classify_case(const GridFunction& u, const ConstraintSpec& spec) {
  const Grid& grid = u.grid();
  if (spec.dimension() != grid.dim()) throw MeasureError("classify_case: dimension mismatch");
  if (spec.is_gamma_cone()) {
    return grid.dim() >= 4 ? PositivityCase::kTwoConvex : PositivityCase::kConeDual;
  }
  for (NodeIndex i : grid.nodes_with_depth(2)) {
    if (eigen_desc(hessian_at(u.values(), grid, i))[1] < 0.0) {
      return PositivityCase::kSigma2ShiftedDual;
    }
  }
  return PositivityCase::kSigma2Dual;
}

std::vector<NamedMatrix> dual_test_family(double t) {
  std::vector<NamedMatrix> out;
  for (int i = 0; i < 3; ++i) out.push_back({"A" + std::to_string(i + 1), dual_diagonal_matrix(i)});
  out.push_back({"I3", Eigen::MatrixXd::Identity(3, 3)});
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      out.push_back({"A" + std::to_string(i + 1) + std::to_string(j + 1), dual_test_matrix(t, i, j)});
    }
  }
  return out;
}

bool PositivityReport::passed() const {
  if (two_convexity_failures > 0) return false;
  return std::all_of(entries.begin(), entries.end(), [](const PositivityEntry& e) { return e.pass; });
}

PositivityReport positivity_checks(const GridFunction& u, const ConstraintSpec& spec,
                                   const std::vector<TestFunction>& bumps, double tolerance) {
  const Grid& grid = u.grid();
  PositivityReport rep;
  rep.routed = classify_case(u, spec);
  rep.tolerance = tolerance;
  for (NodeIndex i : grid.nodes_with_depth(2)) {
    const Spectrum s = eigen_desc(hessian_at(u.values(), grid, i));
    if (s.size() >= 2 && s[1] < 0.0) ++rep.negative_lambda2_nodes;
    if (rep.routed == PositivityCase::kTwoConvex && !two_convexity(s)) ++rep.two_convexity_failures;
  }

  std::vector<NamedMatrix> family;
  if (rep.routed == PositivityCase::kTwoConvex) {
    family.push_back({"I" + std::to_string(grid.dim()), Eigen::MatrixXd::Identity(grid.dim(), grid.dim())});
  } else {
    family = dual_test_family(0.5);
  }
  const GridFunction target =
      rep.routed == PositivityCase::kSigma2ShiftedDual ? shifted_solution(u, spec.eps()) : u;

  rep.min_value = std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < bumps.size(); ++b) {
    const Eigen::MatrixXd p = pairing_matrix(target, bumps[b]);
    for (const NamedMatrix& m : family) {
      PositivityEntry e;
      e.matrix = m.name;
      e.bump = b;
      e.value = t_a_from_pairings(p, m.a);
      e.pass = e.value >= -tolerance;
      rep.min_value = std::min(rep.min_value, e.value);
      rep.entries.push_back(e);
    }
  }
  if (rep.entries.empty()) rep.min_value = 0.0;
  return rep;
}

}  // namespace slelab
