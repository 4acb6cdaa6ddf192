#pragma once

#include <optional>
#include <string>
#include <vector>

#include "slelab/grid.hpp"
#include "slelab/measures.hpp"

namespace slelab {

class EstimateError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// max - min of u over the nodes of the ball.
double oscillation(const GridFunction& u, const Ball& ball);

struct GradientRatio {
  double gradient_norm = 0.0;
  double oscillation = 0.0;
  /// |Du(0)| R / osc_{B_R(0)} u (0 when both vanish).
  double ratio = 0.0;
  /// Zero oscillation with a nonzero gradient.
  bool anomaly = false;
};

/// Evaluated at the grid center.
GradientRatio gradient_ratio(const GridFunction& u, double radius);

/// Gradient ratio bound asserted over instance families.
double gradient_ratio_cap(int n);

struct AppendixResult {
  /// w on the depth >= 2 nodes of B_1(center).
  NodeField w;
  /// Function the test function was built from (shifted into [M, 2M]).
  GridFunction u;
  double m = 0.0;
  double grad_at_center = 0.0;
  double w_at_center = 0.0;
  double w_max = 0.0;
  NodeIndex argmax = 0;
  /// argmax has an axis neighbor outside the unit ball.
  bool argmax_on_shell = false;
  /// (1 - |x*|^2)|Du(x*)| at the argmax; nonzero on the discrete shell.
  double argmax_cutoff_term = 0.0;

  /// |Du(0)| <= w(0) <= max w.
  bool chain_holds() const;
  /// When the argmax is on the shell, |Du(0)| <= 4 n M.
  bool shell_bound_holds() const;
};

/// w = (1 - |x|^2)|Du| + (n/M) u^2 on B_1(center), M = osc_{B_1} u; with
/// shift_to_band, u is first replaced by u - min u + M.
AppendixResult appendix_test_function(const GridFunction& u, bool shift_to_band);

struct CutoffParams {
  double alpha = 2.0;
  double cutoff_scale = 1.0;
  std::vector<double> y;
};

struct CutoffResult {
  /// phi on the nodes of B_1/2(y) plus the outer shell, minus y.
  NodeField phi;
  NodeField eta;
  double s = 0.0;
  /// sup |(x - y).Du - u + u(y)| over B_1/2(y).
  double q_norm = 0.0;
  /// Largest S - phi on the outer shell (must be < 0).
  double shell_max = 0.0;
  /// Smallest S - phi on B_1/4(y) minus y (must be > 0).
  double inner_min = 0.0;
  std::size_t shell_nodes = 0;
  std::size_t inner_nodes = 0;
  bool sign_ok = false;
};

/// The discrete shell of B_1/2(y) is the set of nodes with |x - y| >= 1/2
/// that have an axis neighbor strictly inside the ball. y must be a node and
/// the shell must have depth >= 2.
CutoffResult korevaar_cutoff(const GridFunction& u, const CutoffParams& p);

struct AlphaSweep {
  std::vector<double> alphas;
  std::vector<bool> sign_ok;
  std::optional<double> smallest_ok;
};

inline const std::vector<double> kDefaultAlphas = {1, 2, 4, 8, 16, 32, 64};

AlphaSweep cutoff_alpha_sweep(const GridFunction& u, const std::vector<double>& y,
                              double cutoff_scale = 1.0,
                              const std::vector<double>& alphas = kDefaultAlphas);

struct DoublingSample {
  std::vector<double> y;
  double r = 0.0;
  double sup_quarter = 0.0;
  double sup_r = 0.0;
  std::size_t quarter_nodes = 0;
  std::size_t r_nodes = 0;
};

/// Node maxima of lambda_max(D^2 u) over B_1/4(y) and B_r(y).
DoublingSample doubling_check(const GridFunction& u, const std::vector<double>& y, double r);

struct DoublingFit {
  /// Least-squares slope of sup_quarter against sup_r.
  double c_emp = 0.0;
  /// Least-squares intercept.
  double c0 = 0.0;
  /// max sup_quarter / sup_r over samples with sup_r > 0.
  double max_ratio = 0.0;
  std::size_t samples = 0;
  /// All samples satisfy sup_quarter >= sup_r.
  bool nested_monotone = true;
};

DoublingFit fit_doubling(const std::vector<DoublingSample>& samples);

struct HessianProbe {
  double hessian_norm_at_center = 0.0;
  double lipschitz_norm = 0.0;
  double sup_abs = 0.0;
  double lipschitz = 0.0;
  double theta = 0.0;
};

/// |D^2 u(0)| (Frobenius), C^{0,1} norm over B_1(0) and the phase at 0.
HessianProbe hessian_probe(const GridFunction& u, std::size_t subsample = 20000);

/// u_R(x) = u(R x) / R^2 on the grid scaled by 1/R (same node values / R^2).
/// Hessians, and therefore phases, are unchanged node for node.
GridFunction rescale(const GridFunction& u, double r);

struct EstimateRecord {
  std::string instance;
  std::string quantity;
  double value = 0.0;
  std::optional<double> r;
  std::vector<double> y;
  int grid_points = 0;
};

}  // namespace slelab
