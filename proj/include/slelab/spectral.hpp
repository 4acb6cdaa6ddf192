#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace slelab {

/// Fixed-capacity dense types for the n <= 4 hot paths (no heap traffic).
using SmallMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4>;
using SmallVector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 4, 1>;

/// Eigenvalues of a symmetric matrix, sorted descending: values()[0] is the
/// largest. Construction canonicalizes any ordering of the input.
class Spectrum {
 public:
  explicit Spectrum(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }

  double max_abs() const;
  /// (1 + max |lambda_i|), the scale used by every tolerance in this library.
  double scale() const { return 1.0 + max_abs(); }

  /// Spectrum with every entry shifted by `delta`.
  Spectrum shifted(double delta) const;

 private:
  std::vector<double> values_;
};

/// {sigma_{n-1} > c lambda_2 ... lambda_n, lambda_{n-1} > 0}, or its closure.
struct ConeSpec {
  int n = 3;
  double c = 0.5;
  bool closed = true;

  /// The cone with c = (n - 2)/2 used by the n >= 3 estimate.
  static ConeSpec standard(int n, bool closed = true) {
    return ConeSpec{n, 0.5 * (n - 2), closed};
  }
};

/// Hypothesis family: closed cone with c = (n-2)/2, or (n = 3)
/// sigma_2 >= (3/5 - eps) lambda_2 lambda_3.
class ConstraintSpec {
 public:
  struct GammaCone {
    int n;
  };
  struct Sigma2Lower {
    double eps;
  };

  static ConstraintSpec gamma_cone(int n);
  static ConstraintSpec sigma2_lower(double eps);

  int dimension() const;
  bool is_gamma_cone() const { return std::holds_alternative<GammaCone>(kind_); }
  bool is_sigma2() const { return std::holds_alternative<Sigma2Lower>(kind_); }
  /// eps of the sigma_2 family; throws for the cone family.
  double eps() const;
  ConeSpec cone() const;
  std::string name() const;

 private:
  explicit ConstraintSpec(std::variant<GammaCone, Sigma2Lower> kind) : kind_(kind) {}
  std::variant<GammaCone, Sigma2Lower> kind_;
};

enum class ClauseStatus { kPass, kFail, kSkippedDegenerate };

struct Clause {
  std::string id;
  /// Signed slack; positive means satisfied. Empty when skipped.
  std::optional<double> margin;
  ClauseStatus status = ClauseStatus::kPass;

  bool passed() const { return status != ClauseStatus::kFail; }
};

struct LemmaReport {
  std::string lemma;
  bool hypothesis_met = false;
  std::vector<Clause> clauses;
  std::vector<double> witness;
  double tol = 0.0;

  /// True iff the hypothesis is unmet or every clause passed.
  bool passed() const;
  /// Smallest margin over evaluated clauses (+inf if none).
  double worst_margin() const;
  const Clause* find(const std::string& id) const;
};

/// Default inequality tolerance: 1e-10 (1 + max|lambda|)^2.
double lemma_tolerance(const Spectrum& s);

/// Rejected input: asymmetric or non-finite matrix, bad index, etc.
class SpectralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

Spectrum eigen_desc(const Eigen::MatrixXd& m);
Spectrum eigen_desc(const SmallMatrix& m);

/// Elementary symmetric polynomial over an arbitrary list (helper for the
/// delete-one partials; does not require sorting).
double elementary_symmetric(std::span<const double> values, int k);

double sigma_k(const Spectrum& s, int k);
/// d sigma_k / d lambda_i = sigma_{k-1} of the list with entry i removed.
double sigma_k_partial(const Spectrum& s, int k, std::size_t i);
double phase(const Spectrum& s);

bool in_gamma_cone(const Spectrum& s, const ConeSpec& cone);
bool satisfies_constraint(const Spectrum& s, const ConstraintSpec& spec);

/// General-n eigenvalue facts for the standard cone with nonnegative phase.
LemmaReport check_lemma_general(const Spectrum& s, const ConeSpec& cone);
/// n = 3 facts under sigma_2 >= (3/5 - eps) lambda_2 lambda_3.
LemmaReport check_lemma_n3(const Spectrum& s, double eps);
/// |lambda_2| >= |lambda_3| / (2/5 + eps) when lambda_2 < 0.
LemmaReport check_ratio_bound(const Spectrum& s, double eps);
double ratio_bound_factor(double eps);

bool two_convexity(const Spectrum& s);

/// min over permutations of sum a[i] m[pi(i)], i.e. the anti-sorted pairing.
double dual_pairing_min(const Spectrum& a, const Spectrum& m);

/// I_3 + t (e_i e_j^T + e_j e_i^T); 0-based i != j, 0 < t <= 1/2.
Eigen::Matrix3d dual_test_matrix(double t, int i, int j);

/// The diagonal "A_i" of the dual family: all ones except a zero at i.
Eigen::Matrix3d dual_diagonal_matrix(int i);

}  // namespace slelab
