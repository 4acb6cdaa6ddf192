#pragma once

// Reference computations for the tests. None of these call into the library;
// they use brute force or closed forms so that agreement is meaningful.

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;
using Mat = std::vector<Vec>;

/// Sum over all k-subsets of the product of their entries.
double sigma_k_subsets(const Vec& values, int k);

/// sigma_{k-1} of the list with entry i removed, by subset enumeration.
double sigma_k_partial_delete_one(const Vec& values, int k, std::size_t i);

/// min over all permutations p of sum a[i] m[p(i)].
double pairing_min_permutations(const Vec& a, const Vec& m);

/// Eigenvalues by cyclic Jacobi rotations, sorted descending.
Vec eigenvalues_desc(const Mat& a);

double phase(const Vec& eigenvalues);

/// Closed-form integral of ((1 - |x|^2/rho^2)_+)^4 over R^n.
double bump_integral(int n, double rho);

/// Closed-form integral of |x_1| over the unit ball of R^n.
double abs_x1_unit_ball(int n);

/// Analytic test function u(x) = prod_k sin(a_k x_k + b_k) + 1/2 x^T Q x with
/// exact derivatives.
struct SmoothField {
  Vec a, b;
  Mat q;

  double value(const Vec& x) const;
  Vec gradient(const Vec& x) const;
  Mat hessian(const Vec& x) const;
  /// d/dx_k of the (i, j) Hessian entry.
  double third(const Vec& x, int i, int j, int k) const;
};

/// Random symmetric matrix with entries uniform in [-scale, scale].
Mat random_symmetric(std::mt19937_64& rng, int n, double scale);

Mat rotate(const Mat& a, const Mat& q);
/// Orthogonal matrix from Gram-Schmidt on a Gaussian matrix.
Mat random_orthogonal(std::mt19937_64& rng, int n);

/// Direct evaluation of every eigenvalue fact for the standard cone: returns
/// the smallest margin over all clauses.
double general_lemma_min_margin(const Vec& desc);

}  // namespace oracle
