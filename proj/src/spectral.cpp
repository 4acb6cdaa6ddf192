#include "slelab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

namespace slelab {

namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr double kDegenerateLambda2 = 1e-8;

template <typename Matrix>
Spectrum eigen_desc_impl(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw SpectralError("eigen_desc: matrix must be square and non-empty");
  }
  if (!m.allFinite()) {
    throw SpectralError("eigen_desc: matrix has NaN or Inf entries");
  }
  const double norm = m.cwiseAbs().maxCoeff();
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTol * std::max(1.0, norm)) {
    std::ostringstream msg;
    msg << "eigen_desc: matrix not symmetric (max |M - M^T| = " << asym << ")";
    throw SpectralError(msg.str());
  }
  const Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw SpectralError("eigen_desc: eigen-decomposition failed to converge");
  }
  const auto& ev = solver.eigenvalues();
  return Spectrum(std::vector<double>(ev.data(), ev.data() + ev.size()));
}

void add_clause(LemmaReport& report, std::string id, double margin, bool strict = false) {
  Clause c{std::move(id), margin, ClauseStatus::kPass};
  const bool ok = strict ? margin > 0.0 : margin >= -report.tol;
  c.status = ok ? ClauseStatus::kPass : ClauseStatus::kFail;
  report.clauses.push_back(std::move(c));
}

void add_skipped(LemmaReport& report, std::string id) {
  report.clauses.push_back(Clause{std::move(id), std::nullopt, ClauseStatus::kSkippedDegenerate});
}

LemmaReport make_report(std::string lemma, const Spectrum& s) {
  LemmaReport r;
  r.lemma = std::move(lemma);
  r.witness.assign(s.values().begin(), s.values().end());
  r.tol = lemma_tolerance(s);
  return r;
}

void require_n3(const Spectrum& s, const char* who) {
  if (s.size() != 3) {
    throw SpectralError(std::string(who) + ": requires n = 3");
  }
}

}  // namespace

Spectrum::Spectrum(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) {
    throw SpectralError("Spectrum: needs at least one value");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw SpectralError("Spectrum: non-finite eigenvalue");
    }
  }
  std::sort(values_.begin(), values_.end(), std::greater<>());
}

double Spectrum::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

Spectrum Spectrum::shifted(double delta) const {
  std::vector<double> v = values_;
  for (double& x : v) x += delta;
  return Spectrum(std::move(v));
}

ConstraintSpec ConstraintSpec::gamma_cone(int n) {
  if (n < 2) throw SpectralError("ConstraintSpec: cone dimension must be >= 2");
  return ConstraintSpec(GammaCone{n});
}

ConstraintSpec ConstraintSpec::sigma2_lower(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw SpectralError("ConstraintSpec: sigma2 family needs eps > 0");
  }
  return ConstraintSpec(Sigma2Lower{eps});
}

int ConstraintSpec::dimension() const {
  if (const auto* c = std::get_if<GammaCone>(&kind_)) return c->n;
  return 3;
}

double ConstraintSpec::eps() const {
  if (const auto* s = std::get_if<Sigma2Lower>(&kind_)) return s->eps;
  throw SpectralError("ConstraintSpec: eps requested from the cone family");
}

ConeSpec ConstraintSpec::cone() const { return ConeSpec::standard(dimension(), true); }

std::string ConstraintSpec::name() const {
  std::ostringstream out;
  if (const auto* c = std::get_if<GammaCone>(&kind_)) {
    out << "gamma_cone(n=" << c->n << ")";
  } else {
    out << "sigma2_lower(eps=" << std::get<Sigma2Lower>(kind_).eps << ")";
  }
  return out.str();
}

bool LemmaReport::passed() const {
  if (!hypothesis_met) return true;
  return std::all_of(clauses.begin(), clauses.end(), [](const Clause& c) { return c.passed(); });
}

double LemmaReport::worst_margin() const {
  double w = std::numeric_limits<double>::infinity();
  for (const auto& c : clauses) {
    if (c.margin) w = std::min(w, *c.margin);
  }
  return w;
}

const Clause* LemmaReport::find(const std::string& id) const {
  for (const auto& c : clauses) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

double lemma_tolerance(const Spectrum& s) {
  const double sc = s.scale();
  return 1e-10 * sc * sc;
}

Spectrum eigen_desc(const Eigen::MatrixXd& m) { return eigen_desc_impl(m); }
Spectrum eigen_desc(const SmallMatrix& m) { return eigen_desc_impl(m); }

double elementary_symmetric(std::span<const double> values, int k) {
  if (k < 0 || k > static_cast<int>(values.size())) {
    throw SpectralError("sigma_k: k out of range");
  }
  // e[j] accumulates sigma_j of the prefix processed so far.
  std::vector<double> e(static_cast<std::size_t>(k) + 1, 0.0);
  e[0] = 1.0;
  for (double v : values) {
    for (int j = k; j >= 1; --j) e[j] += v * e[j - 1];
  }
  return e[k];
}

double sigma_k(const Spectrum& s, int k) { return elementary_symmetric(s.values(), k); }

double sigma_k_partial(const Spectrum& s, int k, std::size_t i) {
  if (k < 1 || k > static_cast<int>(s.size())) {
    throw SpectralError("sigma_k_partial: k out of range");
  }
  if (i >= s.size()) throw SpectralError("sigma_k_partial: index out of range");
  std::vector<double> rest;
  rest.reserve(s.size() - 1);
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (j != i) rest.push_back(s[j]);
  }
  return elementary_symmetric(rest, k - 1);
}

double phase(const Spectrum& s) {
  double sum = 0.0;
  for (double v : s.values()) sum += std::atan(v);
  return sum;
}

bool in_gamma_cone(const Spectrum& s, const ConeSpec& cone) {
  const std::size_t n = s.size();
  if (static_cast<int>(n) != cone.n) {
    throw SpectralError("in_gamma_cone: spectrum length differs from cone dimension");
  }
  if (n < 2) throw SpectralError("in_gamma_cone: needs n >= 2");
  const double lhs = sigma_k(s, static_cast<int>(n) - 1);
  double tail = 1.0;
  for (std::size_t i = 1; i < n; ++i) tail *= s[i];
  const double rhs = cone.c * tail;
  const double lam_nm1 = s[n - 2];
  if (cone.closed) return lhs >= rhs && lam_nm1 >= 0.0;
  return lhs > rhs && lam_nm1 > 0.0;
}

bool satisfies_constraint(const Spectrum& s, const ConstraintSpec& spec) {
  if (static_cast<int>(s.size()) != spec.dimension()) {
    throw SpectralError("satisfies_constraint: dimension mismatch with " + spec.name());
  }
  const double sc = s.scale();
  if (spec.is_gamma_cone()) {
    const int n = spec.dimension();
    const double lhs = sigma_k(s, n - 1);
    double tail = 1.0;
    for (int i = 1; i < n; ++i) tail *= s[i];
    const double tol = 1e-12 * std::pow(sc, n - 1);
    return lhs >= 0.5 * (n - 2) * tail - tol && s[n - 2] >= -1e-12 * sc;
  }
  const double lhs = sigma_k(s, 2);
  const double rhs = (0.6 - spec.eps()) * s[1] * s[2];
  return lhs >= rhs - 1e-12 * sc * sc;
}

LemmaReport check_lemma_general(const Spectrum& s, const ConeSpec& cone) {
  const int n = static_cast<int>(s.size());
  if (n < 3) throw SpectralError("check_lemma_general: lemma checkers reject n < 3");
  if (cone.n != n) throw SpectralError("check_lemma_general: cone dimension mismatch");

  LemmaReport r = make_report("eigen_general", s);
  r.hypothesis_met = in_gamma_cone(s, cone) && phase(s) >= 0.0;
  const bool strict = !cone.closed;
  const double lam_n = s[n - 1];

  // (a)
  add_clause(r, "a:lambda1", s[0] + (cone.c + 1.0) * lam_n, strict);
  for (int i = 0; i < n - 1; ++i) {
    add_clause(r, "a:lambda" + std::to_string(i + 1) + "+lambdan", s[i] + lam_n, strict);
  }
  // (b)
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double m = s[0] * (s[i] + s[j]) - 2.0 * s[i] * s[j];
      add_clause(r, "b:" + std::to_string(i + 1) + "," + std::to_string(j + 1), m);
    }
  }
  // (c)
  const double bound = static_cast<double>(n) * (n - 1);
  for (int k = 1; k <= n - 1; ++k) {
    const double lower = bound * sigma_k(s, k - 1);
    for (int i = 0; i < n; ++i) {
      const double m = lower - std::abs(sigma_k_partial(s, k, static_cast<std::size_t>(i)));
      add_clause(r, "c:k" + std::to_string(k) + ",i" + std::to_string(i + 1), m, strict);
    }
  }
  return r;
}

LemmaReport check_lemma_n3(const Spectrum& s, double eps) {
  require_n3(s, "check_lemma_n3");
  const ConstraintSpec spec = ConstraintSpec::sigma2_lower(eps);
  LemmaReport r = make_report("eigen_n3", s);
  r.hypothesis_met = satisfies_constraint(s, spec) && phase(s) >= 0.0;
  const double l1 = s[0], l2 = s[1], l3 = s[2];
  const double s1 = l1 + l2 + l3;

  if (l2 >= 0.0) {
    // Recorded exactly as stated; it is undefined at lambda_2 = 0.
    if (l2 > kDegenerateLambda2) {
      add_clause(r, "pos:a1", l1 - (-7.0 / 5.0 - eps - l1 / l2) * l3);
    } else {
      add_skipped(r, "pos:a1");
    }
    add_clause(r, "pos:a2", l2 + l3);
    add_clause(r, "pos:b", l1 * (l2 + l3) - 2.0 * l2 * l3);
    add_clause(r, "pos:c", s1 - l1);
  } else {
    add_clause(r, "neg:a:lambda1>0", l1);
    add_clause(r, "neg:a:lambda1<max(1,eps)", std::max(1.0, eps) - l1);
    add_clause(r, "neg:b", s1);
    add_clause(r, "neg:c2", l1 - std::abs(l2));
    add_clause(r, "neg:c3", l1 - std::abs(l3));
  }
  return r;
}

double ratio_bound_factor(double eps) {
  if (!(eps > 0.0)) throw SpectralError("ratio_bound_factor: eps must be positive");
  return 1.0 / (2.0 / 5.0 + eps);
}

LemmaReport check_ratio_bound(const Spectrum& s, double eps) {
  require_n3(s, "check_ratio_bound");
  const ConstraintSpec spec = ConstraintSpec::sigma2_lower(eps);
  LemmaReport r = make_report("ratio_bound", s);
  r.hypothesis_met = satisfies_constraint(s, spec) && phase(s) >= 0.0 && s[1] < 0.0;
  add_clause(r, "ratio", std::abs(s[1]) - std::abs(s[2]) * ratio_bound_factor(eps));
  return r;
}

bool two_convexity(const Spectrum& s) {
  return sigma_k(s, 1) >= 0.0 && (s.size() < 2 || sigma_k(s, 2) >= 0.0);
}

double dual_pairing_min(const Spectrum& a, const Spectrum& m) {
  if (a.size() != m.size()) throw SpectralError("dual_pairing_min: length mismatch");
  const std::size_t n = a.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += a[i] * m[n - 1 - i];
  return sum;
}

Eigen::Matrix3d dual_test_matrix(double t, int i, int j) {
  if (!(t > 0.0 && t <= 0.5)) throw SpectralError("dual_test_matrix: t must lie in (0, 1/2]");
  if (i < 0 || i > 2 || j < 0 || j > 2 || i == j) {
    throw SpectralError("dual_test_matrix: need distinct indices in {0, 1, 2}");
  }
  Eigen::Matrix3d a = Eigen::Matrix3d::Identity();
  a(i, j) += t;
  a(j, i) += t;
  return a;
}

Eigen::Matrix3d dual_diagonal_matrix(int i) {
  if (i < 0 || i > 2) throw SpectralError("dual_diagonal_matrix: index out of range");
  Eigen::Matrix3d a = Eigen::Matrix3d::Identity();
  a(i, i) = 0.0;
  return a;
}

}  // namespace slelab
