#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "slelab/lemma_campaign.hpp"
#include "slelab/sampling.hpp"
#include "slelab/spectral.hpp"

using namespace slelab;

namespace {

Spectrum S(std::vector<double> v) { return Spectrum(std::move(v)); }

Eigen::MatrixXd to_eigen(const oracle::Mat& a) {
  Eigen::MatrixXd m(a.size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) m(i, j) = a[i][j];
  }
  return m;
}

oracle::Vec values(const Spectrum& s) { return {s.values().begin(), s.values().end()}; }

}  // namespace

TEST(Spectrum, SortsDescending) {
  const Spectrum s = S({-1.0, 3.0, 2.0});
  EXPECT_EQ(values(s), (oracle::Vec{3.0, 2.0, -1.0}));
  EXPECT_DOUBLE_EQ(s.scale(), 4.0);
  EXPECT_EQ(values(s.shifted(1.0)), (oracle::Vec{4.0, 3.0, 0.0}));
}

TEST(EigenDesc, IdentityAndDiagonal) {
  EXPECT_EQ(values(eigen_desc(Eigen::MatrixXd(Eigen::MatrixXd::Identity(3, 3)))), (oracle::Vec{1, 1, 1}));
  Eigen::MatrixXd d = Eigen::Vector3d(3, -1, 2).asDiagonal();
  const Spectrum s = eigen_desc(d);
  EXPECT_NEAR(s[0], 3.0, 1e-14);
  EXPECT_NEAR(s[1], 2.0, 1e-14);
  EXPECT_NEAR(s[2], -1.0, 1e-14);
}

TEST(EigenDesc, MatchesJacobiRotationOracle) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 3;
    const oracle::Mat a = oracle::random_symmetric(rng, n, 5.0);
    const Spectrum s = eigen_desc(to_eigen(a));
    const oracle::Vec ref = oracle::eigenvalues_desc(a);
    for (int i = 0; i < n; ++i) EXPECT_NEAR(s[i], ref[i], 1e-9 * (1 + std::abs(ref[i])));
  }
}

TEST(EigenDesc, RejectsAsymmetricAndNonFinite) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(3, 3);
  m(0, 1) = 1e-3;
  EXPECT_THROW(eigen_desc(m), SpectralError);
  m(0, 1) = 0.0;
  m(2, 2) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(eigen_desc(m), SpectralError);
}

TEST(SigmaK, Examples) {
  EXPECT_DOUBLE_EQ(sigma_k(S({1, 1, 1}), 2), 3.0);
  EXPECT_DOUBLE_EQ(sigma_k(S({1, 2, 3}), 3), 6.0);
  EXPECT_DOUBLE_EQ(sigma_k(S({3, 2, 1}), 2), oracle::sigma_k_subsets({3, 2, 1}, 2));
  EXPECT_DOUBLE_EQ(sigma_k(S({3, 2, 1}), 2), 11.0);
  EXPECT_DOUBLE_EQ(sigma_k(S({4, 5}), 0), 1.0);
  EXPECT_THROW(sigma_k(S({1, 2}), 3), SpectralError);
  EXPECT_THROW(sigma_k(S({1, 2}), -1), SpectralError);
}

TEST(SigmaK, PartialExamples) {
  // Spectrum index 0 is the largest entry.
  EXPECT_DOUBLE_EQ(sigma_k_partial(S({1, 1, 1}), 2, 0), 2.0);
  EXPECT_DOUBLE_EQ(sigma_k_partial(S({3, 2, 1}), 3, 1), 3.0);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(sigma_k_partial(S({7, -2, 0.5}), 1, i), 1.0);
  EXPECT_THROW(sigma_k_partial(S({1, 2}), 0, 0), SpectralError);
  EXPECT_THROW(sigma_k_partial(S({1, 2}), 1, 2), SpectralError);
}

TEST(SigmaK, AgreesWithSubsetOracle) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = 1 + trial % 8;
    oracle::Vec v(n);
    for (double& x : v) x = u(rng);
    const Spectrum s(v);
    const oracle::Vec sorted = values(s);
    for (int k = 0; k <= n; ++k) {
      const double ref = oracle::sigma_k_subsets(v, k);
      const double mag = oracle::sigma_k_subsets([&] {
        oracle::Vec a = v;
        for (double& x : a) x = std::abs(x);
        return a;
      }(), k);
      EXPECT_NEAR(sigma_k(s, k), ref, 1e-12 * (1 + mag));
      for (int i = 0; k >= 1 && i < n; ++i) {
        EXPECT_NEAR(sigma_k_partial(s, k, i), oracle::sigma_k_partial_delete_one(sorted, k, i),
                    1e-12 * (1 + mag));
      }
    }
  }
}

TEST(Phase, Examples) {
  EXPECT_NEAR(phase(S({1, 1, 1})), 3 * std::numbers::pi / 4, 1e-15);
  EXPECT_EQ(phase(S({0, 0, 0})), 0.0);
  EXPECT_NEAR(phase(S({std::tan(0.3), std::tan(0.5), std::tan(0.7)})), 1.5, 1e-12);
}

TEST(Cone, MembershipExamples) {
  const ConeSpec open{3, 0.5, false};
  const ConeSpec closed{3, 0.5, true};
  EXPECT_TRUE(in_gamma_cone(S({1, 1, 1}), open));
  EXPECT_FALSE(in_gamma_cone(S({1, 1, -5}), open));
  // sigma_2(1,1,0) = 1 > 0 = c lambda_2 lambda_3, lambda_2 = 1 > 0.
  EXPECT_TRUE(in_gamma_cone(S({1, 1, 0}), open));
  EXPECT_TRUE(in_gamma_cone(S({1, 1, 0}), closed));
  // Boundary point: lambda_{n-1} = 0 is only in the closure.
  EXPECT_FALSE(in_gamma_cone(S({1, 0, 0}), open));
  EXPECT_TRUE(in_gamma_cone(S({1, 0, 0}), closed));
  EXPECT_THROW(in_gamma_cone(S({1, 1}), open), SpectralError);
}

TEST(Constraint, Examples) {
  EXPECT_TRUE(satisfies_constraint(S({1, 1, 1}), ConstraintSpec::sigma2_lower(0.1)));
  EXPECT_FALSE(satisfies_constraint(S({1, -0.2, -0.3}), ConstraintSpec::sigma2_lower(1.0)));
  EXPECT_TRUE(satisfies_constraint(S({2, 1, 1}), ConstraintSpec::gamma_cone(3)));
  EXPECT_THROW(satisfies_constraint(S({1, 1}), ConstraintSpec::gamma_cone(3)), SpectralError);
}

TEST(Spectrum, PermutationInvariance) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 500; ++trial) {
    oracle::Vec v(3);
    for (double& x : v) x = u(rng);
    oracle::Vec w = v;
    std::shuffle(w.begin(), w.end(), rng);
    const Spectrum a(v), b(w);
    for (int k = 0; k <= 3; ++k) EXPECT_EQ(sigma_k(a, k), sigma_k(b, k));
    EXPECT_EQ(phase(a), phase(b));
    EXPECT_EQ(in_gamma_cone(a, ConeSpec::standard(3)), in_gamma_cone(b, ConeSpec::standard(3)));
    EXPECT_EQ(satisfies_constraint(a, ConstraintSpec::sigma2_lower(0.6)),
              satisfies_constraint(b, ConstraintSpec::sigma2_lower(0.6)));
  }
}

TEST(LemmaGeneral, Examples) {
  const LemmaReport r = check_lemma_general(S({2, 1, 1}), ConeSpec::standard(3));
  EXPECT_TRUE(r.hypothesis_met);
  EXPECT_TRUE(r.passed());
  for (const Clause& c : r.clauses) EXPECT_EQ(c.status, ClauseStatus::kPass) << c.id;

  const LemmaReport eq = check_lemma_general(S({1, 1, 1}), ConeSpec::standard(3));
  const Clause* b23 = eq.find("b:2,3");
  ASSERT_NE(b23, nullptr);
  EXPECT_EQ(*b23->margin, 0.0);
  EXPECT_TRUE(b23->passed());

  EXPECT_THROW(check_lemma_general(S({1, 1}), ConeSpec::standard(2)), SpectralError);
}

TEST(LemmaGeneral, OutsideHypothesisIsFlaggedNotFailed) {
  const LemmaReport r = check_lemma_general(S({1, 1, -5}), ConeSpec::standard(3));
  EXPECT_FALSE(r.hypothesis_met);
  EXPECT_TRUE(r.passed());
}

TEST(LemmaGeneral, MarginsMatchDirectEvaluation) {
  for (int n : {3, 4, 5}) {
    AdmissibleSampler sampler(ConstraintSpec::gamma_cone(n), 100 + n);
    for (int i = 0; i < 2000; ++i) {
      const Spectrum s = sampler.next();
      const LemmaReport r = check_lemma_general(s, ConeSpec::standard(n));
      EXPECT_TRUE(r.hypothesis_met);
      EXPECT_NEAR(r.worst_margin(), oracle::general_lemma_min_margin(values(s)),
                  1e-12 * s.scale() * s.scale());
      EXPECT_GE(r.worst_margin(), -lemma_tolerance(s)) << "n=" << n;
      if (n >= 4) EXPECT_TRUE(two_convexity(s));
    }
  }
}

TEST(LemmaN3, Examples) {
  const LemmaReport r = check_lemma_n3(S({1, 1, 1}), 1.0);
  EXPECT_TRUE(r.hypothesis_met);
  EXPECT_TRUE(r.passed());
  EXPECT_NE(r.find("pos:a1"), nullptr);

  // sigma_2 = -0.17 < (3/5 - 1)(-0.1)(-0.3): outside the hypothesis.
  const LemmaReport flagged = check_lemma_n3(S({0.5, -0.1, -0.3}), 1.0);
  EXPECT_FALSE(flagged.hypothesis_met);
  EXPECT_TRUE(flagged.passed());

  // The lambda_2 < 0 branch is only populated for eps above 3.6.
  AdmissibleSampler sampler(ConstraintSpec::sigma2_lower(8.0), 3, {1.0});
  Spectrum neg = sampler.next();
  for (int i = 0; i < 100000 && neg[1] >= 0.0; ++i) neg = sampler.next();
  ASSERT_LT(neg[1], 0.0);
  const LemmaReport rn = check_lemma_n3(neg, 8.0);
  ASSERT_TRUE(rn.hypothesis_met);
  const Clause* upper = rn.find("neg:a:lambda1<max(1,eps)");
  ASSERT_NE(upper, nullptr);
  EXPECT_DOUBLE_EQ(*upper->margin, 8.0 - neg[0]);
  EXPECT_GT(*upper->margin, 0.0);
  EXPECT_TRUE(rn.passed());
}

TEST(LemmaN3, DegenerateLambda2IsSkipped) {
  const LemmaReport r = check_lemma_n3(S({1, 0, 0}), 1.0);
  const Clause* a1 = r.find("pos:a1");
  ASSERT_NE(a1, nullptr);
  EXPECT_EQ(a1->status, ClauseStatus::kSkippedDegenerate);
  EXPECT_FALSE(a1->margin.has_value());
}

// The first positive-branch clause, taken verbatim with -7/5, fails on
// admissible spectra. Both witnesses satisfy the hypothesis.
TEST(LemmaN3, VerbatimFirstClauseHasCounterexamples) {
  struct Case {
    std::vector<double> s;
    double eps;
  };
  for (const Case& c : {Case{{1, 1, -0.5}, 0.1}, Case{{2, 1, -0.5}, 1.0}}) {
    const Spectrum s(c.s);
    const LemmaReport r = check_lemma_n3(s, c.eps);
    ASSERT_TRUE(r.hypothesis_met);
    const Clause* a1 = r.find("pos:a1");
    ASSERT_NE(a1, nullptr);
    EXPECT_EQ(a1->status, ClauseStatus::kFail);
    const double direct = s[0] - (-7.0 / 5.0 - c.eps - s[0] / s[1]) * s[2];
    EXPECT_DOUBLE_EQ(*a1->margin, direct);
    EXPECT_LT(direct, -0.2);
  }
}

// With -2/5 in place of -7/5 the same inequality holds on every sample.
TEST(LemmaN3, CorrectedFirstClauseHoldsOnSamples) {
  for (double eps : {0.1, 0.6, 1.0, 2.0}) {
    AdmissibleSampler sampler(ConstraintSpec::sigma2_lower(eps), 7);
    int positive_branch = 0;
    for (int i = 0; i < 20000; ++i) {
      const Spectrum s = sampler.next();
      if (s[1] <= 1e-8) continue;
      ++positive_branch;
      const double m = s[0] - (-2.0 / 5.0 - eps - s[0] / s[1]) * s[2];
      EXPECT_GE(m, -lemma_tolerance(s)) << s[0] << "," << s[1] << "," << s[2] << " eps=" << eps;
    }
    EXPECT_GT(positive_branch, 1000);
  }
}

TEST(LemmaN3, OtherClausesHoldOnSamples) {
  for (double eps : {0.1, 0.6, 1.0, 2.0}) {
    AdmissibleSampler sampler(ConstraintSpec::sigma2_lower(eps), 8);
    for (int i = 0; i < 20000; ++i) {
      const Spectrum s = sampler.next();
      const LemmaReport r = check_lemma_n3(s, eps);
      ASSERT_TRUE(r.hypothesis_met);
      for (const Clause& c : r.clauses) {
        if (c.id == "pos:a1") continue;
        EXPECT_TRUE(c.passed()) << c.id << " eps=" << eps;
      }
      if (s[1] < 0) EXPECT_TRUE(check_ratio_bound(s, eps).passed());
    }
  }
}

TEST(RatioBound, FactorAndBoundaryWitness) {
  EXPECT_DOUBLE_EQ(ratio_bound_factor(0.1), 2.0);
  EXPECT_DOUBLE_EQ(ratio_bound_factor(0.6), 1.0);
  EXPECT_THROW(ratio_bound_factor(0.0), SpectralError);
  // Factor 1: lambda_2 = lambda_3 < 0 sits exactly on the bound.
  const LemmaReport at = check_ratio_bound(S({3, -0.2, -0.2}), 0.6);
  EXPECT_EQ(*at.clauses.front().margin, 0.0);
  EXPECT_TRUE(at.passed());
  // Factor 2: the margin is |lambda_2| - 2 |lambda_3|.
  const LemmaReport below = check_ratio_bound(S({3, -0.1, -0.1}), 0.1);
  EXPECT_DOUBLE_EQ(*below.clauses.front().margin, -0.1);
}

// At eps = 0.1 the bound |lambda_2| >= 2 |lambda_3| is incompatible with
// lambda_2 >= lambda_3 < 0, so no admissible spectrum has lambda_2 < 0.
TEST(RatioBound, SmallEpsHasNoNegativeBranch) {
  AdmissibleSampler sampler(ConstraintSpec::sigma2_lower(0.1), 41);
  for (int i = 0; i < 20000; ++i) EXPECT_GE(sampler.next()[1], 0.0);
}

// Phase >= 0 with lambda_2 < 0 needs lambda_1 >= (a + b)/(1 - ab), a = |lambda_2|,
// b = |lambda_3|; the constraint caps lambda_1 at (2/5 + eps) ab/(a + b). Both
// hold only if (2/5 + eps)(1 - ab) >= 4, so eps <= 3.6 leaves the branch empty.
TEST(RatioBound, NegativeBranchNeedsLargeEps) {
  for (double eps : {0.6, 1.0, 2.0, 3.5}) {
    AdmissibleSampler sampler(ConstraintSpec::sigma2_lower(eps), 43, {1.0});
    for (int i = 0; i < 20000; ++i) EXPECT_GE(sampler.next()[1], 0.0) << eps;
  }
  AdmissibleSampler wide(ConstraintSpec::sigma2_lower(8.0), 43, {1.0});
  int negative = 0;
  for (int i = 0; i < 20000; ++i) {
    const Spectrum s = wide.next();
    if (s[1] < 0.0) {
      ++negative;
      EXPECT_TRUE(check_ratio_bound(s, 8.0).passed());
      EXPECT_TRUE(check_lemma_n3(s, 8.0).passed());
    }
  }
  EXPECT_GT(negative, 0);
}

TEST(TwoConvexity, Examples) {
  EXPECT_TRUE(two_convexity(S({1, 1, 1})));
  EXPECT_FALSE(two_convexity(S({1, 1, -5})));
}

TEST(DualPairing, Examples) {
  EXPECT_DOUBLE_EQ(dual_pairing_min(S({1, 1, 1}), S({4, -2, 0.5})), 2.5);
  EXPECT_DOUBLE_EQ(dual_pairing_min(S({1, 1, 0}), S({5, 2, -1})), 1.0);
  EXPECT_DOUBLE_EQ(dual_pairing_min(S({1.5, 1, 0.5}), S({2, 1, -1})), 0.5);
  EXPECT_THROW(dual_pairing_min(S({1, 1}), S({1, 1, 1})), SpectralError);
}

TEST(DualPairing, AgreesWithPermutationOracle) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int trial = 0; trial < 3000; ++trial) {
    const int n = 1 + trial % 6;
    oracle::Vec a(n), m(n);
    for (double& x : a) x = u(rng);
    for (double& x : m) x = u(rng);
    const double ref = oracle::pairing_min_permutations(a, m);
    EXPECT_NEAR(dual_pairing_min(Spectrum(a), Spectrum(m)), ref, 1e-12 * (1 + std::abs(ref)));
  }
}

TEST(DualTestMatrix, ConstructionAndSpectrum) {
  const Eigen::Matrix3d a = dual_test_matrix(0.5, 0, 1);
  Eigen::Matrix3d expect;
  expect << 1, 0.5, 0, 0.5, 1, 0, 0, 0, 1;
  EXPECT_EQ(a, expect);
  for (double t : {1e-6, 0.25, 0.5}) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        if (i == j) continue;
        const Eigen::Matrix3d m = dual_test_matrix(t, i, j);
        EXPECT_TRUE(m.isApprox(m.transpose(), 0.0));
        EXPECT_DOUBLE_EQ(m.trace(), 3.0);
        const Spectrum s = eigen_desc(Eigen::MatrixXd(m));
        EXPECT_NEAR(s[0], 1 + t, 1e-12);
        EXPECT_NEAR(s[1], 1.0, 1e-12);
        EXPECT_NEAR(s[2], 1 - t, 1e-12);
      }
    }
  }
  EXPECT_THROW(dual_test_matrix(0.0, 0, 1), SpectralError);
  EXPECT_THROW(dual_test_matrix(0.6, 0, 1), SpectralError);
  EXPECT_THROW(dual_test_matrix(0.5, 1, 1), SpectralError);
  EXPECT_EQ(dual_diagonal_matrix(2), Eigen::Matrix3d(Eigen::Vector3d(1, 1, 0).asDiagonal()));
}

TEST(DualPairing, MembershipOfTestVectorsInConeDual) {
  AdmissibleSampler sampler(ConstraintSpec::gamma_cone(3), 29);
  const auto duals = dual_family_vectors();
  for (int i = 0; i < 10000; ++i) {
    const Spectrum s = sampler.next();
    for (const Spectrum& a : duals) EXPECT_GE(dual_pairing_min(a, s), -1e-10 * s.scale());
  }
}

// tr(A M) is bounded below by the anti-sorted pairing of the spectra.
TEST(DualPairing, TraceBoundUnderRotations) {
  AdmissibleSampler sampler(ConstraintSpec::gamma_cone(3), 31);
  std::mt19937_64 rng(37);
  for (int i = 0; i < 10000; ++i) {
    const Spectrum s = sampler.next();
    const oracle::Mat q = oracle::random_orthogonal(rng, 3);
    const Eigen::MatrixXd m = to_eigen(oracle::rotate({{s[0], 0, 0}, {0, s[1], 0}, {0, 0, s[2]}}, q));
    const int a = i % 3, b = (a + 1 + (i / 3) % 2) % 3;
    const Eigen::Matrix3d t = dual_test_matrix(0.5, a, b);
    const double tr = (t * m).trace();
    const double lower = dual_pairing_min(eigen_desc(Eigen::MatrixXd(t)), s);
    EXPECT_GE(tr, lower - 1e-10 * s.scale());
    EXPECT_GE(lower, -1e-10 * s.scale());
  }
}

TEST(Campaign, SmallRunIsDeterministicAcrossJobs) {
  CampaignConfig cfg;
  cfg.spec = ConstraintSpec::sigma2_lower(1.0);
  cfg.samples = 4000;
  cfg.block_size = 1000;
  const CampaignResult a = run_lemma_campaign(cfg);
  cfg.jobs = 3;
  const CampaignResult b = run_lemma_campaign(cfg);
  EXPECT_EQ(a.attempts, b.attempts);
  EXPECT_EQ(a.lambda2_negative, b.lambda2_negative);
  ASSERT_EQ(a.tallies.size(), b.tallies.size());
  for (const auto& [k, t] : a.tallies) {
    EXPECT_EQ(t.violations, b.tallies.at(k).violations) << k;
    EXPECT_EQ(t.worst_relative_margin, b.tallies.at(k).worst_relative_margin) << k;
  }
}
