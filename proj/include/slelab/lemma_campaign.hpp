#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "slelab/spectral.hpp"

namespace slelab {

/// Running record for one clause across a sampling campaign.
struct ClauseTally {
  std::size_t evaluated = 0;
  std::size_t violations = 0;
  std::size_t skipped = 0;
  /// Smallest margin divided by its tolerance; negative below -1 is a violation.
  double worst_relative_margin = 0.0;
  std::vector<double> worst_witness;
  bool has_worst = false;
};

struct CampaignConfig {
  ConstraintSpec spec = ConstraintSpec::gamma_cone(3);
  std::size_t samples = 100'000;
  std::uint64_t seed = 1;
  std::vector<double> scales = {1.0, 10.0, 100.0};
  unsigned jobs = 1;
  std::size_t block_size = 10'000;
};

struct CampaignResult {
  std::string constraint;
  std::size_t samples = 0;
  std::size_t attempts = 0;
  std::uint64_t seed = 0;
  std::size_t lambda2_negative = 0;
  /// Keyed "check/clause".
  std::map<std::string, ClauseTally> tallies;

  std::size_t violations() const;
  bool passed() const { return violations() == 0; }
};

/// Draws `samples` admissible spectra and runs every eigenvalue checker that
/// applies to the constraint family:
///  - cone: general-n facts; 2-convexity for n >= 4; dual-cone membership of
///    the (1,1,0), (1,1,1), (1+t,1-t,1) vectors for n = 3.
///  - sigma2: n = 3 facts; the ratio bound and the nonnegativity of the
///    max(1, eps) shift when lambda_2 < 0; dual membership when lambda_2 >= 0.
/// Deterministic for a given config regardless of `jobs`.
CampaignResult run_lemma_campaign(const CampaignConfig& config);

/// Dual test vectors checked for membership in the dual of the n = 3 cone.
std::vector<Spectrum> dual_family_vectors();

}  // namespace slelab
