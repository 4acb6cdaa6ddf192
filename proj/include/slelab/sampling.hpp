#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "slelab/spectral.hpp"

namespace slelab {

/// Rejection sampler for spectra satisfying a constraint with nonnegative
/// phase. Entries are drawn uniformly in [-B, B], where B cycles through
/// `scales` draw by draw, so every scale gets an equal share of attempts.
class AdmissibleSampler {
 public:
  AdmissibleSampler(ConstraintSpec spec, std::uint64_t seed,
                    std::vector<double> scales = {1.0, 10.0, 100.0},
                    std::size_t max_attempts = 1'000'000);

  /// Next admissible spectrum. Throws SamplingError after `max_attempts`
  /// consecutive rejections.
  Spectrum next();

  /// Scale used for the most recent accepted sample.
  double last_scale() const { return last_scale_; }
  std::size_t attempts() const { return attempts_; }
  const ConstraintSpec& spec() const { return spec_; }

 private:
  ConstraintSpec spec_;
  std::mt19937_64 rng_;
  std::vector<double> scales_;
  std::size_t max_attempts_;
  std::size_t cursor_ = 0;
  std::size_t attempts_ = 0;
  double last_scale_ = 0.0;
};

class SamplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Independent 64-bit stream seed for block `block` of a campaign seeded with
/// `seed` (splitmix64 finalizer), so results do not depend on worker count.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t block);

}  // namespace slelab
