#include "slelab/sampling.hpp"

#include <utility>

namespace slelab {

AdmissibleSampler::AdmissibleSampler(ConstraintSpec spec, std::uint64_t seed,
                                     std::vector<double> scales, std::size_t max_attempts)
    : spec_(std::move(spec)),
      rng_(seed),
      scales_(std::move(scales)),
      max_attempts_(max_attempts) {
  if (scales_.empty()) throw SamplingError("AdmissibleSampler: no scales given");
  for (double b : scales_) {
    if (!(b > 0.0)) throw SamplingError("AdmissibleSampler: scales must be positive");
  }
}

Spectrum AdmissibleSampler::next() {
  const int n = spec_.dimension();
  std::vector<double> draw(static_cast<std::size_t>(n));
  for (std::size_t tries = 0; tries < max_attempts_; ++tries) {
    const double b = scales_[cursor_];
    cursor_ = (cursor_ + 1) % scales_.size();
    ++attempts_;
    std::uniform_real_distribution<double> uniform(-b, b);
    for (double& v : draw) v = uniform(rng_);
    Spectrum s(draw);
    if (phase(s) >= 0.0 && satisfies_constraint(s, spec_)) {
      last_scale_ = b;
      return s;
    }
  }
  throw SamplingError("AdmissibleSampler: no admissible spectrum for " + spec_.name() +
                      " after bounded retries");
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t block) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (block + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace slelab
