#include "slelab/lemma_campaign.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <thread>

#include "slelab/sampling.hpp"

namespace slelab {

namespace {

struct BlockResult {
  std::size_t samples = 0;
  std::size_t attempts = 0;
  std::size_t lambda2_negative = 0;
  std::map<std::string, ClauseTally> tallies;
};

void tally(std::map<std::string, ClauseTally>& out, const std::string& key, const Clause& clause,
           double tol, const Spectrum& s) {
  ClauseTally& t = out[key];
  if (clause.status == ClauseStatus::kSkippedDegenerate) {
    ++t.skipped;
    return;
  }
  ++t.evaluated;
  if (!clause.passed()) ++t.violations;
  const double rel = *clause.margin / tol;
  if (!t.has_worst || rel < t.worst_relative_margin) {
    t.worst_relative_margin = rel;
    t.worst_witness.assign(s.values().begin(), s.values().end());
    t.has_worst = true;
  }
}

void tally_report(std::map<std::string, ClauseTally>& out, const LemmaReport& report,
                  const Spectrum& s) {
  for (const auto& c : report.clauses) tally(out, report.lemma + "/" + c.id, c, report.tol, s);
}

void tally_margin(std::map<std::string, ClauseTally>& out, const std::string& key, double margin,
                  const Spectrum& s) {
  const double tol = lemma_tolerance(s);
  Clause c{key, margin, margin >= -tol ? ClauseStatus::kPass : ClauseStatus::kFail};
  tally(out, key, c, tol, s);
}

void check_dual_membership(std::map<std::string, ClauseTally>& out, const Spectrum& s) {
  const auto family = dual_family_vectors();
  for (std::size_t k = 0; k < family.size(); ++k) {
    tally_margin(out, "dual_membership/v" + std::to_string(k), dual_pairing_min(family[k], s), s);
  }
}

void check_sample(std::map<std::string, ClauseTally>& out, const ConstraintSpec& spec,
                  const Spectrum& s, std::size_t& lambda2_negative) {
  if (spec.is_gamma_cone()) {
    tally_report(out, check_lemma_general(s, spec.cone()), s);
    if (s.size() >= 4) {
      tally_margin(out, "two_convexity/sigma1", sigma_k(s, 1), s);
      tally_margin(out, "two_convexity/sigma2", sigma_k(s, 2), s);
    }
    if (s.size() == 3) check_dual_membership(out, s);
    return;
  }
  const double eps = spec.eps();
  tally_report(out, check_lemma_n3(s, eps), s);
  if (s[1] < 0.0) {
    ++lambda2_negative;
    tally_report(out, check_ratio_bound(s, eps), s);
    const Spectrum shifted = s.shifted(std::max(1.0, eps));
    tally_margin(out, "shift_nonnegative/lambda3", shifted[2], s);
  } else {
    check_dual_membership(out, s);
  }
}

BlockResult run_block(const CampaignConfig& config, std::size_t block, std::size_t count) {
  BlockResult r;
  AdmissibleSampler sampler(config.spec, derive_seed(config.seed, block), config.scales);
  for (std::size_t i = 0; i < count; ++i) {
    const Spectrum s = sampler.next();
    check_sample(r.tallies, config.spec, s, r.lambda2_negative);
  }
  r.samples = count;
  r.attempts = sampler.attempts();
  return r;
}

void merge(CampaignResult& into, const BlockResult& block) {
  into.samples += block.samples;
  into.attempts += block.attempts;
  into.lambda2_negative += block.lambda2_negative;
  for (const auto& [key, t] : block.tallies) {
    ClauseTally& dst = into.tallies[key];
    dst.evaluated += t.evaluated;
    dst.violations += t.violations;
    dst.skipped += t.skipped;
    if (t.has_worst && (!dst.has_worst || t.worst_relative_margin < dst.worst_relative_margin)) {
      dst.worst_relative_margin = t.worst_relative_margin;
      dst.worst_witness = t.worst_witness;
      dst.has_worst = true;
    }
  }
}

}  // namespace

std::size_t CampaignResult::violations() const {
  std::size_t v = 0;
  for (const auto& [key, t] : tallies) v += t.violations;
  return v;
}

std::vector<Spectrum> dual_family_vectors() {
  std::vector<Spectrum> out = {Spectrum({1.0, 1.0, 0.0}), Spectrum({1.0, 1.0, 1.0})};
  for (double t : {0.0, 0.25, 0.5}) out.emplace_back(std::vector<double>{1.0 + t, 1.0 - t, 1.0});
  return out;
}

CampaignResult run_lemma_campaign(const CampaignConfig& config) {
  const std::size_t block_size = std::max<std::size_t>(1, config.block_size);
  const std::size_t blocks = (config.samples + block_size - 1) / block_size;
  auto count_for = [&](std::size_t b) {
    return std::min(block_size, config.samples - b * block_size);
  };

  std::vector<BlockResult> results(blocks);
  const unsigned jobs = std::max(1u, config.jobs);
  if (jobs == 1) {
    for (std::size_t b = 0; b < blocks; ++b) results[b] = run_block(config, b, count_for(b));
  } else {
    for (std::size_t start = 0; start < blocks; start += jobs) {
      std::vector<std::future<BlockResult>> pending;
      for (std::size_t b = start; b < std::min(blocks, start + jobs); ++b) {
        pending.push_back(std::async(std::launch::async, run_block, std::cref(config), b, count_for(b)));
      }
      for (std::size_t k = 0; k < pending.size(); ++k) results[start + k] = pending[k].get();
    }
  }

  CampaignResult out;
  out.constraint = config.spec.name();
  out.seed = config.seed;
  for (const auto& r : results) merge(out, r);
  return out;
}

}  // namespace slelab
