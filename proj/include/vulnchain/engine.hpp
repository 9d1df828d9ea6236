#pragma once

#include <cmath>
#include <cstddef>
#include <set>
#include <span>
#include <vector>

#include "vulnchain/record.hpp"

namespace vulnchain {

// EPSS scores come from decimal text, cutoffs may come from arithmetic
// (sweep grids), so equality at the threshold is decided within 1e-9.
// CVSS comparisons are exact on integer tenths and need no tolerance.
inline constexpr double kEpssEqualityTolerance = 1e-9;

inline bool epss_at_threshold(double score, double cutoff) {
  return std::fabs(score - cutoff) <= kEpssEqualityTolerance;
}

inline bool epss_meets_cutoff(double score, double cutoff) {
  return score > cutoff || epss_at_threshold(score, cutoff);
}

// The two-stage decision tree.
//
// Stage 1 (threat relevance): catalog-listed as of the configured date, or
// the window-maximum EPSS score meets the cutoff (inclusive). Records that
// clear neither gate go to the normal process regardless of severity.
//
// Stage 2 (impact tiering): CVSS at or above the cutoff selects the high
// tier, below it the medium tier. Threat-relevant records without a CVSS
// metric are tiered by the missing-CVSS policy; under Exclude they fall
// back to the normal process and are thereby kept out of the priority set.
inline ClassificationResult classify(const VulnerabilityRecord& record,
                                     const ThresholdConfig& config) {
  ClassificationResult r;
  r.cve = record.cve;
  r.kev_listed = record.kev_listed_as_of(config.as_of);
  r.max_epss_in_window =
      record.max_epss_between(config.window_start, config.as_of);
  r.epss_exceeds = r.max_epss_in_window.has_value() &&
                   epss_meets_cutoff(*r.max_epss_in_window, config.epss_cutoff);
  if (r.max_epss_in_window &&
      epss_at_threshold(*r.max_epss_in_window, config.epss_cutoff))
    r.flags.exact_threshold_epss = true;

  const int cutoff_tenths = score_tenths(config.cvss_cutoff);
  if (record.cvss) {
    r.cvss_exceeds = record.cvss->tenths() >= cutoff_tenths;
    if (record.cvss->tenths() == cutoff_tenths)
      r.flags.exact_threshold_cvss = true;
  }

  if (!r.kev_listed && !r.epss_exceeds) {
    r.tier = PriorityTier::NormalProcess;
    return r;
  }

  if (record.cvss) {
    r.tier = *r.cvss_exceeds ? PriorityTier::HighPriority
                             : PriorityTier::MediumPriority;
    return r;
  }

  switch (config.missing_cvss_policy) {
    case MissingCvssPolicy::EscalateHigh:
      r.tier = PriorityTier::HighPriority;
      r.flags.missing_cvss_escalated = true;
      break;
    case MissingCvssPolicy::EscalateMedium:
      r.tier = PriorityTier::MediumPriority;
      r.flags.missing_cvss_escalated = true;
      break;
    case MissingCvssPolicy::Exclude:
      r.tier = PriorityTier::NormalProcess;
      break;
  }
  return r;
}

struct TierCounts {
  std::size_t high = 0;
  std::size_t medium = 0;
  std::size_t normal = 0;

  std::size_t non_normal() const { return high + medium; }
  std::size_t total() const { return high + medium + normal; }
};

struct ClassifiedPopulation {
  std::vector<ClassificationResult> results;  // input order
  TierCounts counts;
};

inline ClassifiedPopulation classify_population(
    std::span<const VulnerabilityRecord> records,
    const ThresholdConfig& config) {
  ClassifiedPopulation out;
  out.results.reserve(records.size());
  for (const auto& record : records) {
    out.results.push_back(classify(record, config));
    switch (out.results.back().tier) {
      case PriorityTier::HighPriority: ++out.counts.high; break;
      case PriorityTier::MediumPriority: ++out.counts.medium; break;
      case PriorityTier::NormalProcess: ++out.counts.normal; break;
    }
  }
  return out;
}

enum class BaselineMethod { CvssOnly, KevOnly, EpssOnly };

// Single-signal priority sets over the same population, used as the
// comparison baselines.
inline std::set<CveId> baseline_select(
    std::span<const VulnerabilityRecord> records, BaselineMethod method,
    const ThresholdConfig& config) {
  std::set<CveId> out;
  const int cutoff_tenths = score_tenths(config.cvss_cutoff);
  for (const auto& record : records) {
    bool selected = false;
    switch (method) {
      case BaselineMethod::CvssOnly:
        selected = record.cvss && record.cvss->tenths() >= cutoff_tenths;
        break;
      case BaselineMethod::KevOnly:
        selected = record.kev_listed_as_of(config.as_of);
        break;
      case BaselineMethod::EpssOnly: {
        auto max = record.max_epss_between(config.window_start, config.as_of);
        selected = max && epss_meets_cutoff(*max, config.epss_cutoff);
        break;
      }
    }
    if (selected) out.insert(record.cve);
  }
  return out;
}

}  // namespace vulnchain
