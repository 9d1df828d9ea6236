#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "vulnchain/engine.hpp"
#include "vulnchain/record.hpp"

namespace vulnchain {

enum class Method { CvssOnly, KevOnly, EpssOnly, Chained };

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::CvssOnly: return "cvss_only";
    case Method::KevOnly: return "kev_only";
    case Method::EpssOnly: return "epss_only";
    case Method::Chained: return "chained";
  }
  return "chained";
}

// Efficiency is the precision analogue (exploited fraction of the priority
// set), coverage the recall analogue (captured fraction of the exploited
// set).
struct MetricResult {
  Method method = Method::Chained;
  std::size_t priority_count = 0;
  std::size_t exploited_total = 0;
  std::size_t hits = 0;
  double efficiency = 0.0;  // 0.0 when the priority set is empty
  double coverage = 0.0;
};

namespace detail {

inline std::size_t intersection_size(const std::set<CveId>& priority,
                                     const std::set<CveId>& exploited) {
  std::size_t n = 0;
  const bool priority_smaller = priority.size() < exploited.size();
  const auto& probe = priority_smaller ? priority : exploited;
  const auto& base = priority_smaller ? exploited : priority;
  for (const auto& cve : probe)
    if (base.count(cve)) ++n;
  return n;
}

}  // namespace detail

inline double efficiency(const std::set<CveId>& priority,
                         const GroundTruthSet& exploited) {
  if (priority.empty())
    throw EmptyPrioritySet("efficiency undefined for an empty priority set");
  return static_cast<double>(
             detail::intersection_size(priority, exploited.exploited)) /
         static_cast<double>(priority.size());
}

inline double coverage(const std::set<CveId>& priority,
                       const GroundTruthSet& exploited) {
  if (exploited.exploited.empty())
    throw EmptyGroundTruth("coverage undefined for an empty exploited set");
  return static_cast<double>(
             detail::intersection_size(priority, exploited.exploited)) /
         static_cast<double>(exploited.exploited.size());
}

// Partition of the exploited set by which threat signal captures each CVE.
// Exploited CVEs absent from both signal sets land in `neither`, which
// keeps ground-truth entries outside the population visible instead of
// silently inflating coverage.
struct PartitionResult {
  std::size_t kev_only = 0;
  std::size_t epss_only = 0;
  std::size_t both = 0;
  std::size_t neither = 0;
  std::size_t exploited_total = 0;
  double kev_only_pct = 0.0;   // ratios of exploited_total
  double epss_only_pct = 0.0;
  double both_pct = 0.0;
  double union_coverage = 0.0;
};

inline PartitionResult partition_exploited(const GroundTruthSet& exploited,
                                           const std::set<CveId>& kev_set,
                                           const std::set<CveId>& epss_set) {
  PartitionResult p;
  p.exploited_total = exploited.exploited.size();
  for (const auto& cve : exploited.exploited) {
    const bool in_kev = kev_set.count(cve) > 0;
    const bool in_epss = epss_set.count(cve) > 0;
    if (in_kev && in_epss) ++p.both;
    else if (in_kev) ++p.kev_only;
    else if (in_epss) ++p.epss_only;
    else ++p.neither;
  }
  if (p.exploited_total > 0) {
    const auto total = static_cast<double>(p.exploited_total);
    p.kev_only_pct = static_cast<double>(p.kev_only) / total;
    p.epss_only_pct = static_cast<double>(p.epss_only) / total;
    p.both_pct = static_cast<double>(p.both) / total;
    p.union_coverage =
        static_cast<double>(p.kev_only + p.epss_only + p.both) / total;
  }
  return p;
}

// Exploited CVEs each single signal would miss without the other: the
// symmetric complement (exclusive KEV hits plus exclusive EPSS hits). The
// one-sided complements are already visible as the raw kev_only/epss_only
// counts; none of these scalars is folded into another.
inline std::size_t mutual_complement(const PartitionResult& p) {
  return p.kev_only + p.epss_only;
}

namespace detail {

inline MetricResult make_metric(Method method, const std::set<CveId>& priority,
                                const GroundTruthSet& exploited) {
  MetricResult m;
  m.method = method;
  m.priority_count = priority.size();
  m.exploited_total = exploited.exploited.size();
  m.hits = intersection_size(priority, exploited.exploited);
  if (m.priority_count > 0)
    m.efficiency = static_cast<double>(m.hits) /
                   static_cast<double>(m.priority_count);
  if (m.exploited_total > 0)
    m.coverage = static_cast<double>(m.hits) /
                 static_cast<double>(m.exploited_total);
  return m;
}

}  // namespace detail

// All four methods scored against one ground-truth condition under one
// config. The chained priority set is every non-normal tier.
inline std::array<MetricResult, 4> evaluate_all(
    std::span<const VulnerabilityRecord> population,
    const GroundTruthSet& ground_truth, const ThresholdConfig& config) {
  if (ground_truth.exploited.empty())
    throw EmptyGroundTruth("ground-truth set '" + ground_truth.label +
                           "' is empty");
  validate(config);

  const auto cvss_set =
      baseline_select(population, BaselineMethod::CvssOnly, config);
  const auto kev_set =
      baseline_select(population, BaselineMethod::KevOnly, config);
  const auto epss_set =
      baseline_select(population, BaselineMethod::EpssOnly, config);

  std::set<CveId> chained;
  for (const auto& record : population)
    if (classify(record, config).tier != PriorityTier::NormalProcess)
      chained.insert(record.cve);

  return {detail::make_metric(Method::CvssOnly, cvss_set, ground_truth),
          detail::make_metric(Method::KevOnly, kev_set, ground_truth),
          detail::make_metric(Method::EpssOnly, epss_set, ground_truth),
          detail::make_metric(Method::Chained, chained, ground_truth)};
}

struct WorkloadReport {
  std::size_t cvss_baseline_count = 0;
  std::size_t chained_count = 0;
  double reduction_ratio = 0.0;  // 1 - chained / baseline
};

inline WorkloadReport workload_report(
    std::span<const VulnerabilityRecord> population,
    const ThresholdConfig& config) {
  validate(config);
  WorkloadReport w;
  w.cvss_baseline_count =
      baseline_select(population, BaselineMethod::CvssOnly, config).size();
  const auto classified = classify_population(population, config);
  w.chained_count = classified.counts.non_normal();
  if (w.cvss_baseline_count == 0)
    throw DivisionByZero("CVSS baseline selected no records");
  w.reduction_ratio = 1.0 - static_cast<double>(w.chained_count) /
                                static_cast<double>(w.cvss_baseline_count);
  return w;
}

// Inclusive numeric range sampled at lo + k*step. The point count comes
// from integer arithmetic on the span so 0.05..0.15 step 0.001 yields
// exactly 101 points.
struct SweepRange {
  double lo = 0.0;
  double hi = 0.0;
  double step = 0.0;

  std::size_t points() const {
    // 1e-6 slack absorbs the division's representation error without
    // admitting points visibly past hi
    return static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-6)) + 1;
  }
  double at(std::size_t k) const { return lo + static_cast<double>(k) * step; }
};

inline void validate(const SweepRange& r) {
  if (!(r.step > 0.0))
    throw InvalidRange("sweep step must be positive");
  if (r.hi < r.lo)
    throw InvalidRange("sweep range upper bound below lower bound");
}

inline SweepRange default_epss_sweep() { return {0.05, 0.15, 0.001}; }
inline SweepRange default_cvss_sweep() { return {6.0, 8.0, 0.1}; }

struct SweepPoint {
  double epss_cutoff = 0.0;
  double cvss_cutoff = 0.0;
  MetricResult chained;
};

// Full threshold grid, chained-method metrics at every point. Grid order
// is epss-major then cvss, matching the CSV export.
inline std::vector<SweepPoint> sweep(
    std::span<const VulnerabilityRecord> population,
    const GroundTruthSet& ground_truth, const SweepRange& epss_range,
    const SweepRange& cvss_range, const ThresholdConfig& base) {
  validate(epss_range);
  validate(cvss_range);
  validate(base);
  if (ground_truth.exploited.empty())
    throw EmptyGroundTruth("ground-truth set '" + ground_truth.label +
                           "' is empty");

  // The window never varies across the grid, so resolve each record's
  // gate inputs once.
  struct Resolved {
    bool kev_listed;
    std::optional<double> max_epss;
    bool exploited;
    bool has_cvss;
  };
  std::vector<Resolved> resolved;
  resolved.reserve(population.size());
  for (const auto& record : population)
    resolved.push_back(
        {record.kev_listed_as_of(base.as_of),
         record.max_epss_between(base.window_start, base.as_of),
         ground_truth.exploited.count(record.cve) > 0,
         record.cvss.has_value()});
  const bool exclude_unscored =
      base.missing_cvss_policy == MissingCvssPolicy::Exclude;

  const std::size_t epss_points = epss_range.points();
  const std::size_t cvss_points = cvss_range.points();
  std::vector<SweepPoint> grid;
  grid.reserve(epss_points * cvss_points);
  for (std::size_t i = 0; i < epss_points; ++i) {
    const double epss_cutoff = epss_range.at(i);
    for (std::size_t j = 0; j < cvss_points; ++j) {
      const double cvss_cutoff = cvss_range.at(j);
      SweepPoint point;
      point.epss_cutoff = epss_cutoff;
      point.cvss_cutoff = cvss_cutoff;
      MetricResult& m = point.chained;
      m.method = Method::Chained;
      m.exploited_total = ground_truth.exploited.size();
      for (const auto& r : resolved) {
        const bool gate =
            r.kev_listed ||
            (r.max_epss && epss_meets_cutoff(*r.max_epss, epss_cutoff));
        if (!gate || (exclude_unscored && !r.has_cvss)) continue;
        ++m.priority_count;
        if (r.exploited) ++m.hits;
      }
      if (m.priority_count > 0)
        m.efficiency = static_cast<double>(m.hits) /
                       static_cast<double>(m.priority_count);
      if (m.exploited_total > 0)
        m.coverage = static_cast<double>(m.hits) /
                     static_cast<double>(m.exploited_total);
      grid.push_back(point);
    }
  }
  return grid;
}

// One-decimal percentage with round-half-away-from-zero, computed on
// integers so rendering can't drift from the exact ratio.
inline std::string format_pct(std::size_t numerator, std::size_t denominator) {
  if (denominator == 0) return "n/a";
  const std::uint64_t scaled = 1000ull * numerator;
  const std::uint64_t tenths = (scaled + denominator / 2) / denominator;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%llu.%llu%%",
                static_cast<unsigned long long>(tenths / 10),
                static_cast<unsigned long long>(tenths % 10));
  return buf;
}

inline std::string format_pct(double ratio) {
  const long long tenths = std::llround(ratio * 1000.0);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%lld.%lld%%", tenths < 0 ? "-" : "",
                std::llabs(tenths) / 10, std::llabs(tenths) % 10);
  return buf;
}

}  // namespace vulnchain
