#pragma once

#include <iomanip>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "vulnchain/evaluation.hpp"

namespace vulnchain {

// Ground-truth identifiers with no record in the population. They stay in
// every denominator; this list only makes the mismatch visible.
inline std::vector<CveId> unmatched_ground_truth(
    std::span<const VulnerabilityRecord> population,
    const GroundTruthSet& ground_truth) {
  std::set<CveId> ids;
  for (const auto& record : population) ids.insert(record.cve);
  std::vector<CveId> unmatched;
  for (const auto& cve : ground_truth.exploited)
    if (!ids.count(cve)) unmatched.push_back(cve);
  return unmatched;
}

// Everything the evaluate command emits for one ground-truth condition.
struct ConditionReport {
  std::string label;
  GroundTruthSource source = GroundTruthSource::Custom;
  std::size_t exploited_total = 0;
  std::array<MetricResult, 4> methods{};
  MetricResult chained_high_only;     // secondary column: top tier alone
  PartitionResult partition;
  std::size_t mutual_complement_count = 0;
  WorkloadReport workload;
  std::vector<CveId> unmatched;
};

inline ConditionReport evaluate_condition(
    std::span<const VulnerabilityRecord> population,
    const GroundTruthSet& ground_truth, const ThresholdConfig& config) {
  ConditionReport report;
  report.label = ground_truth.label;
  report.source = ground_truth.source;
  report.exploited_total = ground_truth.exploited.size();
  report.methods = evaluate_all(population, ground_truth, config);

  std::set<CveId> high_only;
  for (const auto& record : population)
    if (classify(record, config).tier == PriorityTier::HighPriority)
      high_only.insert(record.cve);
  report.chained_high_only =
      detail::make_metric(Method::Chained, high_only, ground_truth);

  report.partition = partition_exploited(
      ground_truth,
      baseline_select(population, BaselineMethod::KevOnly, config),
      baseline_select(population, BaselineMethod::EpssOnly, config));
  report.mutual_complement_count = mutual_complement(report.partition);
  report.workload = workload_report(population, config);
  report.unmatched = unmatched_ground_truth(population, ground_truth);
  return report;
}

namespace detail {

inline std::string method_label(Method m, const ThresholdConfig& config) {
  std::ostringstream oss;
  switch (m) {
    case Method::CvssOnly:
      oss << "CVSS >= " << std::fixed << std::setprecision(1)
          << config.cvss_cutoff;
      break;
    case Method::KevOnly:
      oss << "KEV only";
      break;
    case Method::EpssOnly:
      oss << "EPSS >= " << std::setprecision(3) << config.epss_cutoff;
      break;
    case Method::Chained:
      oss << "Chained (KEV|EPSS)+CVSS";
      break;
  }
  return oss.str();
}

}  // namespace detail

// Human-readable layout: method rows, one efficiency/coverage column pair
// per condition, then the partition and workload blocks per condition.
inline std::string render_table(const std::vector<ConditionReport>& conditions,
                                const ThresholdConfig& config) {
  std::ostringstream os;
  os << std::left;
  os << std::setw(26) << "Method";
  for (const auto& c : conditions) {
    std::string head = c.label + " (n=" + std::to_string(c.exploited_total) + ")";
    os << std::setw(26) << head;
  }
  os << '\n' << std::setw(26) << "";
  for (std::size_t i = 0; i < conditions.size(); ++i)
    os << std::setw(13) << "efficiency" << std::setw(13) << "coverage";
  os << '\n';

  static constexpr Method order[] = {Method::CvssOnly, Method::KevOnly,
                                     Method::EpssOnly, Method::Chained};
  for (std::size_t row = 0; row < 4; ++row) {
    os << std::setw(26) << detail::method_label(order[row], config);
    for (const auto& c : conditions) {
      const MetricResult& m = c.methods[row];
      os << std::setw(13) << format_pct(m.hits, m.priority_count)
         << std::setw(13) << format_pct(m.hits, m.exploited_total);
    }
    os << '\n';
  }
  os << std::setw(26) << "  high tier only";
  for (const auto& c : conditions) {
    const MetricResult& m = c.chained_high_only;
    os << std::setw(13) << format_pct(m.hits, m.priority_count)
       << std::setw(13) << format_pct(m.hits, m.exploited_total);
  }
  os << '\n';

  for (const auto& c : conditions) {
    const PartitionResult& p = c.partition;
    os << '\n' << "[" << c.label << "] threat-signal partition of "
       << p.exploited_total << " exploited\n";
    os << "  KEV only (EPSS below cutoff): " << p.kev_only << " ("
       << format_pct(p.kev_only, p.exploited_total) << ")\n";
    os << "  EPSS only (not in KEV):       " << p.epss_only << " ("
       << format_pct(p.epss_only, p.exploited_total) << ")\n";
    os << "  Both signals:                 " << p.both << " ("
       << format_pct(p.both, p.exploited_total) << ")\n";
    os << "  Neither:                      " << p.neither << "\n";
    os << "  Union coverage:               "
       << format_pct(p.kev_only + p.epss_only + p.both, p.exploited_total)
       << "\n";
    os << "  Mutual complement (KEV-only + EPSS-only): "
       << c.mutual_complement_count << "\n";
    os << "  Workload: chained " << c.workload.chained_count << " vs CVSS "
       << c.workload.cvss_baseline_count << " (reduction "
       << format_pct(c.workload.cvss_baseline_count - c.workload.chained_count,
                     c.workload.cvss_baseline_count)
       << ")\n";
    if (!c.unmatched.empty()) {
      os << "  Ground-truth CVEs outside population: " << c.unmatched.size()
         << "\n";
    }
  }
  return os.str();
}

inline nlohmann::ordered_json metric_to_json(const MetricResult& m) {
  nlohmann::ordered_json j;
  j["method"] = to_string(m.method);
  j["priority_count"] = m.priority_count;
  j["exploited_total"] = m.exploited_total;
  j["hits"] = m.hits;
  j["efficiency"] = m.efficiency;
  j["coverage"] = m.coverage;
  return j;
}

// Machine-readable form: full-precision ratios, no rounding.
inline nlohmann::ordered_json report_to_json(
    const std::vector<ConditionReport>& conditions,
    const ThresholdConfig& config) {
  nlohmann::ordered_json root;
  nlohmann::ordered_json cfg;
  cfg["epss_cutoff"] = config.epss_cutoff;
  cfg["cvss_cutoff"] = config.cvss_cutoff;
  cfg["as_of"] = to_string(config.as_of);
  cfg["window_start"] = to_string(config.window_start);
  cfg["missing_cvss_policy"] = to_string(config.missing_cvss_policy);
  root["config"] = std::move(cfg);

  nlohmann::ordered_json conds = nlohmann::ordered_json::array();
  for (const auto& c : conditions) {
    nlohmann::ordered_json jc;
    jc["label"] = c.label;
    jc["source"] = to_string(c.source);
    jc["exploited_total"] = c.exploited_total;
    nlohmann::ordered_json methods = nlohmann::ordered_json::array();
    for (const auto& m : c.methods) methods.push_back(metric_to_json(m));
    jc["methods"] = std::move(methods);
    jc["chained_high_only"] = metric_to_json(c.chained_high_only);

    nlohmann::ordered_json part;
    part["kev_only"] = c.partition.kev_only;
    part["epss_only"] = c.partition.epss_only;
    part["both"] = c.partition.both;
    part["neither"] = c.partition.neither;
    part["kev_only_pct"] = c.partition.kev_only_pct;
    part["epss_only_pct"] = c.partition.epss_only_pct;
    part["both_pct"] = c.partition.both_pct;
    part["union_coverage"] = c.partition.union_coverage;
    part["mutual_complement"] = c.mutual_complement_count;
    jc["partition"] = std::move(part);

    nlohmann::ordered_json wl;
    wl["cvss_baseline_count"] = c.workload.cvss_baseline_count;
    wl["chained_count"] = c.workload.chained_count;
    wl["reduction_ratio"] = c.workload.reduction_ratio;
    jc["workload"] = std::move(wl);

    nlohmann::ordered_json unmatched = nlohmann::ordered_json::array();
    for (const auto& cve : c.unmatched) unmatched.push_back(cve.str());
    jc["unmatched_ground_truth"] = std::move(unmatched);
    conds.push_back(std::move(jc));
  }
  root["conditions"] = std::move(conds);
  return root;
}

inline std::string render_json(const std::vector<ConditionReport>& conditions,
                               const ThresholdConfig& config) {
  return report_to_json(conditions, config).dump(2) + "\n";
}

inline std::string render_csv(const std::vector<ConditionReport>& conditions,
                              const ThresholdConfig&) {
  std::ostringstream os;
  os << "condition,method,priority_count,exploited_total,hits,efficiency,"
        "coverage\n";
  os << std::setprecision(17);
  for (const auto& c : conditions) {
    auto row = [&](const MetricResult& m, std::string_view name) {
      os << c.label << ',' << name << ',' << m.priority_count << ','
         << m.exploited_total << ',' << m.hits << ',' << m.efficiency << ','
         << m.coverage << '\n';
    };
    for (const auto& m : c.methods) row(m, to_string(m.method));
    row(c.chained_high_only, "chained_high_only");
  }
  return os.str();
}

// Sweep grid export: one row per grid point, epss-major order.
inline std::string sweep_to_csv(const std::vector<SweepPoint>& points) {
  std::ostringstream os;
  os << "epss_cutoff,cvss_cutoff,priority_count,hits,efficiency,coverage\n";
  for (const auto& p : points) {
    char head[64];
    std::snprintf(head, sizeof(head), "%.6g,%.1f", p.epss_cutoff,
                  p.cvss_cutoff);
    os << head << ',' << p.chained.priority_count << ',' << p.chained.hits
       << ',' << std::setprecision(17) << p.chained.efficiency << ','
       << p.chained.coverage << '\n';
  }
  return os.str();
}

}  // namespace vulnchain
