#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vulnchain/cve_id.hpp"
#include "vulnchain/cvss.hpp"
#include "vulnchain/date.hpp"
#include "vulnchain/error.hpp"

namespace vulnchain {

// One day's exploit-probability estimate for a CVE.
struct EpssObservation {
  double score = 0.0;       // probability, [0, 1]
  double percentile = 0.0;  // [0, 1]
  Date observed_on;

  friend bool operator==(const EpssObservation&,
                         const EpssObservation&) = default;
};

inline void validate(const EpssObservation& o) {
  if (!(o.score >= 0.0) || o.score > 1.0)
    throw OutOfRange("EPSS score out of range: " + std::to_string(o.score));
  if (!(o.percentile >= 0.0) || o.percentile > 1.0)
    throw OutOfRange("EPSS percentile out of range: " +
                     std::to_string(o.percentile));
}

// Catalog entry for a CVE with confirmed in-the-wild exploitation.
struct KevEntry {
  CveId cve;
  Date date_added;
  Date due_date;
  std::string required_action;
  std::string short_description;

  friend bool operator==(const KevEntry&, const KevEntry&) = default;
};

inline void validate(const KevEntry& e) {
  if (e.due_date < e.date_added)
    throw SchemaError("KEV entry " + e.cve.str() +
                      ": due date precedes date added");
}

// Everything known about one CVE: identity, technical severity, the full
// EPSS time series, and catalog membership.
struct VulnerabilityRecord {
  CveId cve;
  Date published;
  std::optional<CvssMetric> cvss;
  std::vector<EpssObservation> epss_history;  // strictly ascending dates
  std::optional<KevEntry> kev;
  std::string description;

  // Inserts keeping dates strictly ascending; a same-date observation
  // replaces the stored one.
  void add_epss(const EpssObservation& obs) {
    validate(obs);
    auto it = std::lower_bound(
        epss_history.begin(), epss_history.end(), obs.observed_on,
        [](const EpssObservation& e, const Date& d) { return e.observed_on < d; });
    if (it != epss_history.end() && it->observed_on == obs.observed_on)
      *it = obs;
    else
      epss_history.insert(it, obs);
  }

  // Highest score observed in [lo, hi] (inclusive); absent when no
  // observation falls inside.
  std::optional<double> max_epss_between(const Date& lo, const Date& hi) const {
    std::optional<double> best;
    for (const auto& obs : epss_history) {
      if (obs.observed_on < lo || obs.observed_on > hi) continue;
      if (!best || obs.score > *best) best = obs.score;
    }
    return best;
  }

  bool kev_listed_as_of(const Date& as_of) const {
    return kev.has_value() && kev->date_added <= as_of;
  }

  friend bool operator==(const VulnerabilityRecord&,
                         const VulnerabilityRecord&) = default;
};

inline void validate(const VulnerabilityRecord& r) {
  for (std::size_t i = 0; i < r.epss_history.size(); ++i) {
    validate(r.epss_history[i]);
    if (i > 0 && !(r.epss_history[i - 1].observed_on <
                   r.epss_history[i].observed_on))
      throw SchemaError(r.cve.str() + ": EPSS history dates not ascending");
  }
  if (r.kev) {
    validate(*r.kev);
    if (!(r.kev->cve == r.cve))
      throw SchemaError(r.cve.str() + ": KEV entry names a different CVE (" +
                        r.kev->cve.str() + ")");
  }
}

enum class GroundTruthSource { Nids, VendorReport, Combined, Custom };

inline std::string_view to_string(GroundTruthSource s) {
  switch (s) {
    case GroundTruthSource::Nids: return "nids";
    case GroundTruthSource::VendorReport: return "vendor_report";
    case GroundTruthSource::Combined: return "combined";
    case GroundTruthSource::Custom: return "custom";
  }
  return "custom";
}

// Labeled set of CVEs with observed exploitation, used to score methods.
struct GroundTruthSet {
  std::string label;
  GroundTruthSource source = GroundTruthSource::Custom;
  std::set<CveId> exploited;
};

enum class MissingCvssPolicy { EscalateHigh, EscalateMedium, Exclude };

inline std::string_view to_string(MissingCvssPolicy p) {
  switch (p) {
    case MissingCvssPolicy::EscalateHigh: return "escalate-high";
    case MissingCvssPolicy::EscalateMedium: return "escalate-medium";
    case MissingCvssPolicy::Exclude: return "exclude";
  }
  return "escalate-high";
}

// Tunable parameters of the decision tree. Defaults follow the standard
// operating point: EPSS 0.088, CVSS 7.0, threat-relevant records without
// a score escalated to the top tier.
struct ThresholdConfig {
  double epss_cutoff = 0.088;
  double cvss_cutoff = 7.0;
  Date as_of;
  Date window_start;
  MissingCvssPolicy missing_cvss_policy = MissingCvssPolicy::EscalateHigh;
};

inline void validate(const ThresholdConfig& c) {
  if (!(c.epss_cutoff >= 0.0) || c.epss_cutoff > 1.0)
    throw OutOfRange("EPSS cutoff out of range: " +
                     std::to_string(c.epss_cutoff));
  if (!(c.cvss_cutoff >= 0.0) || c.cvss_cutoff > 10.0)
    throw OutOfRange("CVSS cutoff out of range: " +
                     std::to_string(c.cvss_cutoff));
  if (c.as_of < c.window_start)
    throw InvalidRange("window start " + to_string(c.window_start) +
                       " is after as-of date " + to_string(c.as_of));
}

enum class PriorityTier { HighPriority, MediumPriority, NormalProcess };

inline std::string_view to_string(PriorityTier t) {
  switch (t) {
    case PriorityTier::HighPriority: return "high";
    case PriorityTier::MediumPriority: return "medium";
    case PriorityTier::NormalProcess: return "normal";
  }
  return "normal";
}

struct RationaleFlags {
  bool missing_cvss_escalated = false;
  bool exact_threshold_epss = false;
  bool exact_threshold_cvss = false;

  bool any() const {
    return missing_cvss_escalated || exact_threshold_epss ||
           exact_threshold_cvss;
  }
  friend bool operator==(const RationaleFlags&,
                         const RationaleFlags&) = default;
};

inline std::string to_string(const RationaleFlags& f) {
  std::string out;
  auto append = [&](std::string_view s) {
    if (!out.empty()) out += ';';
    out += s;
  };
  if (f.missing_cvss_escalated) append("missing_cvss_escalated");
  if (f.exact_threshold_epss) append("exact_threshold_epss");
  if (f.exact_threshold_cvss) append("exact_threshold_cvss");
  return out;
}

// Tier decision for one CVE plus the boolean trail of how it was reached.
struct ClassificationResult {
  CveId cve;
  PriorityTier tier = PriorityTier::NormalProcess;
  bool kev_listed = false;
  bool epss_exceeds = false;
  std::optional<double> max_epss_in_window;
  std::optional<bool> cvss_exceeds;
  RationaleFlags flags;

  friend bool operator==(const ClassificationResult&,
                         const ClassificationResult&) = default;
};

}  // namespace vulnchain
