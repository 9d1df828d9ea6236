#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "vulnchain/json_io.hpp"
#include "vulnchain/record.hpp"

namespace vulnchain {

// Publication period that defines a study population.
struct StudyWindow {
  Date start;
  Date end;

  friend bool operator==(const StudyWindow&, const StudyWindow&) = default;
};

inline void validate(const StudyWindow& w) {
  if (w.end < w.start)
    throw InvalidRange("study window end " + to_string(w.end) +
                       " precedes start " + to_string(w.start));
}

struct PopulationStats {
  std::size_t total_cves = 0;
  std::size_t with_cvss = 0;
  std::size_t kev_members_as_of = 0;
  std::size_t epss_covered = 0;  // records with >= 1 observation in window

  friend bool operator==(const PopulationStats&,
                         const PopulationStats&) = default;
};

struct UpsertStats {
  std::size_t inserted = 0;
  std::size_t updated = 0;

  std::size_t total() const { return inserted + updated; }
};

// Published-date filtering: a single query is inclusive on both ends;
// HalfOpen ([start, end)) exists so adjacent windows provably partition a
// span without double counting.
enum class WindowBounds { Inclusive, HalfOpen };

// Normalized record store keyed by CVE. In memory; persisted as
// newline-delimited canonical JSON sorted by CVE id, which is also the
// interchange format between pipeline stages.
class VulnStore {
 public:
  // Merge semantics: EPSS observations are folded into the history
  // (same-date re-ingest overwrites); CVSS, KEV, description and published
  // date take the newest ingest's value when present.
  UpsertStats upsert(std::span<const VulnerabilityRecord> records) {
    UpsertStats stats;
    for (const auto& r : records) {
      validate(r);
      auto [it, inserted] = records_.try_emplace(r.cve, r);
      if (inserted) {
        ++stats.inserted;
        continue;
      }
      VulnerabilityRecord& existing = it->second;
      existing.published = r.published;
      if (r.cvss) existing.cvss = r.cvss;
      if (r.kev) existing.kev = r.kev;
      if (!r.description.empty()) existing.description = r.description;
      for (const auto& obs : r.epss_history) existing.add_epss(obs);
      ++stats.updated;
    }
    return stats;
  }

  UpsertStats upsert(const VulnerabilityRecord& record) {
    return upsert(std::span<const VulnerabilityRecord>(&record, 1));
  }

  std::size_t size() const { return records_.size(); }
  bool contains(const CveId& cve) const { return records_.count(cve) > 0; }

  const VulnerabilityRecord* find(const CveId& cve) const {
    auto it = records_.find(cve);
    return it == records_.end() ? nullptr : &it->second;
  }

  std::optional<double> max_epss_in_window(const CveId& cve,
                                           const StudyWindow& window) const {
    validate(window);
    return lookup(cve).max_epss_between(window.start, window.end);
  }

  bool kev_membership_as_of(const CveId& cve, const Date& as_of) const {
    return lookup(cve).kev_listed_as_of(as_of);
  }

  struct Population {
    std::vector<VulnerabilityRecord> records;  // ascending CVE id
    PopulationStats stats;
  };

  // Records published inside the window plus summary stats. KEV membership
  // in the stats is evaluated as of `kev_as_of` (window end by default).
  Population population(const StudyWindow& window,
                        WindowBounds bounds = WindowBounds::Inclusive,
                        std::optional<Date> kev_as_of = std::nullopt) const {
    validate(window);
    const Date as_of = kev_as_of.value_or(window.end);
    Population out;
    for (const auto& [cve, record] : records_) {
      if (record.published < window.start) continue;
      if (bounds == WindowBounds::Inclusive ? window.end < record.published
                                            : !(record.published < window.end))
        continue;
      ++out.stats.total_cves;
      if (record.cvss) ++out.stats.with_cvss;
      if (record.kev_listed_as_of(as_of)) ++out.stats.kev_members_as_of;
      if (record.max_epss_between(window.start, window.end))
        ++out.stats.epss_covered;
      out.records.push_back(record);
    }
    return out;
  }

  void export_ndjson(std::ostream& os) const {
    for (const auto& [cve, record] : records_)
      os << record_to_json(record).dump() << '\n';
  }

  std::string export_ndjson() const {
    std::ostringstream oss;
    export_ndjson(oss);
    return oss.str();
  }

  static VulnStore import_ndjson(std::istream& is) {
    VulnStore store;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
      ++line_no;
      if (line.empty()) continue;
      nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
      if (j.is_discarded())
        throw StorageError("store line " + std::to_string(line_no) +
                           ": invalid JSON");
      store.upsert(record_from_json(j));
    }
    return store;
  }

  void save(const std::filesystem::path& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os)
      throw StorageError("cannot open store file for writing: " +
                         path.string());
    export_ndjson(os);
    if (!os) throw StorageError("write failed: " + path.string());
  }

  static VulnStore load(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is)
      throw StorageError("cannot open store file: " + path.string());
    return import_ndjson(is);
  }

 private:
  const VulnerabilityRecord& lookup(const CveId& cve) const {
    auto it = records_.find(cve);
    if (it == records_.end())
      throw UnknownCve("unknown CVE: " + cve.str());
    return it->second;
  }

  std::map<CveId, VulnerabilityRecord> records_;
};

}  // namespace vulnchain
