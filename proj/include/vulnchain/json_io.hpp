#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "vulnchain/record.hpp"

namespace vulnchain {

// Canonical JSON form of a record, one object per CVE. Key order is fixed
// and absent optionals are omitted so identical stores serialize to
// identical bytes.
inline nlohmann::ordered_json record_to_json(const VulnerabilityRecord& r) {
  nlohmann::ordered_json j;
  j["cve"] = r.cve.str();
  j["published"] = to_string(r.published);
  if (r.cvss) {
    nlohmann::ordered_json c;
    c["base_score"] = r.cvss->base_score();
    c["version"] = to_string(r.cvss->version());
    if (r.cvss->vector())
      c["vector"] = serialize_cvss_vector(*r.cvss->vector(), r.cvss->version());
    j["cvss"] = std::move(c);
  }
  nlohmann::ordered_json history = nlohmann::ordered_json::array();
  for (const auto& obs : r.epss_history) {
    nlohmann::ordered_json o;
    o["score"] = obs.score;
    o["percentile"] = obs.percentile;
    o["observed_on"] = to_string(obs.observed_on);
    history.push_back(std::move(o));
  }
  j["epss_history"] = std::move(history);
  if (r.kev) {
    nlohmann::ordered_json k;
    k["cve"] = r.kev->cve.str();
    k["date_added"] = to_string(r.kev->date_added);
    k["due_date"] = to_string(r.kev->due_date);
    k["required_action"] = r.kev->required_action;
    k["short_description"] = r.kev->short_description;
    j["kev"] = std::move(k);
  }
  j["description"] = r.description;
  return j;
}

namespace detail {

inline Date date_field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string())
    throw SchemaError(std::string("missing or non-string date field '") + key +
                      "'");
  auto d = try_parse_date(j[key].get_ref<const std::string&>());
  if (!d)
    throw SchemaError(std::string("unparseable date in field '") + key +
                      "': " + j[key].get<std::string>());
  return *d;
}

}  // namespace detail

inline VulnerabilityRecord record_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("cve"))
    throw SchemaError("record object missing 'cve'");
  VulnerabilityRecord r;
  r.cve = CveId::parse(j["cve"].get_ref<const std::string&>());
  r.published = detail::date_field(j, "published");
  if (j.contains("cvss") && !j["cvss"].is_null()) {
    const auto& c = j["cvss"];
    if (!c.contains("base_score") || !c["base_score"].is_number())
      throw SchemaError(r.cve.str() + ": cvss.base_score missing");
    const std::string ver = c.value("version", "3.1");
    CvssVersion version;
    if (ver == "3.0") version = CvssVersion::V3_0;
    else if (ver == "3.1") version = CvssVersion::V3_1;
    else throw SchemaError(r.cve.str() + ": unsupported cvss.version " + ver);
    std::optional<CvssVector> vec;
    if (c.contains("vector") && c["vector"].is_string())
      vec = parse_cvss_vector(c["vector"].get_ref<const std::string&>());
    r.cvss.emplace(c["base_score"].get<double>(), version, std::move(vec));
  }
  if (j.contains("epss_history")) {
    if (!j["epss_history"].is_array())
      throw SchemaError(r.cve.str() + ": epss_history is not an array");
    for (const auto& o : j["epss_history"]) {
      EpssObservation obs;
      obs.score = o.at("score").get<double>();
      obs.percentile = o.at("percentile").get<double>();
      obs.observed_on = detail::date_field(o, "observed_on");
      r.add_epss(obs);
    }
  }
  if (j.contains("kev") && !j["kev"].is_null()) {
    const auto& k = j["kev"];
    KevEntry entry;
    entry.cve = CveId::parse(k.at("cve").get_ref<const std::string&>());
    entry.date_added = detail::date_field(k, "date_added");
    entry.due_date = detail::date_field(k, "due_date");
    entry.required_action = k.value("required_action", "");
    entry.short_description = k.value("short_description", "");
    r.kev = std::move(entry);
  }
  r.description = j.value("description", "");
  validate(r);
  return r;
}

}  // namespace vulnchain
