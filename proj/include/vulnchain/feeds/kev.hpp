#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "vulnchain/date.hpp"
#include "vulnchain/error.hpp"
#include "vulnchain/record.hpp"

namespace vulnchain {

struct KevCatalog {
  std::string catalog_version;
  Date date_released;
  std::vector<KevEntry> entries;  // file order
};

// Parses the exploited-vulnerabilities catalog JSON. The declared `count`
// is cross-checked against the actual array length; extra per-entry fields
// (vendor, product, ...) are ignored.
inline KevCatalog parse_kev_catalog(std::string_view payload) {
  nlohmann::json root = nlohmann::json::parse(payload, nullptr, false);
  if (root.is_discarded() || !root.is_object())
    throw SchemaError("catalog payload is not a JSON object");
  for (const char* key : {"catalogVersion", "dateReleased", "count",
                          "vulnerabilities"})
    if (!root.contains(key))
      throw SchemaError(std::string("catalog missing field '") + key + "'");
  if (!root["vulnerabilities"].is_array())
    throw SchemaError("'vulnerabilities' is not an array");

  KevCatalog catalog;
  catalog.catalog_version = root["catalogVersion"].get<std::string>();
  auto released = try_parse_date(root["dateReleased"].get<std::string>());
  if (!released) throw SchemaError("unparseable dateReleased");
  catalog.date_released = *released;

  for (const auto& v : root["vulnerabilities"]) {
    KevEntry entry;
    try {
      entry.cve = CveId::parse(v.at("cveID").get<std::string>());
      auto added = try_parse_date(v.at("dateAdded").get<std::string>());
      auto due = try_parse_date(v.at("dueDate").get<std::string>());
      if (!added || !due)
        throw SchemaError(entry.cve.str() + ": unparseable KEV dates");
      entry.date_added = *added;
      entry.due_date = *due;
      entry.required_action = v.value("requiredAction", "");
      entry.short_description = v.value("shortDescription", "");
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError(std::string("malformed catalog entry: ") + e.what());
    } catch (const MalformedCveId& e) {
      throw SchemaError(e.what());
    }
    validate(entry);
    catalog.entries.push_back(std::move(entry));
  }

  const auto declared = root["count"].get<std::int64_t>();
  if (declared < 0 ||
      static_cast<std::size_t>(declared) != catalog.entries.size())
    throw CountMismatch("catalog declares " + std::to_string(declared) +
                        " entries but carries " +
                        std::to_string(catalog.entries.size()));
  return catalog;
}

}  // namespace vulnchain
