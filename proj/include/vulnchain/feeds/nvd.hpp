#pragma once

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "vulnchain/date.hpp"
#include "vulnchain/error.hpp"
#include "vulnchain/feeds/http.hpp"
#include "vulnchain/feeds/pacing.hpp"
#include "vulnchain/record.hpp"

namespace vulnchain {

struct NvdPage {
  std::vector<VulnerabilityRecord> records;
  std::size_t warning_count = 0;  // skipped records + degraded fields
  std::size_t total_results = 0;
  std::size_t start_index = 0;
  std::size_t results_per_page = 0;
};

namespace detail {

// Metric preference: v3.1 over v3.0; within a version the first
// primary-source metric, else the first listed.
inline const nlohmann::json* pick_metric(const nlohmann::json& metrics,
                                         const char* key) {
  if (!metrics.contains(key) || !metrics[key].is_array() ||
      metrics[key].empty())
    return nullptr;
  for (const auto& m : metrics[key])
    if (m.value("type", "") == "Primary") return &m;
  return &metrics[key].front();
}

}  // namespace detail

// Parses one CVE API page. Records that cannot be mapped are skipped and
// counted, never silently dropped; a record without any v3.x metric is
// kept with cvss absent and also counted as a warning.
inline NvdPage parse_nvd_page(std::string_view payload) {
  nlohmann::json root = nlohmann::json::parse(payload, nullptr, false);
  if (root.is_discarded() || !root.is_object() ||
      !root.contains("vulnerabilities") || !root["vulnerabilities"].is_array())
    throw SchemaError("NVD page is not a CVE API 2.0 response");

  NvdPage page;
  page.total_results = root.value("totalResults", 0u);
  page.start_index = root.value("startIndex", 0u);
  page.results_per_page = root.value("resultsPerPage", 0u);

  for (const auto& wrapper : root["vulnerabilities"]) {
    if (!wrapper.is_object() || !wrapper.contains("cve")) {
      ++page.warning_count;
      continue;
    }
    const auto& cve = wrapper["cve"];
    auto id = cve.contains("id") && cve["id"].is_string()
                  ? CveId::try_parse(cve["id"].get_ref<const std::string&>())
                  : std::nullopt;
    auto published = cve.contains("published") && cve["published"].is_string()
                         ? try_parse_date(
                               cve["published"].get_ref<const std::string&>())
                         : std::nullopt;
    if (!id || !published) {
      ++page.warning_count;
      continue;
    }

    VulnerabilityRecord record;
    record.cve = std::move(*id);
    record.published = *published;

    if (cve.contains("descriptions") && cve["descriptions"].is_array()) {
      for (const auto& d : cve["descriptions"]) {
        if (d.value("lang", "") == "en") {
          record.description = d.value("value", "");
          break;
        }
      }
      if (record.description.empty() && !cve["descriptions"].empty())
        record.description = cve["descriptions"].front().value("value", "");
    }

    const nlohmann::json* metric = nullptr;
    CvssVersion version = CvssVersion::V3_1;
    if (cve.contains("metrics")) {
      metric = detail::pick_metric(cve["metrics"], "cvssMetricV31");
      if (!metric) {
        metric = detail::pick_metric(cve["metrics"], "cvssMetricV30");
        version = CvssVersion::V3_0;
      }
    }
    if (metric) {
      try {
        const auto& data = metric->at("cvssData");
        std::optional<CvssVector> vec;
        if (data.contains("vectorString") && data["vectorString"].is_string()) {
          try {
            vec = parse_cvss_vector(
                data["vectorString"].get_ref<const std::string&>());
          } catch (const MalformedVector&) {
            ++page.warning_count;  // keep the score, drop the vector
          }
        }
        record.cvss.emplace(data.at("baseScore").get<double>(), version,
                            std::move(vec));
      } catch (const std::exception&) {
        ++page.warning_count;
        record.cvss.reset();
      }
    } else {
      ++page.warning_count;  // no v3.x metric published
    }

    page.records.push_back(std::move(record));
  }
  return page;
}

struct NvdFetchResult {
  std::vector<VulnerabilityRecord> records;  // unique, published in window
  std::size_t warning_count = 0;
  std::vector<std::string> raw_pages;  // byte-exact page payloads
  std::vector<std::string> page_uris;
};

struct NvdOptions {
  std::string base_url = "https://services.nvd.nist.gov/rest/json/cves/2.0";
  std::size_t page_size = 2000;
  std::size_t max_window_days = 120;
  std::optional<std::string> api_key;  // unset: read NVD_API_KEY
  std::size_t keyless_budget = 5;
  std::chrono::seconds pacing_window{30};
};

// CVE API 2.0 client. Paging via startIndex/resultsPerPage; windows wider
// than the API's 120-day publication-range limit are split into chunks.
// Pacing: 5 requests per rolling 30 s without a key, doubled when
// NVD_API_KEY is set. The key is sent as a header and never logged.
class NvdClient {
 public:
  using Options = NvdOptions;

  explicit NvdClient(Options options = {},
                     RatePacer::NowFn now = [] {
                       return RatePacer::Clock::now();
                     },
                     RatePacer::SleepFn sleep =
                         [](RatePacer::Clock::duration d) {
                           std::this_thread::sleep_for(d);
                         })
      : options_(std::move(options)),
        api_key_(resolve_key(options_.api_key)),
        pacer_(api_key_ ? options_.keyless_budget * 2 : options_.keyless_budget,
               options_.pacing_window, std::move(now), std::move(sleep)) {}

  NvdFetchResult fetch_window(const Date& start, const Date& end) {
    if (end < start)
      throw InvalidRange("fetch window end precedes start");

    NvdFetchResult result;
    std::set<CveId> seen;
    const std::int64_t first = to_epoch_days(start);
    const std::int64_t last = to_epoch_days(end);

    for (std::int64_t chunk_start = first; chunk_start <= last;) {
      const std::int64_t chunk_end =
          std::min(last, chunk_start +
                             static_cast<std::int64_t>(options_.max_window_days) -
                             1);
      fetch_chunk(from_epoch_days(chunk_start), from_epoch_days(chunk_end),
                  start, end, seen, result);
      chunk_start = chunk_end + 1;
    }
    return result;
  }

 private:
  static std::optional<std::string> key_from_env() {
    const char* key = std::getenv("NVD_API_KEY");
    if (key && *key) return std::string(key);
    return std::nullopt;
  }

  // An explicitly empty key disables both the header and the env lookup.
  static std::optional<std::string> resolve_key(
      const std::optional<std::string>& configured) {
    if (configured.has_value())
      return configured->empty() ? std::nullopt : configured;
    return key_from_env();
  }

  void fetch_chunk(const Date& chunk_start, const Date& chunk_end,
                   const Date& window_start, const Date& window_end,
                   std::set<CveId>& seen, NvdFetchResult& result) {
    std::size_t start_index = 0;
    while (true) {
      const std::string uri = page_uri(chunk_start, chunk_end, start_index);
      pacer_.acquire();
      const HttpResponse response = http_get(uri, request_headers());
      if (response.status == 403 || response.status == 429)
        throw RateLimited("NVD returned HTTP " +
                          std::to_string(response.status) +
                          "; back off and retry within the pacing budget");
      if (response.status != 200)
        throw TransportError("NVD returned HTTP " +
                             std::to_string(response.status));

      NvdPage page = parse_nvd_page(response.body);
      result.warning_count += page.warning_count;
      result.raw_pages.push_back(response.body);
      result.page_uris.push_back(uri);
      for (auto& record : page.records) {
        // The API can return records modified into the range; the
        // population is defined by publication date.
        if (record.published < window_start || window_end < record.published)
          continue;
        if (!seen.insert(record.cve).second) continue;
        result.records.push_back(std::move(record));
      }

      start_index += page.results_per_page > 0 ? page.results_per_page
                                               : options_.page_size;
      if (start_index >= page.total_results || page.results_per_page == 0)
        break;
    }
  }

  std::string page_uri(const Date& start, const Date& end,
                       std::size_t start_index) const {
    std::string uri = options_.base_url;
    uri += "?pubStartDate=" + percent_encode(to_string(start) + "T00:00:00.000");
    uri += "&pubEndDate=" + percent_encode(to_string(end) + "T23:59:59.999");
    uri += "&resultsPerPage=" + std::to_string(options_.page_size);
    uri += "&startIndex=" + std::to_string(start_index);
    return uri;
  }

  httplib::Headers request_headers() const {
    httplib::Headers headers;
    if (api_key_) headers.emplace("apiKey", *api_key_);
    return headers;
  }

  Options options_;
  std::optional<std::string> api_key_;
  RatePacer pacer_;
};

}  // namespace vulnchain
