// vulnchain: threat-gated vulnerability prioritization pipeline.
//
// Subcommands: fetch (nvd|epss|kev), import, classify, evaluate, sweep.
// Exit codes: 0 success (including --help), 2 usage error, 1 operational
// failure (transport, storage, malformed input).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vulnchain/vulnchain.hpp"

namespace fs = std::filesystem;
using namespace vulnchain;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

void machine_error(const std::string& kind, const std::string& message) {
  nlohmann::ordered_json j;
  j["error"] = kind;
  j["message"] = message;
  std::cerr << j.dump() << "\n";
}

Date parse_date_flag(const std::string& text, const std::string& flag) {
  auto d = try_parse_date(text);
  if (!d)
    throw CLI::ValidationError(flag, "expected an ISO date (YYYY-MM-DD), got '" +
                                         text + "'");
  return *d;
}

struct ConfigFlags {
  double epss_cutoff = 0.088;
  double cvss_cutoff = 7.0;
  std::string as_of;
  std::string window_start;
  std::string missing_cvss = "escalate-high";
};

void add_config_flags(CLI::App* cmd, ConfigFlags& flags) {
  cmd->add_option("--epss-cutoff", flags.epss_cutoff,
                  "Exploit-probability gate threshold, inclusive")
      ->capture_default_str();
  cmd->add_option("--cvss-cutoff", flags.cvss_cutoff,
                  "Severity tier threshold, inclusive")
      ->capture_default_str();
  cmd->add_option("--as-of", flags.as_of,
                  "Catalog/score cutoff date (default: newest date in store)");
  cmd->add_option("--window-start", flags.window_start,
                  "Observation window start (default: oldest publication)");
  cmd->add_option("--missing-cvss", flags.missing_cvss,
                  "Policy for threat-relevant records without a score")
      ->check(CLI::IsMember({"escalate-high", "escalate-medium", "exclude"}))
      ->capture_default_str();
}

Date newest_store_date(const VulnStore& store) {
  Date newest{1970, 1, 1};
  const auto everything =
      store.population({Date{1970, 1, 1}, Date{9999, 12, 31}});
  for (const auto& r : everything.records) {
    newest = std::max(newest, r.published);
    if (!r.epss_history.empty())
      newest = std::max(newest, r.epss_history.back().observed_on);
    if (r.kev) newest = std::max(newest, r.kev->date_added);
  }
  return newest;
}

Date oldest_published(const VulnStore& store) {
  Date oldest{9999, 12, 31};
  const auto everything =
      store.population({Date{1970, 1, 1}, Date{9999, 12, 31}});
  for (const auto& r : everything.records) oldest = std::min(oldest, r.published);
  return oldest;
}

ThresholdConfig resolve_config(const ConfigFlags& flags, const VulnStore& store) {
  ThresholdConfig config;
  config.epss_cutoff = flags.epss_cutoff;
  config.cvss_cutoff = flags.cvss_cutoff;
  config.window_start = flags.window_start.empty()
                            ? oldest_published(store)
                            : parse_date_flag(flags.window_start, "--window-start");
  config.as_of = flags.as_of.empty() ? newest_store_date(store)
                                     : parse_date_flag(flags.as_of, "--as-of");
  if (flags.missing_cvss == "escalate-medium")
    config.missing_cvss_policy = MissingCvssPolicy::EscalateMedium;
  else if (flags.missing_cvss == "exclude")
    config.missing_cvss_policy = MissingCvssPolicy::Exclude;
  else
    config.missing_cvss_policy = MissingCvssPolicy::EscalateHigh;
  validate(config);
  return config;
}

void write_output(const std::string& content, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream os(out_path, std::ios::binary);
  if (!os) throw StorageError("cannot open output file: " + out_path);
  os << content;
  if (!os) throw StorageError("write failed: " + out_path);
}

GroundTruthSource source_from_token(const std::string& token) {
  if (token == "nids") return GroundTruthSource::Nids;
  if (token == "vendor") return GroundTruthSource::VendorReport;
  if (token == "combined") return GroundTruthSource::Combined;
  return GroundTruthSource::Custom;
}

// ---------------------------------------------------------------- fetch

int run_fetch_nvd(const std::string& start_text, const std::string& end_text,
                  const std::string& base_url, std::size_t page_size,
                  const std::string& out_dir) {
  const Date start = parse_date_flag(start_text, "--start");
  const Date end = parse_date_flag(end_text, "--end");
  if (end < start)
    throw CLI::ValidationError("--end", "window end precedes start");

  NvdOptions options;
  options.base_url = base_url;
  options.page_size = page_size;
  NvdClient client(options);
  const auto result = client.fetch_window(start, end);

  for (std::size_t i = 0; i < result.raw_pages.size(); ++i) {
    char name[96];
    std::snprintf(name, sizeof(name), "nvd_%s_%s_p%04zu.json",
                  to_string(start).c_str(), to_string(end).c_str(), i);
    FeedSnapshotMeta meta;
    meta.source = FeedSource::Nvd;
    meta.fetched_at = utc_timestamp_now();
    meta.source_uri = result.page_uris[i];
    meta.record_count = parse_nvd_page(result.raw_pages[i]).records.size();
    write_snapshot(out_dir, name, result.raw_pages[i], meta);
  }
  std::cout << "fetched nvd: " << result.records.size() << " records, "
            << result.raw_pages.size() << " pages, " << result.warning_count
            << " warnings -> " << out_dir << "\n";
  return kExitOk;
}

int run_fetch_epss(const std::string& date_text, const std::string& base_url,
                   const std::string& out_dir) {
  const Date date = parse_date_flag(date_text, "--date");
  const std::string filename = "epss_scores-" + to_string(date) + ".csv.gz";
  const std::string url = base_url + "/" + filename;
  const auto response = http_get(url);
  if (response.status != 200)
    throw TransportError("GET " + url + " returned HTTP " +
                         std::to_string(response.status));

  const auto parsed = parse_epss_file(response.body);
  FeedSnapshotMeta meta;
  meta.source = FeedSource::Epss;
  meta.fetched_at = utc_timestamp_now();
  meta.source_uri = url;
  meta.record_count = parsed.rows.size();
  write_snapshot(out_dir, filename, response.body, meta);
  std::cout << "fetched epss " << to_string(parsed.score_date) << ": "
            << parsed.rows.size() << " scores (model " << parsed.model_version
            << ") -> " << out_dir << "\n";
  return kExitOk;
}

int run_fetch_kev(const std::string& url, const std::string& out_dir) {
  const auto response = http_get(url);
  if (response.status != 200)
    throw TransportError("GET " + url + " returned HTTP " +
                         std::to_string(response.status));
  const auto catalog = parse_kev_catalog(response.body);

  const std::string filename =
      "kev_" + to_string(catalog.date_released) + ".json";
  FeedSnapshotMeta meta;
  meta.source = FeedSource::Kev;
  meta.fetched_at = utc_timestamp_now();
  meta.source_uri = url;
  meta.record_count = catalog.entries.size();
  write_snapshot(out_dir, filename, response.body, meta);
  std::cout << "fetched kev " << catalog.catalog_version << ": "
            << catalog.entries.size() << " entries -> " << out_dir << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- import

int run_import(const std::string& store_path,
               const std::vector<std::string>& nvd_files,
               const std::vector<std::string>& epss_files,
               const std::vector<std::string>& kev_files) {
  VulnStore store;
  if (fs::exists(store_path)) store = VulnStore::load(store_path);

  std::size_t nvd_count = 0, nvd_warnings = 0;
  for (const auto& file : nvd_files) {
    const auto page = parse_nvd_page(read_file(file));
    store.upsert(page.records);
    nvd_count += page.records.size();
    nvd_warnings += page.warning_count;
  }

  std::size_t epss_count = 0, epss_unmatched = 0;
  for (const auto& file : epss_files) {
    const auto parsed = parse_epss_file(read_file(file));
    for (const auto& [cve, obs] : parsed.rows) {
      if (const auto* existing = store.find(cve)) {
        VulnerabilityRecord updated = *existing;
        updated.add_epss(obs);
        store.upsert(updated);
        ++epss_count;
      } else {
        ++epss_unmatched;
      }
    }
  }

  std::size_t kev_count = 0, kev_unmatched = 0;
  for (const auto& file : kev_files) {
    const auto catalog = parse_kev_catalog(read_file(file));
    for (const auto& entry : catalog.entries) {
      if (const auto* existing = store.find(entry.cve)) {
        VulnerabilityRecord updated = *existing;
        updated.kev = entry;
        store.upsert(updated);
        ++kev_count;
      } else {
        ++kev_unmatched;
      }
    }
  }

  store.save(store_path);
  std::cout << "imported: nvd=" << nvd_count << " (warnings " << nvd_warnings
            << "), epss=" << epss_count << " (outside population "
            << epss_unmatched << "), kev=" << kev_count
            << " (outside population " << kev_unmatched << "); store has "
            << store.size() << " records\n";
  return kExitOk;
}

// ---------------------------------------------------------------- classify

int run_classify(const std::string& store_path, const ConfigFlags& flags,
                 const std::string& out_path) {
  const VulnStore store = VulnStore::load(store_path);
  std::string csv = "cve,tier,kev_listed,max_epss,epss_exceeds,cvss,"
                    "cvss_exceeds,flags\n";
  TierCounts counts;

  if (store.size() > 0) {
    const auto config = resolve_config(flags, store);
    const auto population =
        store.population({config.window_start, config.as_of});
    const auto classified = classify_population(population.records, config);
    counts = classified.counts;

    for (const auto& r : classified.results) {
      char line[256];
      std::string max_epss =
          r.max_epss_in_window
              ? (std::snprintf(line, sizeof(line), "%.5f", *r.max_epss_in_window),
                 std::string(line))
              : std::string();
      const auto* record = store.find(r.cve);
      std::string cvss =
          record->cvss ? (std::snprintf(line, sizeof(line), "%.1f",
                                        record->cvss->base_score()),
                          std::string(line))
                       : std::string();
      csv += r.cve.str();
      csv += ',';
      csv += to_string(r.tier);
      csv += ',';
      csv += r.kev_listed ? "true" : "false";
      csv += ',';
      csv += max_epss;
      csv += ',';
      csv += r.epss_exceeds ? "true" : "false";
      csv += ',';
      csv += cvss;
      csv += ',';
      csv += r.cvss_exceeds ? (*r.cvss_exceeds ? "true" : "false") : "";
      csv += ',';
      csv += to_string(r.flags);
      csv += '\n';
    }
  }

  write_output(csv, out_path);
  std::ostream& summary = out_path.empty() ? std::cerr : std::cout;
  summary << "classified " << counts.total() << " records: high=" << counts.high
          << " medium=" << counts.medium << " normal=" << counts.normal
          << " (non-normal " << counts.non_normal() << ")\n";
  return kExitOk;
}

// ---------------------------------------------------------------- evaluate

int run_evaluate(const std::string& store_path,
                 const std::vector<std::string>& truth_files,
                 const std::vector<std::string>& labels,
                 const std::vector<std::string>& sources,
                 const ConfigFlags& flags, const std::string& format,
                 const std::string& out_path) {
  const VulnStore store = VulnStore::load(store_path);
  const auto config = resolve_config(flags, store);
  const auto population = store.population({config.window_start, config.as_of});

  std::vector<ConditionReport> conditions;
  for (std::size_t i = 0; i < truth_files.size(); ++i) {
    const std::string label =
        i < labels.size() ? labels[i] : fs::path(truth_files[i]).stem().string();
    const GroundTruthSource source =
        i < sources.size() ? source_from_token(sources[i])
                           : GroundTruthSource::Custom;
    const auto imported =
        import_ground_truth(read_file(truth_files[i]), source, label);
    if (imported.duplicate_count > 0)
      std::cerr << "note: " << truth_files[i] << ": "
                << imported.duplicate_count << " duplicate line(s) collapsed\n";
    conditions.push_back(
        evaluate_condition(population.records, imported.set, config));
  }

  std::string rendered;
  if (format == "json")
    rendered = render_json(conditions, config);
  else if (format == "csv")
    rendered = render_csv(conditions, config);
  else
    rendered = render_table(conditions, config);
  write_output(rendered, out_path);
  return kExitOk;
}

// ---------------------------------------------------------------- sweep

int run_sweep(const std::string& store_path, const std::string& truth_file,
              const std::string& source_token, const ConfigFlags& flags,
              const SweepRange& epss_range, const SweepRange& cvss_range,
              const std::string& out_path) {
  const VulnStore store = VulnStore::load(store_path);
  const auto config = resolve_config(flags, store);
  const auto population = store.population({config.window_start, config.as_of});
  const auto imported =
      import_ground_truth(read_file(truth_file),
                          source_from_token(source_token),
                          fs::path(truth_file).stem().string());

  const auto grid =
      sweep(population.records, imported.set, epss_range, cvss_range, config);
  write_output(sweep_to_csv(grid), out_path);
  std::cerr << "sweep: " << grid.size() << " grid points ("
            << epss_range.points() << " x " << cvss_range.points() << ")\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Threat-gated vulnerability prioritization pipeline"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read defaults from a config file");
  app.failure_message(CLI::FailureMessage::help);

  // fetch
  auto* fetch = app.add_subcommand("fetch", "Fetch a feed and snapshot it");
  fetch->require_subcommand(1);

  std::string nvd_start, nvd_end;
  std::string nvd_base = "https://services.nvd.nist.gov/rest/json/cves/2.0";
  std::size_t nvd_page_size = 2000;
  std::string fetch_out = "snapshots";
  auto* fetch_nvd = fetch->add_subcommand("nvd", "CVE records by publication window");
  fetch_nvd->add_option("--start", nvd_start, "Window start (YYYY-MM-DD)")
      ->required();
  fetch_nvd->add_option("--end", nvd_end, "Window end (YYYY-MM-DD)")->required();
  fetch_nvd->add_option("--base-url", nvd_base, "CVE API endpoint")
      ->capture_default_str();
  fetch_nvd->add_option("--page-size", nvd_page_size, "Records per page")
      ->capture_default_str();
  fetch_nvd->add_option("--out", fetch_out, "Snapshot directory")
      ->capture_default_str();

  std::string epss_date;
  std::string epss_base = "https://epss.cyentia.com";
  auto* fetch_epss = fetch->add_subcommand("epss", "Daily exploit-probability file");
  fetch_epss->add_option("--date", epss_date, "Score date (YYYY-MM-DD)")
      ->required();
  fetch_epss->add_option("--base-url", epss_base, "Feed base URL")
      ->capture_default_str();
  fetch_epss->add_option("--out", fetch_out, "Snapshot directory")
      ->capture_default_str();

  std::string kev_url =
      "https://www.cisa.gov/sites/default/files/feeds/"
      "known_exploited_vulnerabilities.json";
  auto* fetch_kev = fetch->add_subcommand("kev", "Exploited-vulnerabilities catalog");
  fetch_kev->add_option("--url", kev_url, "Catalog URL")->capture_default_str();
  fetch_kev->add_option("--out", fetch_out, "Snapshot directory")
      ->capture_default_str();

  // import
  std::string store_path;
  std::vector<std::string> import_nvd, import_epss, import_kev;
  auto* import_cmd =
      app.add_subcommand("import", "Merge snapshots into a store file");
  import_cmd->add_option("--store", store_path, "Store file (NDJSON)")
      ->required();
  import_cmd->add_option("--nvd", import_nvd, "NVD page snapshot(s)");
  import_cmd->add_option("--epss", import_epss, "Daily score file(s), plain or gzip");
  import_cmd->add_option("--kev", import_kev, "Catalog snapshot(s)");

  // classify
  ConfigFlags classify_flags;
  std::string classify_store, classify_out;
  auto* classify_cmd =
      app.add_subcommand("classify", "Tier every record in the population");
  classify_cmd->add_option("--store", classify_store, "Store file")->required();
  classify_cmd->add_option("--out", classify_out,
                           "CSV output file (default: stdout)");
  add_config_flags(classify_cmd, classify_flags);

  // evaluate
  ConfigFlags evaluate_flags;
  std::string evaluate_store, evaluate_out;
  std::vector<std::string> truth_files, truth_labels, truth_sources;
  std::string format = "table";
  auto* evaluate_cmd = app.add_subcommand(
      "evaluate", "Score all methods against ground-truth condition(s)");
  evaluate_cmd->add_option("--store", evaluate_store, "Store file")->required();
  evaluate_cmd
      ->add_option("--ground-truth", truth_files,
                   "Exploited-CVE list (repeat for a second condition)")
      ->required();
  evaluate_cmd->add_option("--label", truth_labels, "Condition label(s)");
  evaluate_cmd
      ->add_option("--source", truth_sources,
                   "Condition source(s): nids|vendor|combined|custom")
      ->check(CLI::IsMember({"nids", "vendor", "combined", "custom"}));
  evaluate_cmd->add_option("--format", format, "table|json|csv")
      ->check(CLI::IsMember({"table", "json", "csv"}))
      ->capture_default_str();
  evaluate_cmd->add_option("--out", evaluate_out, "Output file (default: stdout)");
  add_config_flags(evaluate_cmd, evaluate_flags);

  // sweep
  ConfigFlags sweep_flags;
  std::string sweep_store, sweep_truth, sweep_out;
  std::string sweep_source = "custom";
  SweepRange epss_range = default_epss_sweep();
  SweepRange cvss_range = default_cvss_sweep();
  auto* sweep_cmd =
      app.add_subcommand("sweep", "Chained metrics over a threshold grid");
  sweep_cmd->add_option("--store", sweep_store, "Store file")->required();
  sweep_cmd->add_option("--ground-truth", sweep_truth, "Exploited-CVE list")
      ->required();
  sweep_cmd->add_option("--source", sweep_source,
                        "Ground-truth source: nids|vendor|combined|custom");
  sweep_cmd->add_option("--epss-min", epss_range.lo)->capture_default_str();
  sweep_cmd->add_option("--epss-max", epss_range.hi)->capture_default_str();
  sweep_cmd->add_option("--epss-step", epss_range.step)->capture_default_str();
  sweep_cmd->add_option("--cvss-min", cvss_range.lo)->capture_default_str();
  sweep_cmd->add_option("--cvss-max", cvss_range.hi)->capture_default_str();
  sweep_cmd->add_option("--cvss-step", cvss_range.step)->capture_default_str();
  sweep_cmd->add_option("--out", sweep_out, "CSV output file (default: stdout)");
  add_config_flags(sweep_cmd, sweep_flags);

  try {
    app.parse(argc, argv);

    if (fetch_nvd->parsed())
      return run_fetch_nvd(nvd_start, nvd_end, nvd_base, nvd_page_size,
                           fetch_out);
    if (fetch_epss->parsed())
      return run_fetch_epss(epss_date, epss_base, fetch_out);
    if (fetch_kev->parsed()) return run_fetch_kev(kev_url, fetch_out);
    if (import_cmd->parsed())
      return run_import(store_path, import_nvd, import_epss, import_kev);
    if (classify_cmd->parsed())
      return run_classify(classify_store, classify_flags, classify_out);
    if (evaluate_cmd->parsed())
      return run_evaluate(evaluate_store, truth_files, truth_labels,
                          truth_sources, evaluate_flags, format, evaluate_out);
    if (sweep_cmd->parsed())
      return run_sweep(sweep_store, sweep_truth, sweep_source, sweep_flags,
                       epss_range, cvss_range, sweep_out);
    return kExitUsage;
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const OutOfRange& e) {
    machine_error("usage", e.what());
    return kExitUsage;
  } catch (const InvalidRange& e) {
    machine_error("usage", e.what());
    return kExitUsage;
  } catch (const TransportError& e) {
    machine_error("transport", e.what());
    return kExitFailure;
  } catch (const RateLimited& e) {
    machine_error("rate-limited", e.what());
    return kExitFailure;
  } catch (const Error& e) {
    machine_error("failure", e.what());
    return kExitFailure;
  } catch (const std::exception& e) {
    machine_error("internal", e.what());
    return kExitFailure;
  }
}
