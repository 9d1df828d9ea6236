#pragma once

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>

#include <json.hpp>
#include <openssl/evp.h>

#include "vulnchain/error.hpp"

namespace vulnchain {

enum class FeedSource { Nvd, Epss, Kev };

inline std::string_view to_string(FeedSource s) {
  switch (s) {
    case FeedSource::Nvd: return "nvd";
    case FeedSource::Epss: return "epss";
    case FeedSource::Kev: return "kev";
  }
  return "nvd";
}

inline std::string sha256_hex(std::string_view payload) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (!EVP_Digest(payload.data(), payload.size(), digest, &length,
                  EVP_sha256(), nullptr))
    throw Error("SHA-256 digest failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(length * 2);
  for (unsigned int i = 0; i < length; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

inline std::string utc_timestamp_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Provenance sidecar for one raw feed snapshot.
struct FeedSnapshotMeta {
  FeedSource source = FeedSource::Nvd;
  std::string fetched_at;  // ISO-8601 UTC
  std::string source_uri;
  std::size_t record_count = 0;
  std::string content_hash;  // SHA-256 of the raw payload
};

inline nlohmann::ordered_json meta_to_json(const FeedSnapshotMeta& meta) {
  nlohmann::ordered_json j;
  j["source"] = to_string(meta.source);
  j["fetched_at"] = meta.fetched_at;
  j["source_uri"] = meta.source_uri;
  j["record_count"] = meta.record_count;
  j["content_hash"] = meta.content_hash;
  return j;
}

inline FeedSnapshotMeta meta_from_json(const nlohmann::json& j) {
  FeedSnapshotMeta meta;
  const std::string source = j.at("source").get<std::string>();
  if (source == "nvd") meta.source = FeedSource::Nvd;
  else if (source == "epss") meta.source = FeedSource::Epss;
  else if (source == "kev") meta.source = FeedSource::Kev;
  else throw SchemaError("unknown snapshot source '" + source + "'");
  meta.fetched_at = j.value("fetched_at", "");
  meta.source_uri = j.value("source_uri", "");
  meta.record_count = j.at("record_count").get<std::size_t>();
  meta.content_hash = j.value("content_hash", "");
  return meta;
}

// Writes the payload byte-exact plus `<name>.meta.json` beside it.
inline std::filesystem::path write_snapshot(
    const std::filesystem::path& directory, const std::string& filename,
    std::string_view payload, FeedSnapshotMeta meta) {
  std::filesystem::create_directories(directory);
  const auto payload_path = directory / filename;
  {
    std::ofstream os(payload_path, std::ios::binary);
    if (!os) throw StorageError("cannot write " + payload_path.string());
    os.write(payload.data(),
             static_cast<std::streamsize>(payload.size()));
    if (!os) throw StorageError("write failed: " + payload_path.string());
  }
  meta.content_hash = sha256_hex(payload);
  const auto meta_path = directory / (filename + ".meta.json");
  std::ofstream os(meta_path, std::ios::binary);
  if (!os) throw StorageError("cannot write " + meta_path.string());
  os << meta_to_json(meta).dump(2) << '\n';
  return payload_path;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw StorageError("cannot read " + path.string());
  std::string data((std::istreambuf_iterator<char>(is)),
                   std::istreambuf_iterator<char>());
  return data;
}

}  // namespace vulnchain
