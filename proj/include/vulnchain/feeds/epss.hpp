#pragma once

#include <charconv>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <zlib.h>

#include "vulnchain/date.hpp"
#include "vulnchain/error.hpp"
#include "vulnchain/record.hpp"

namespace vulnchain {

inline bool looks_gzipped(std::string_view payload) {
  return payload.size() >= 2 && static_cast<unsigned char>(payload[0]) == 0x1f &&
         static_cast<unsigned char>(payload[1]) == 0x8b;
}

inline std::string gunzip(std::string_view payload) {
  z_stream strm{};
  if (inflateInit2(&strm, 16 + MAX_WBITS) != Z_OK)
    throw DecompressError("zlib init failed");
  strm.next_in =
      reinterpret_cast<Bytef*>(const_cast<char*>(payload.data()));
  strm.avail_in = static_cast<uInt>(payload.size());

  std::string out;
  char buf[1 << 15];
  int rc = Z_OK;
  do {
    strm.next_out = reinterpret_cast<Bytef*>(buf);
    strm.avail_out = sizeof(buf);
    rc = inflate(&strm, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&strm);
      throw DecompressError(std::string("gzip decompression failed: ") +
                            (strm.msg ? strm.msg : zError(rc)));
    }
    out.append(buf, sizeof(buf) - strm.avail_out);
  } while (rc != Z_STREAM_END);
  inflateEnd(&strm);
  return out;
}

// Parsed daily exploit-probability file.
struct EpssFile {
  std::string model_version;
  Date score_date;
  std::vector<std::pair<CveId, EpssObservation>> rows;  // file order
};

namespace detail {

// Probabilities arrive as decimal text; conversion happens exactly once
// here and the binary value is used unchanged downstream.
inline double parse_probability(std::string_view text, std::size_t row_index,
                                std::string_view column) {
  double value = 0.0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || p != text.data() + text.size())
    throw MalformedRow("row " + std::to_string(row_index) + ": " +
                       std::string(column) + " '" + std::string(text) +
                       "' is not a number");
  if (!(value >= 0.0) || value > 1.0)
    throw MalformedRow("row " + std::to_string(row_index) + ": " +
                       std::string(column) + " " + std::string(text) +
                       " outside [0, 1]");
  return value;
}

inline std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace detail

// Daily feed layout: a `#model_version:<v>,score_date:<date>` comment
// line, a `cve,epss,percentile` header, then one row per CVE. The payload
// may be gzip-compressed; that is detected from the magic bytes, never
// from a file name.
inline EpssFile parse_epss_file(std::string_view payload) {
  std::string decompressed;
  if (looks_gzipped(payload)) {
    decompressed = gunzip(payload);
    payload = decompressed;
  }

  EpssFile out;
  std::size_t pos = 0;
  std::size_t row_index = 0;  // data-row counter, 1-based in messages
  bool saw_comment = false;
  bool saw_header = false;

  while (pos <= payload.size()) {
    const auto nl = payload.find('\n', pos);
    std::string_view line = detail::strip_cr(
        payload.substr(pos, nl == std::string_view::npos ? nl : nl - pos));
    pos = nl == std::string_view::npos ? payload.size() + 1 : nl + 1;
    if (line.empty()) continue;

    if (!saw_comment) {
      if (!line.starts_with("#model_version:"))
        throw MalformedHeader("expected '#model_version:...' comment line");
      std::string_view rest = line.substr(std::string_view("#").size());
      const auto comma = rest.find(',');
      if (comma == std::string_view::npos ||
          !rest.substr(comma + 1).starts_with("score_date:"))
        throw MalformedHeader("comment line missing score_date");
      out.model_version =
          std::string(rest.substr(std::string_view("model_version:").size(),
                                  comma - std::string_view("model_version:").size()));
      auto date = try_parse_date(
          rest.substr(comma + 1 + std::string_view("score_date:").size()));
      if (!date) throw MalformedHeader("unparseable score_date");
      out.score_date = *date;
      saw_comment = true;
      continue;
    }
    if (!saw_header) {
      if (line != "cve,epss,percentile")
        throw MalformedHeader("expected 'cve,epss,percentile' header, got '" +
                              std::string(line) + "'");
      saw_header = true;
      continue;
    }

    ++row_index;
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string_view::npos
                        ? std::string_view::npos
                        : line.find(',', c1 + 1);
    if (c2 == std::string_view::npos ||
        line.find(',', c2 + 1) != std::string_view::npos)
      throw MalformedRow("row " + std::to_string(row_index) +
                         ": expected 3 columns");
    auto cve = CveId::try_parse(line.substr(0, c1));
    if (!cve)
      throw MalformedRow("row " + std::to_string(row_index) +
                         ": malformed CVE id '" +
                         std::string(line.substr(0, c1)) + "'");
    EpssObservation obs;
    obs.score = detail::parse_probability(line.substr(c1 + 1, c2 - c1 - 1),
                                          row_index, "epss");
    obs.percentile =
        detail::parse_probability(line.substr(c2 + 1), row_index, "percentile");
    obs.observed_on = out.score_date;
    out.rows.emplace_back(std::move(*cve), obs);
  }

  if (!saw_comment)
    throw MalformedHeader("empty payload");
  if (!saw_header)
    throw MalformedHeader("missing 'cve,epss,percentile' header");
  return out;
}

}  // namespace vulnchain
