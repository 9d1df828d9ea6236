#pragma once

#include <cctype>
#include <charconv>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "vulnchain/error.hpp"

namespace vulnchain {

// Canonical CVE identifier: "CVE-" + 4-digit year (>= 1999) + "-" + 4 or
// more digits. Parsing is case-insensitive on the prefix; the stored form
// is always upper-case. Ordering is numeric (year, then sequence) so that
// CVE-2022-9999 sorts before CVE-2022-10000.
class CveId {
 public:
  CveId() = default;

  static std::optional<CveId> try_parse(std::string_view text) {
    if (text.size() < 13) return std::nullopt;  // "CVE-YYYY-NNNN"
    if ((text[0] != 'C' && text[0] != 'c') ||
        (text[1] != 'V' && text[1] != 'v') ||
        (text[2] != 'E' && text[2] != 'e') || text[3] != '-')
      return std::nullopt;
    std::string_view rest = text.substr(4);
    if (rest.size() < 9 || rest[4] != '-') return std::nullopt;
    std::int32_t year = 0;
    auto [yp, yec] = std::from_chars(rest.data(), rest.data() + 4, year);
    if (yec != std::errc() || yp != rest.data() + 4 || year < 1999)
      return std::nullopt;
    std::string_view seq = rest.substr(5);
    if (seq.size() < 4) return std::nullopt;
    for (char c : seq)
      if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    std::int64_t sequence = 0;
    std::from_chars(seq.data(), seq.data() + seq.size(), sequence);
    CveId id;
    id.value_ = "CVE-";
    id.value_.append(rest);
    id.year_ = year;
    id.sequence_ = sequence;
    return id;
  }

  static CveId parse(std::string_view text) {
    auto id = try_parse(text);
    if (!id)
      throw MalformedCveId("malformed CVE identifier: '" + std::string(text) +
                           "'");
    return *id;
  }

  const std::string& str() const { return value_; }
  std::int32_t year() const { return year_; }
  std::int64_t sequence() const { return sequence_; }

  friend bool operator==(const CveId& a, const CveId& b) {
    return a.value_ == b.value_;
  }
  friend std::strong_ordering operator<=>(const CveId& a, const CveId& b) {
    if (auto c = a.year_ <=> b.year_; c != 0) return c;
    if (auto c = a.sequence_ <=> b.sequence_; c != 0) return c;
    return a.value_ <=> b.value_;  // distinguishes leading-zero forms
  }

 private:
  std::string value_;
  std::int32_t year_ = 0;
  std::int64_t sequence_ = 0;
};

}  // namespace vulnchain
