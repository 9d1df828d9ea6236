#pragma once

#include <array>
#include <cmath>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

#include "vulnchain/error.hpp"

namespace vulnchain {

enum class CvssVersion { V3_0, V3_1 };

inline std::string_view to_string(CvssVersion v) {
  return v == CvssVersion::V3_0 ? "3.0" : "3.1";
}

enum class SeverityBand { None, Low, Medium, High, Critical };

inline std::string_view to_string(SeverityBand b) {
  switch (b) {
    case SeverityBand::None: return "None";
    case SeverityBand::Low: return "Low";
    case SeverityBand::Medium: return "Medium";
    case SeverityBand::High: return "High";
    case SeverityBand::Critical: return "Critical";
  }
  return "None";
}

enum class AttackVector { Network, Adjacent, Local, Physical };
enum class AttackComplexity { Low, High };
enum class PrivilegesRequired { None, Low, High };
enum class UserInteraction { None, Required };
enum class Scope { Unchanged, Changed };
enum class Impact { None, Low, High };  // shared by C/I/A

// The eight mandatory base metrics of a v3.x vector.
struct CvssVector {
  AttackVector attack_vector = AttackVector::Network;
  AttackComplexity attack_complexity = AttackComplexity::Low;
  PrivilegesRequired privileges_required = PrivilegesRequired::None;
  UserInteraction user_interaction = UserInteraction::None;
  Scope scope = Scope::Unchanged;
  Impact confidentiality = Impact::None;
  Impact integrity = Impact::None;
  Impact availability = Impact::None;

  friend constexpr auto operator<=>(const CvssVector&,
                                    const CvssVector&) = default;
};

// CVSS scores are published at one-decimal precision; all comparisons run
// on integer tenths so threshold equality is exact.
inline int score_tenths(double score) {
  return static_cast<int>(std::lround(score * 10.0));
}

inline SeverityBand severity_band(double score) {
  if (!(score >= 0.0) || score > 10.0)
    throw OutOfRange("CVSS score out of range: " + std::to_string(score));
  const int t = score_tenths(score);
  if (t >= 90) return SeverityBand::Critical;
  if (t >= 70) return SeverityBand::High;
  if (t >= 40) return SeverityBand::Medium;
  if (t >= 1) return SeverityBand::Low;
  return SeverityBand::None;
}

namespace detail {

inline char code_of(AttackVector v) {
  switch (v) {
    case AttackVector::Network: return 'N';
    case AttackVector::Adjacent: return 'A';
    case AttackVector::Local: return 'L';
    case AttackVector::Physical: return 'P';
  }
  return '?';
}
inline char code_of(AttackComplexity v) {
  return v == AttackComplexity::Low ? 'L' : 'H';
}
inline char code_of(PrivilegesRequired v) {
  switch (v) {
    case PrivilegesRequired::None: return 'N';
    case PrivilegesRequired::Low: return 'L';
    case PrivilegesRequired::High: return 'H';
  }
  return '?';
}
inline char code_of(UserInteraction v) {
  return v == UserInteraction::None ? 'N' : 'R';
}
inline char code_of(Scope v) { return v == Scope::Unchanged ? 'U' : 'C'; }
inline char code_of(Impact v) {
  switch (v) {
    case Impact::None: return 'N';
    case Impact::Low: return 'L';
    case Impact::High: return 'H';
  }
  return '?';
}

}  // namespace detail

inline CvssVersion cvss_vector_version(std::string_view text) {
  if (text.starts_with("CVSS:3.0/")) return CvssVersion::V3_0;
  if (text.starts_with("CVSS:3.1/")) return CvssVersion::V3_1;
  throw MalformedVector("unsupported CVSS vector prefix: '" +
                        std::string(text.substr(0, text.find('/'))) + "'");
}

// Parses a v3.x vector string. The eight base metrics are mandatory;
// metric keys beyond those eight (temporal, environmental, ...) are
// ignored. An unknown value code on a base metric is an error.
inline CvssVector parse_cvss_vector(std::string_view text) {
  cvss_vector_version(text);  // validates the prefix
  std::string_view body = text.substr(9);

  CvssVector vec;
  std::array<bool, 8> seen{};
  auto bad = [&](std::string_view key, std::string_view val) -> MalformedVector {
    return MalformedVector("bad value '" + std::string(val) +
                           "' for CVSS metric " + std::string(key));
  };

  while (!body.empty()) {
    const auto slash = body.find('/');
    std::string_view part = body.substr(0, slash);
    body = slash == std::string_view::npos ? std::string_view{}
                                           : body.substr(slash + 1);
    const auto colon = part.find(':');
    if (colon == std::string_view::npos || colon == 0 ||
        colon + 1 >= part.size())
      throw MalformedVector("malformed CVSS vector component: '" +
                            std::string(part) + "'");
    std::string_view key = part.substr(0, colon);
    std::string_view val = part.substr(colon + 1);

    if (key == "AV") {
      if (val == "N") vec.attack_vector = AttackVector::Network;
      else if (val == "A") vec.attack_vector = AttackVector::Adjacent;
      else if (val == "L") vec.attack_vector = AttackVector::Local;
      else if (val == "P") vec.attack_vector = AttackVector::Physical;
      else throw bad(key, val);
      seen[0] = true;
    } else if (key == "AC") {
      if (val == "L") vec.attack_complexity = AttackComplexity::Low;
      else if (val == "H") vec.attack_complexity = AttackComplexity::High;
      else throw bad(key, val);
      seen[1] = true;
    } else if (key == "PR") {
      if (val == "N") vec.privileges_required = PrivilegesRequired::None;
      else if (val == "L") vec.privileges_required = PrivilegesRequired::Low;
      else if (val == "H") vec.privileges_required = PrivilegesRequired::High;
      else throw bad(key, val);
      seen[2] = true;
    } else if (key == "UI") {
      if (val == "N") vec.user_interaction = UserInteraction::None;
      else if (val == "R") vec.user_interaction = UserInteraction::Required;
      else throw bad(key, val);
      seen[3] = true;
    } else if (key == "S") {
      if (val == "U") vec.scope = Scope::Unchanged;
      else if (val == "C") vec.scope = Scope::Changed;
      else throw bad(key, val);
      seen[4] = true;
    } else if (key == "C" || key == "I" || key == "A") {
      Impact impact;
      if (val == "N") impact = Impact::None;
      else if (val == "L") impact = Impact::Low;
      else if (val == "H") impact = Impact::High;
      else throw bad(key, val);
      if (key == "C") { vec.confidentiality = impact; seen[5] = true; }
      else if (key == "I") { vec.integrity = impact; seen[6] = true; }
      else { vec.availability = impact; seen[7] = true; }
    }
    // anything else: optional metric group, skipped
  }

  static constexpr std::string_view names[] = {"AV", "AC", "PR", "UI",
                                               "S",  "C",  "I",  "A"};
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (!seen[i])
      throw MalformedVector("CVSS vector missing mandatory metric " +
                            std::string(names[i]));
  return vec;
}

// Canonical serialization: prefix followed by the eight base metrics in
// specification order.
inline std::string serialize_cvss_vector(const CvssVector& v,
                                         CvssVersion version) {
  std::string out = "CVSS:";
  out += to_string(version);
  using detail::code_of;
  const char metrics[] = {code_of(v.attack_vector),
                          code_of(v.attack_complexity),
                          code_of(v.privileges_required),
                          code_of(v.user_interaction),
                          code_of(v.scope),
                          code_of(v.confidentiality),
                          code_of(v.integrity),
                          code_of(v.availability)};
  static constexpr std::string_view keys[] = {"/AV:", "/AC:", "/PR:", "/UI:",
                                              "/S:",  "/C:",  "/I:",  "/A:"};
  for (std::size_t i = 0; i < 8; ++i) {
    out += keys[i];
    out += metrics[i];
  }
  return out;
}

// One CVE's technical-severity metric as published: a 0.0-10.0 base score
// (0.1 quantized), the scoring standard version, and optionally the raw
// vector. Scores are ingested, never recomputed from vectors.
class CvssMetric {
 public:
  CvssMetric(double base_score, CvssVersion version,
             std::optional<CvssVector> vector = std::nullopt)
      : version_(version), vector_(std::move(vector)) {
    if (!(base_score >= 0.0) || base_score > 10.0)
      throw OutOfRange("CVSS base score out of range: " +
                       std::to_string(base_score));
    tenths_ = score_tenths(base_score);
  }

  double base_score() const { return tenths_ / 10.0; }
  int tenths() const { return tenths_; }
  CvssVersion version() const { return version_; }
  const std::optional<CvssVector>& vector() const { return vector_; }
  SeverityBand band() const { return severity_band(base_score()); }

  friend bool operator==(const CvssMetric& a, const CvssMetric& b) {
    return a.tenths_ == b.tenths_ && a.version_ == b.version_ &&
           a.vector_ == b.vector_;
  }

 private:
  int tenths_ = 0;
  CvssVersion version_;
  std::optional<CvssVector> vector_;
};

}  // namespace vulnchain
