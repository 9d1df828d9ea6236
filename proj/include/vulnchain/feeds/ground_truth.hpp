#pragma once

#include <string>
#include <string_view>

#include "vulnchain/error.hpp"
#include "vulnchain/record.hpp"

namespace vulnchain {

struct GroundTruthImport {
  GroundTruthSet set;
  std::size_t duplicate_count = 0;
};

// Reads a newline-delimited CVE list. `#` starts a comment (whole line or
// trailing); blank lines are skipped; duplicates collapse into the set but
// stay counted so curation slip-ups are visible.
inline GroundTruthImport import_ground_truth(std::string_view payload,
                                             GroundTruthSource source,
                                             std::string label) {
  GroundTruthImport out;
  out.set.label = std::move(label);
  out.set.source = source;

  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos <= payload.size()) {
    const auto nl = payload.find('\n', pos);
    std::string_view line =
        payload.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    pos = nl == std::string_view::npos ? payload.size() + 1 : nl + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t' ||
                             line.back() == '\r'))
      line.remove_suffix(1);
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t'))
      line.remove_prefix(1);
    if (line.empty()) continue;

    auto cve = CveId::try_parse(line);
    if (!cve)
      throw MalformedCveId("line " + std::to_string(line_no) +
                           ": malformed CVE id '" + std::string(line) + "'");
    if (!out.set.exploited.insert(std::move(*cve)).second)
      ++out.duplicate_count;
  }
  return out;
}

}  // namespace vulnchain
