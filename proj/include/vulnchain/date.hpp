#pragma once

#include <charconv>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace vulnchain {

// Calendar date (proleptic Gregorian). All feed timestamps are reduced to
// the UTC calendar day; nothing in the pipeline needs finer resolution.
struct Date {
  std::int32_t year = 1970;
  std::uint32_t month = 1;
  std::uint32_t day = 1;

  friend constexpr auto operator<=>(const Date&, const Date&) = default;
};

constexpr bool is_leap_year(std::int32_t y) {
  return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

constexpr std::uint32_t days_in_month(std::int32_t y, std::uint32_t m) {
  constexpr std::uint32_t lengths[] = {31, 28, 31, 30, 31, 30,
                                       31, 31, 30, 31, 30, 31};
  if (m < 1 || m > 12) return 0;
  if (m == 2 && is_leap_year(y)) return 29;
  return lengths[m - 1];
}

constexpr bool is_valid(const Date& d) {
  return d.month >= 1 && d.month <= 12 && d.day >= 1 &&
         d.day <= days_in_month(d.year, d.month);
}

// Days since 1970-01-01 (Howard Hinnant's civil-days algorithm).
constexpr std::int64_t to_epoch_days(const Date& d) {
  std::int64_t y = d.year;
  const std::int64_t m = d.month;
  const std::int64_t dd = d.day;
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const std::int64_t yoe = y - era * 400;
  const std::int64_t doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + dd - 1;
  const std::int64_t doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + doe - 719468;
}

constexpr Date from_epoch_days(std::int64_t z) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const std::int64_t doe = z - era * 146097;
  const std::int64_t yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = yoe + era * 400;
  const std::int64_t doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const std::int64_t mp = (5 * doy + 2) / 153;
  const std::int64_t dd = doy - (153 * mp + 2) / 5 + 1;
  const std::int64_t m = mp + (mp < 10 ? 3 : -9);
  return Date{static_cast<std::int32_t>(y + (m <= 2)),
              static_cast<std::uint32_t>(m), static_cast<std::uint32_t>(dd)};
}

constexpr Date plus_days(const Date& d, std::int64_t n) {
  return from_epoch_days(to_epoch_days(d) + n);
}

// Accepts "YYYY-MM-DD"; a trailing time component ("T..." or " ...") is
// ignored so NVD/KEV timestamps parse directly.
inline std::optional<Date> try_parse_date(std::string_view text) {
  if (text.size() > 10 && (text[10] == 'T' || text[10] == ' '))
    text = text.substr(0, 10);
  if (text.size() != 10 || text[4] != '-' || text[7] != '-')
    return std::nullopt;
  auto to_int = [](std::string_view s, auto& out) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size();
  };
  Date d;
  if (!to_int(text.substr(0, 4), d.year) ||
      !to_int(text.substr(5, 2), d.month) ||
      !to_int(text.substr(8, 2), d.day))
    return std::nullopt;
  if (!is_valid(d)) return std::nullopt;
  return d;
}

inline std::string to_string(const Date& d) {
  char buf[11];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", d.year, d.month, d.day);
  return std::string(buf);
}

}  // namespace vulnchain
