#pragma once

#include <array>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <string>
#include <string_view>

#include "cornsim/error.hpp"

namespace cornsim {

using Date = std::chrono::year_month_day;

inline constexpr int kDaysPerBlock = 365;

/// Day-of-year anchors on the 365-day (no Feb 29) calendar, 1-based.
inline constexpr int kPlantingAnchorDay = 152;  // June 1
inline constexpr int kHarvestAnchorDay = 298;   // October 25

inline constexpr std::array<int, 12> kMonthLengths = {31, 28, 31, 30, 31, 30,
                                                      31, 31, 30, 31, 30, 31};

/// Parses a strict ISO-8601 `YYYY-MM-DD` date. Throws ParseError.
inline Date parse_iso_date(std::string_view text, std::size_t line = 0) {
  auto field = [&](std::size_t pos, std::size_t len) {
    int v = 0;
    const char* first = text.data() + pos;
    auto [ptr, ec] = std::from_chars(first, first + len, v);
    if (ec != std::errc{} || ptr != first + len) {
      throw ParseError("bad date '" + std::string(text) + "'", line);
    }
    return v;
  };
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
    throw ParseError("bad date '" + std::string(text) + "'", line);
  }
  const Date d{std::chrono::year{field(0, 4)}, std::chrono::month{unsigned(field(5, 2))},
               std::chrono::day{unsigned(field(8, 2))}};
  if (!d.ok()) throw ParseError("invalid calendar date '" + std::string(text) + "'", line);
  return d;
}

inline std::string format_iso_date(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", int(d.year()), unsigned(d.month()),
                unsigned(d.day()));
  return buf;
}

inline Date next_day(const Date& d) {
  return Date{std::chrono::sys_days{d} + std::chrono::days{1}};
}

inline bool is_feb29(const Date& d) {
  return d.month() == std::chrono::February && d.day() == std::chrono::day{29};
}

/// Month/day of a 1-based day-of-year on the no-leap calendar, placed in `year`.
inline Date date_from_noleap_doy(int year, int doy) {
  if (doy < 1 || doy > kDaysPerBlock) {
    throw DataError("day-of-year " + std::to_string(doy) + " outside [1,365]");
  }
  unsigned m = 0;
  while (doy > kMonthLengths[m]) doy -= kMonthLengths[m++];
  return Date{std::chrono::year{year}, std::chrono::month{m + 1}, std::chrono::day{unsigned(doy)}};
}

}  // namespace cornsim
