#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cornsim/calendar.hpp"
#include "cornsim/csv.hpp"
#include "cornsim/error.hpp"

namespace cornsim {

/// t/ha per bu/ac for shelled corn (56 lb bushel). The single place this
/// factor lives.
inline constexpr double kBushelPerAcreToTonnePerHectare = 0.0628;

/// GHCND "missing" sentinel in the value column.
inline constexpr long long kGhcndMissing = -9999;

/// One calendar day of station weather in °C / mm. A field is empty when the
/// station reported nothing for that day.
struct WeatherRecord {
  Date date;
  std::optional<double> tmax;
  std::optional<double> tmin;
  std::optional<double> rain;

  bool complete() const { return tmax && tmin && rain; }
  friend bool operator==(const WeatherRecord&, const WeatherRecord&) = default;
};

/// Contiguous daily station series. Records cover every day from the first to
/// the last date; after fill_gaps every record is complete.
struct DailyWeatherSeries {
  std::string station_id;
  int city_index = 0;
  std::vector<WeatherRecord> records;

  bool complete() const {
    return std::all_of(records.begin(), records.end(),
                       [](const WeatherRecord& r) { return r.complete(); });
  }
  friend bool operator==(const DailyWeatherSeries&, const DailyWeatherSeries&) = default;
};

struct DayWeather {
  double tmax = 0.0;
  double tmin = 0.0;
  double rain = 0.0;
  friend bool operator==(const DayWeather&, const DayWeather&) = default;
};

/// One calendar year of weather, January 1st to December 31st, Feb 29 dropped.
struct YearBlock {
  int year_label = 0;
  std::array<DayWeather, kDaysPerBlock> days{};
  friend bool operator==(const YearBlock&, const YearBlock&) = default;
};

struct YieldEntry {
  int year_index = 0;
  double t_per_ha = 0.0;
};

struct YieldSeries {
  int city_index = 0;
  std::vector<YieldEntry> entries;
};

struct MarketEntry {
  Date date;
  double corn_usd = 0.0;   // USD / tonne
  double usdcad = 0.0;     // CAD per USD
  double deflator_pct = 0.0;  // annual %, applies to the calendar year of `date`
};

struct MarketSeries {
  std::vector<MarketEntry> entries;
};

// ---------------------------------------------------------------------------
// Weather

/// Parses a `date,element,value` CSV. Values are GHCND tenths; TMAX/TMIN become
/// °C and PRCP becomes mm. Other elements are ignored, `-9999` or an empty value
/// marks a missing observation, and days absent from the file are missing.
inline DailyWeatherSeries parse_ghcnd_daily(std::string_view csv_text, std::string station_id) {
  using std::chrono::sys_days;
  struct Obs {
    sys_days day;
    int element;  // 0 tmax, 1 tmin, 2 rain
    std::optional<double> value;
    std::size_t line;
  };
  std::vector<Obs> obs;
  for (const auto& row : csv::read(csv_text, "date,element,value")) {
    const auto& el = row.fields[1];
    int element = -1;
    if (el == "TMAX") element = 0;
    else if (el == "TMIN") element = 1;
    else if (el == "PRCP") element = 2;
    const sys_days day{parse_iso_date(row.fields[0], row.line)};
    if (element < 0) continue;
    std::optional<double> value;
    if (!row.fields[2].empty()) {
      const auto tenths = csv::to_int(row.fields[2], row.line);
      if (tenths != kGhcndMissing) value = double(tenths) / 10.0;
    }
    if (element == 2 && value && *value < 0.0) {
      throw ParseError("negative precipitation", row.line);
    }
    obs.push_back({day, element, value, row.line});
  }
  if (obs.empty()) throw ParseError("no TMAX/TMIN/PRCP rows");

  const auto [lo, hi] = std::minmax_element(
      obs.begin(), obs.end(), [](const Obs& a, const Obs& b) { return a.day < b.day; });
  const sys_days first = lo->day;
  const auto span = std::size_t((hi->day - first).count()) + 1;

  DailyWeatherSeries series;
  series.station_id = std::move(station_id);
  series.records.resize(span);
  std::vector<std::array<std::size_t, 3>> seen(span, {0, 0, 0});
  for (std::size_t i = 0; i < span; ++i) {
    series.records[i].date = Date{first + std::chrono::days{long(i)}};
  }
  for (const auto& o : obs) {
    const auto idx = std::size_t((o.day - first).count());
    auto& slot = seen[idx][std::size_t(o.element)];
    if (slot) {
      throw ParseError("duplicate observation (first seen on line " + std::to_string(slot) + ")",
                       o.line);
    }
    slot = o.line;
    auto& rec = series.records[idx];
    (o.element == 0 ? rec.tmax : o.element == 1 ? rec.tmin : rec.rain) = o.value;
  }
  for (std::size_t i = 0; i < span; ++i) {
    const auto& rec = series.records[i];
    if (rec.tmax && rec.tmin && *rec.tmax < *rec.tmin) {
      throw ParseError("tmax < tmin on " + format_iso_date(rec.date),
                       std::max(seen[i][0], seen[i][1]));
    }
  }
  return series;
}

/// Inverse of parse_ghcnd_daily for the normalized series (values in tenths).
inline std::string serialize_ghcnd_daily(const DailyWeatherSeries& series) {
  std::string out = "date,element,value\n";
  auto emit = [&](const std::string& date, const char* el, const std::optional<double>& v) {
    if (!v) return;
    out += date;
    out += ',';
    out += el;
    out += ',';
    out += std::to_string(std::llround(*v * 10.0));
    out += '\n';
  };
  for (const auto& r : series.records) {
    const auto d = format_iso_date(r.date);
    emit(d, "TMAX", r.tmax);
    emit(d, "TMIN", r.tmin);
    emit(d, "PRCP", r.rain);
  }
  return out;
}

/// Carries the last valid value of each variable forward over missing days.
/// A carried temperature that would cross the observed partner temperature of
/// the same day is clamped to it so tmax >= tmin keeps holding.
inline DailyWeatherSeries fill_gaps(DailyWeatherSeries series) {
  if (series.records.empty()) throw DataError("empty weather series");
  const auto& head = series.records.front();
  if (!head.complete()) {
    throw DataError("station " + series.station_id + ": first day " + format_iso_date(head.date) +
                    " has missing values; nothing to carry forward");
  }
  double tmax = *head.tmax, tmin = *head.tmin, rain = *head.rain;
  for (auto& r : series.records) {
    const bool carried_max = !r.tmax;
    const bool carried_min = !r.tmin;
    if (carried_max) r.tmax = tmax;
    if (carried_min) r.tmin = tmin;
    if (!r.rain) r.rain = rain;
    if (*r.tmax < *r.tmin) {
      if (carried_max && !carried_min) r.tmax = *r.tmin;
      else if (carried_min && !carried_max) r.tmin = *r.tmax;
    }
    tmax = *r.tmax;
    tmin = *r.tmin;
    rain = *r.rain;
  }
  return series;
}

/// Cuts `n_years` calendar-year blocks starting at `start_year`. Feb 29 is
/// dropped so each block has exactly 365 days.
inline std::vector<YearBlock> slice_year_blocks(const DailyWeatherSeries& series, int start_year,
                                                int n_years) {
  using namespace std::chrono;
  std::vector<YearBlock> blocks;
  if (n_years <= 0) return blocks;
  if (series.records.empty()) {
    throw DataError("year " + std::to_string(start_year) + " is not fully covered");
  }
  const sys_days first{series.records.front().date};
  blocks.reserve(std::size_t(n_years));
  for (int y = start_year; y < start_year + n_years; ++y) {
    const sys_days jan1{year{y} / January / 1};
    const sys_days dec31{year{y} / December / 31};
    const auto begin = (jan1 - first).count();
    const auto end = (dec31 - first).count();
    if (begin < 0 || end >= long(series.records.size())) {
      throw DataError("year " + std::to_string(y) + " is not fully covered by station " +
                      series.station_id);
    }
    YearBlock block;
    block.year_label = y;
    std::size_t d = 0;
    for (auto i = begin; i <= end; ++i) {
      const auto& r = series.records[std::size_t(i)];
      if (is_feb29(r.date)) continue;
      if (!r.complete()) {
        throw DataError("year " + std::to_string(y) + " has missing values on " +
                        format_iso_date(r.date) + " (run fill_gaps first)");
      }
      block.days[d++] = DayWeather{*r.tmax, *r.tmin, *r.rain};
    }
    blocks.push_back(block);
  }
  return blocks;
}

// ---------------------------------------------------------------------------
// Yields

/// Parses `year_index,yield_bu_ac` and converts to t/ha. Year indices must run
/// contiguously from 1.
inline YieldSeries parse_yield_table(std::string_view csv_text, int city_index) {
  YieldSeries out;
  out.city_index = city_index;
  for (const auto& row : csv::read(csv_text, "year_index,yield_bu_ac")) {
    const auto h = csv::to_int(row.fields[0], row.line);
    const auto bu = csv::to_double(row.fields[1], row.line);
    const auto expected = static_cast<long long>(out.entries.size()) + 1;
    if (h != expected) {
      throw ParseError("year index " + std::to_string(h) + " where " + std::to_string(expected) +
                           " was expected (gap or disorder)",
                       row.line);
    }
    if (bu <= 0.0) throw ParseError("nonpositive yield", row.line);
    out.entries.push_back({int(h), bu * kBushelPerAcreToTonnePerHectare});
  }
  if (out.entries.empty()) throw ParseError("yield table has no rows");
  return out;
}

inline std::string serialize_yield_table(const YieldSeries& series) {
  std::string out = "year_index,yield_bu_ac\n";
  for (const auto& e : series.entries) {
    out += std::to_string(e.year_index) + ',' +
           csv::fmt(e.t_per_ha / kBushelPerAcreToTonnePerHectare) + '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Market

inline MarketSeries parse_market_series(std::string_view csv_text) {
  MarketSeries out;
  for (const auto& row : csv::read(csv_text, "date,corn_usd,usdcad,deflator_pct")) {
    MarketEntry e;
    e.date = parse_iso_date(row.fields[0], row.line);
    e.corn_usd = csv::to_double(row.fields[1], row.line);
    e.usdcad = csv::to_double(row.fields[2], row.line);
    e.deflator_pct = csv::to_double(row.fields[3], row.line);
    if (!out.entries.empty() &&
        std::chrono::sys_days{e.date} <= std::chrono::sys_days{out.entries.back().date}) {
      throw ParseError("dates must be strictly increasing", row.line);
    }
    if (e.corn_usd <= 0.0) throw ParseError("corn price must be positive", row.line);
    if (e.usdcad <= 0.0) throw ParseError("exchange rate must be positive", row.line);
    if (e.deflator_pct <= -100.0) throw ParseError("deflator must exceed -100%", row.line);
    out.entries.push_back(e);
  }
  if (out.entries.empty()) throw ParseError("market series has no rows");
  return out;
}

inline std::string serialize_market_series(const MarketSeries& series) {
  std::string out = "date,corn_usd,usdcad,deflator_pct\n";
  for (const auto& e : series.entries) {
    out += format_iso_date(e.date) + ',' + csv::fmt(e.corn_usd) + ',' + csv::fmt(e.usdcad) + ',' +
           csv::fmt(e.deflator_pct) + '\n';
  }
  return out;
}

}  // namespace cornsim
