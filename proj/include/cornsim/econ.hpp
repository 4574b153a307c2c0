#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cornsim/agronomy.hpp"
#include "cornsim/calendar.hpp"
#include "cornsim/climate_sim.hpp"
#include "cornsim/csv.hpp"
#include "cornsim/error.hpp"
#include "cornsim/ingest.hpp"

namespace cornsim {

inline constexpr double kDefaultReferencePrice = 186.12;  // CAD / tonne
inline constexpr double kDefaultFarmArea = 100.0;         // ha

enum class PriceMode { Fixed, Derived };

inline PriceMode parse_price_mode(std::string_view s) {
  if (s == "fixed") return PriceMode::Fixed;
  if (s == "derived") return PriceMode::Derived;
  throw ConfigError("price_mode must be fixed or derived, got '" + std::string(s) + "'");
}

struct PriceConfig {
  PriceMode mode = PriceMode::Fixed;
  double fixed_p = kDefaultReferencePrice;
  double farm_area_a = kDefaultFarmArea;

  void validate() const {
    if (!(fixed_p > 0.0)) throw ConfigError("fixed_price must be positive");
    if (!(farm_area_a > 0.0)) throw ConfigError("farm_area must be positive");
  }
};

/// Neumaier-compensated running sum; order-insensitive to rounding at the
/// scale of the pipeline's reductions.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double compensated_mean(std::span<const double> v) {
  CompensatedSum s;
  for (double x : v) s.add(x);
  return s.value() / double(v.size());
}

/// A historical growing season tagged with its calendar year.
struct DatedSeason {
  int calendar_year = 0;
  GrowingSeason season;
};

/// Seasons of one city, any order.
using CitySeasons = std::vector<DatedSeason>;

/// Reference corn price in CAD/tonne.
///
/// Each market row is converted to inflation-adjusted CAD as
/// corn_usd · usdcad / Π(1 + deflator_s/100), the product running over the
/// calendar years from the first year of the series through the row's year.
/// For every city and year, the local price is the mean adjusted price over the
/// 14 days [mid-6, mid+7] around the season midpoint mid = ⌊(planting+harvest)/2⌋.
/// Local prices are averaged over cities, then over years. Years without any
/// season are skipped.
inline double compute_reference_price(const MarketSeries& market,
                                      std::span<const CitySeasons> seasons) {
  using std::chrono::sys_days;
  if (market.entries.empty()) throw DataError("market series is empty");

  std::map<int, double> deflator;  // first row of each year
  for (const auto& e : market.entries) deflator.try_emplace(int(e.date.year()), e.deflator_pct);
  const int base = deflator.begin()->first;
  std::map<int, double> cumulative;
  double acc = 1.0;
  for (int y = base; y <= deflator.rbegin()->first; ++y) {
    const auto it = deflator.find(y);
    if (it == deflator.end()) {
      throw DataError("market series has no rows in " + std::to_string(y) +
                      " (deflator chain broken)");
    }
    acc *= 1.0 + it->second / 100.0;
    cumulative[y] = acc;
  }

  std::vector<sys_days> dates;
  std::vector<double> adjusted;
  for (const auto& e : market.entries) {
    dates.push_back(sys_days{e.date});
    adjusted.push_back(e.corn_usd * e.usdcad / cumulative.at(int(e.date.year())));
  }
  const sys_days first = dates.front(), last = dates.back();

  std::map<int, std::vector<double>> local_by_year;
  for (const auto& city : seasons) {
    for (const auto& ds : city) {
      if (!deflator.contains(ds.calendar_year)) continue;
      const int mid = (ds.season.planting_day + ds.season.harvest_day) / 2;
      const sys_days lo{date_from_noleap_doy(ds.calendar_year, mid - 6)};
      const sys_days hi{date_from_noleap_doy(ds.calendar_year, mid + 7)};
      if (lo < first || hi > last) {
        throw DataError("price window " + format_iso_date(Date{lo}) + ".." +
                        format_iso_date(Date{hi}) + " lies outside the market series");
      }
      std::vector<double> window;
      const auto begin = std::lower_bound(dates.begin(), dates.end(), lo);
      for (auto it = begin; it != dates.end() && *it <= hi; ++it) {
        window.push_back(adjusted[std::size_t(it - dates.begin())]);
      }
      if (window.empty()) {
        throw DataError("no market rows in price window starting " + format_iso_date(Date{lo}));
      }
      local_by_year[ds.calendar_year].push_back(compensated_mean(window));
    }
  }
  if (local_by_year.empty()) throw DataError("no growing season overlaps the market series");
  std::vector<double> yearly;
  for (const auto& [year, locals] : local_by_year) yearly.push_back(compensated_mean(locals));
  return compensated_mean(yearly);
}

inline double farm_income(double area_ha, double yield_t_per_ha, double price_cad_per_t) {
  return area_ha * yield_t_per_ha * price_cad_per_t;
}

struct IncomePoint {
  int year_index = 0;
  double income = 0.0;  // CAD
};

struct IncomeSeries {
  int city_index = 0;
  int warming_w = 0;
  std::vector<IncomePoint> points;  // years 1..49
  int n_paths = 0;
};

/// Per-path yields arranged year-major: yields[year-1][path].
using YieldMatrix = std::vector<std::vector<double>>;

/// Mean income over paths for each simulated year.
inline IncomeSeries income_from_yields(const YieldMatrix& yields, double area, double price,
                                       int city_index = 0, int warming_w = 0) {
  IncomeSeries out{city_index, warming_w, {}, 0};
  for (std::size_t y = 0; y < yields.size(); ++y) {
    if (yields[y].empty()) throw DataError("income forecast needs at least one path");
    CompensatedSum s;
    for (double v : yields[y]) s.add(farm_income(area, v, price));
    out.points.push_back({int(y) + 1, s.value() / double(yields[y].size())});
    out.n_paths = int(yields[y].size());
  }
  return out;
}

/// Projected yield of every (year, path) of a realization.
inline YieldMatrix realization_yields(std::span<const ClimatePath> realization,
                                      const YieldModel& model, const SeasonRules& rules,
                                      const ChuOptions& chu, ClampCounter& clamps) {
  YieldMatrix ym;
  for (const auto& path : realization) {
    if (ym.empty()) ym.resize(path.blocks.size());
    if (path.blocks.size() != ym.size()) throw DataError("paths differ in year count");
    for (std::size_t y = 0; y < path.blocks.size(); ++y) {
      const auto& block = path.blocks[y];
      const auto season = determine_growing_season(block, int(y) + 1, rules);
      ym[y].push_back(project_yield(model, season_chu(block, season, chu), clamps));
    }
  }
  return ym;
}

inline IncomeSeries income_forecast(std::span<const ClimatePath> realization,
                                    const YieldModel& model, double area, double price,
                                    const SeasonRules& rules = {}, const ChuOptions& chu = {}) {
  if (realization.empty()) throw DataError("income forecast needs a nonempty realization");
  ClampCounter clamps;
  const auto ym = realization_yields(realization, model, rules, chu, clamps);
  return income_from_yields(ym, area, price, realization.front().city_index,
                            realization.front().scenario.warming_w);
}

/// Fixed-price form; the derived price must be computed first and passed
/// explicitly through the other overload.
inline IncomeSeries income_forecast(std::span<const ClimatePath> realization,
                                    const YieldModel& model, const PriceConfig& cfg,
                                    const SeasonRules& rules = {}, const ChuOptions& chu = {}) {
  cfg.validate();
  if (cfg.mode != PriceMode::Fixed) {
    throw ConfigError("derived price mode needs the reference price computed from market data");
  }
  return income_forecast(realization, model, cfg.farm_area_a, cfg.fixed_p, rules, chu);
}

/// Income in the last simulated year minus income in the first.
inline double income_variation(const IncomeSeries& series) {
  if (series.points.empty()) throw DataError("income series is empty");
  return series.points.back().income - series.points.front().income;
}

}  // namespace cornsim
