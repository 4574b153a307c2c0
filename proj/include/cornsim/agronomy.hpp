#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cornsim/calendar.hpp"
#include "cornsim/csv.hpp"
#include "cornsim/error.hpp"
#include "cornsim/ingest.hpp"

namespace cornsim {

inline constexpr int kSeasonHalfWindow = 15;

struct GrowingSeason {
  int year_index = 0;
  int planting_day = 0;  // 1-based day of the 365-day year
  int harvest_day = 0;
  int length_days = 0;   // harvest_day - planting_day + 1
  friend bool operator==(const GrowingSeason&, const GrowingSeason&) = default;
};

struct SeasonRules {
  /// A day is wet when rain exceeds this many mm, dry otherwise.
  double rain_threshold_mm = 0.0;
};

struct ChuOptions {
  /// Floor each day's CHU at zero before summing.
  bool floor_zero = false;
};

struct YieldModel {
  double c0 = 0.0;   // t/ha
  double c1 = 0.0;   // t/ha per year (technology trend)
  double c2 = 0.0;   // t/ha per CHU
  double gof = 0.0;  // R²
};

struct ChuEntry {
  int year_index = 0;
  double h = 0.0;
};

struct ChuSeries {
  int city_index = 0;
  std::vector<ChuEntry> values;
};

namespace detail {

// Day after the first run of three qualifying days that ends before the
// fallback day; the fallback day itself when there is none.
template <class Pred>
int first_triple_boundary(std::span<const double> rain, int anchor, Pred qualifies) {
  const int first = anchor - kSeasonHalfWindow;
  const int fallback = anchor + kSeasonHalfWindow;
  int run = 0;
  for (int day = first; day < fallback; ++day) {
    run = qualifies(rain[std::size_t(day - 1)]) ? run + 1 : 0;
    if (run == 3) return day + 1;
  }
  return fallback;
}

}  // namespace detail

/// Planting: day after the first three consecutive wet days inside
/// [D1-15, D1+14], else D1+15. Harvest: the same with dry days around D2.
inline GrowingSeason determine_growing_season(std::span<const double> rain_days, int year_index,
                                              const SeasonRules& rules = {}) {
  if (rain_days.size() != std::size_t(kDaysPerBlock)) {
    throw DataError("growing season needs 365 daily rain values, got " +
                    std::to_string(rain_days.size()));
  }
  const double t = rules.rain_threshold_mm;
  GrowingSeason s;
  s.year_index = year_index;
  s.planting_day = detail::first_triple_boundary(rain_days, kPlantingAnchorDay,
                                                 [t](double r) { return r > t; });
  s.harvest_day = detail::first_triple_boundary(rain_days, kHarvestAnchorDay,
                                                [t](double r) { return r <= t; });
  s.length_days = s.harvest_day - s.planting_day + 1;
  return s;
}

inline GrowingSeason determine_growing_season(const YearBlock& block, int year_index,
                                              const SeasonRules& rules = {}) {
  std::array<double, kDaysPerBlock> rain{};
  for (std::size_t d = 0; d < rain.size(); ++d) rain[d] = block.days[d].rain;
  return determine_growing_season(rain, year_index, rules);
}

/// Daily corn heat units, ½[1.8(Tmin−4.4) + 3.3(Tmax−10) − 0.084(Tmax−10)²].
inline double daily_chu(double tmin, double tmax, const ChuOptions& opts = {}) {
  const double dx = tmax - 10.0;
  const double v = 0.5 * (1.8 * (tmin - 4.4) + 3.3 * dx - 0.084 * dx * dx);
  return opts.floor_zero && v < 0.0 ? 0.0 : v;
}

/// Sum of daily CHU from planting_day to harvest_day inclusive.
inline double season_chu(const YearBlock& block, const GrowingSeason& season,
                         const ChuOptions& opts = {}) {
  if (season.planting_day < 1 || season.harvest_day > kDaysPerBlock ||
      season.harvest_day < season.planting_day) {
    throw DataError("growing season outside [1,365]");
  }
  double h = 0.0;
  for (int d = season.planting_day; d <= season.harvest_day; ++d) {
    const auto& w = block.days[std::size_t(d - 1)];
    h += daily_chu(w.tmin, w.tmax, opts);
  }
  return h;
}

/// Least-squares fit of Y = c0 + c1·h + c2·H with R² as goodness of fit.
inline YieldModel fit_yield_model(std::span<const double> year_indices, std::span<const double> chu,
                                  std::span<const double> yields) {
  const auto n = year_indices.size();
  if (chu.size() != n || yields.size() != n) {
    throw DataError("fit_yield_model: inputs differ in length");
  }
  if (n < 4) throw DataError("fit_yield_model: need at least 4 observations");
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(Eigen::Index(n), 3);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(Eigen::Index(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = Eigen::Index(i);
    x(r, 0) = 1.0;
    x(r, 1) = year_indices[i];
    x(r, 2) = chu[i];
    y(r) = yields[i];
  }
  // Column scaling keeps the rank decision independent of CHU magnitude.
  const Eigen::Vector3d scale = x.colwise().norm().transpose();
  if ((scale.array() == 0.0).any()) {
    throw NumericalError("fit_yield_model: design has an all-zero column");
  }
  const Eigen::MatrixXd xs = x * scale.cwiseInverse().asDiagonal();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xs);
  qr.setThreshold(1e-10);
  if (qr.rank() < 3) {
    throw NumericalError("fit_yield_model: design [1, h, H] is rank deficient");
  }
  const Eigen::Vector3d beta = qr.solve(y).cwiseQuotient(scale);
  const Eigen::VectorXd resid = y - x * beta;
  const double sse = resid.squaredNorm();
  const double sst = (y.array() - y.mean()).square().sum();
  YieldModel m{beta(0), beta(1), beta(2), 1.0};
  if (sst > 0.0) m.gof = std::clamp(1.0 - sse / sst, 0.0, 1.0);
  return m;
}

/// Counts projections that came out negative and were clamped to zero.
struct ClampCounter {
  std::size_t clamped = 0;
};

/// Future yield without the technology trend: c0 + c2·H, floored at zero.
inline double project_yield(const YieldModel& model, double h_chu, ClampCounter& counter) {
  const double y = model.c0 + model.c2 * h_chu;
  if (y < 0.0) {
    ++counter.clamped;
    return 0.0;
  }
  return y;
}

inline double project_yield(const YieldModel& model, double h_chu) {
  ClampCounter ignored;
  return project_yield(model, h_chu, ignored);
}

/// Season and CHU of each year of `blocks`, year index starting at 1.
struct SeasonalChu {
  std::vector<GrowingSeason> seasons;
  ChuSeries chu;
};

inline SeasonalChu seasonal_chu(std::span<const YearBlock> blocks, int city_index,
                                const SeasonRules& rules = {}, const ChuOptions& opts = {}) {
  SeasonalChu out;
  out.chu.city_index = city_index;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const int year = int(i) + 1;
    const auto season = determine_growing_season(blocks[i], year, rules);
    out.seasons.push_back(season);
    out.chu.values.push_back({year, season_chu(blocks[i], season, opts)});
  }
  return out;
}

inline std::string serialize_seasons(std::span<const GrowingSeason> seasons) {
  std::string out = "year,planting_day,harvest_day,length\n";
  for (const auto& s : seasons) {
    out += std::to_string(s.year_index) + ',' + std::to_string(s.planting_day) + ',' +
           std::to_string(s.harvest_day) + ',' + std::to_string(s.length_days) + '\n';
  }
  return out;
}

inline std::string serialize_chu(const ChuSeries& chu) {
  std::string out = "year,H\n";
  for (const auto& e : chu.values) out += std::to_string(e.year_index) + ',' + csv::fmt(e.h) + '\n';
  return out;
}

}  // namespace cornsim
