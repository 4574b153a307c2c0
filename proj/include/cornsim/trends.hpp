#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cornsim/error.hpp"
#include "cornsim/ingest.hpp"

namespace cornsim {

/// Number of historical (and simulated) year blocks.
inline constexpr int kHistoryYears = 49;

struct AnnualMeans {
  int year_index = 0;
  double tmax_mean = 0.0;  // °C
  double tmin_mean = 0.0;  // °C
  double rain_mean = 0.0;  // mm/day
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Historical per-city trends (per year, on the annual-mean series) and the
/// sample variances of those annual means.
struct CityClimateStats {
  int city_index = 0;
  double trend_tmax = 0.0;  // °C / yr
  double trend_tmin = 0.0;  // °C / yr
  double trend_rain = 0.0;  // mm / yr
  double var_tmax = 0.0;    // °C²
  double var_tmin = 0.0;    // °C²
  double var_rain = 0.0;    // mm²
};

inline AnnualMeans annual_means(const YearBlock& block, int year_index = 0) {
  double tx = 0.0, tn = 0.0, rn = 0.0;
  for (const auto& d : block.days) {
    tx += d.tmax;
    tn += d.tmin;
    rn += d.rain;
  }
  constexpr double n = kDaysPerBlock;
  return {year_index, tx / n, tn / n, rn / n};
}

/// Sample mean and (n-1) variance.
inline double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / double(v.size());
}

inline double sample_variance(std::span<const double> v) {
  if (v.size() < 2) throw DataError("sample variance needs at least 2 values");
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return ss / double(v.size() - 1);
}

/// Ordinary least squares fit of ys = intercept + slope * xs. A constant
/// target that is fitted exactly reports r² = 1.
inline LinearFit ols_fit(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw DataError("ols_fit: xs and ys differ in length");
  if (xs.size() < 3) throw DataError("ols_fit: need at least 3 points");
  const double mx = mean_of(xs);
  const double my = mean_of(ys);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw NumericalError("ols_fit: xs are all equal (singular design)");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (fit.intercept + fit.slope * xs[i]);
    sse += e * e;
  }
  if (syy == 0.0) {
    fit.r_squared = 1.0;
  } else {
    fit.r_squared = std::clamp(1.0 - sse / syy, 0.0, 1.0);
  }
  return fit;
}

/// Trends are OLS slopes of the annual means against year index 1..49;
/// variances are the (n-1) sample variances of the same annual means.
inline CityClimateStats estimate_city_climate_stats(std::span<const YearBlock> blocks,
                                                    int city_index) {
  if (blocks.size() != std::size_t(kHistoryYears)) {
    throw DataError("expected " + std::to_string(kHistoryYears) + " year blocks, got " +
                    std::to_string(blocks.size()));
  }
  std::vector<double> idx, tx, tn, rn;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const auto m = annual_means(blocks[i], int(i) + 1);
    idx.push_back(double(i + 1));
    tx.push_back(m.tmax_mean);
    tn.push_back(m.tmin_mean);
    rn.push_back(m.rain_mean);
  }
  CityClimateStats s;
  s.city_index = city_index;
  s.trend_tmax = ols_fit(idx, tx).slope;
  s.trend_tmin = ols_fit(idx, tn).slope;
  s.trend_rain = ols_fit(idx, rn).slope;
  s.var_tmax = sample_variance(tx);
  s.var_tmin = sample_variance(tn);
  s.var_rain = sample_variance(rn);
  return s;
}

}  // namespace cornsim
