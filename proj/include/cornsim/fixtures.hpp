#pragma once

// Synthetic station weather, county yields and market series shaped like the
// Ontario inputs the pipeline expects. Used for tests, demos and benchmarking
// when the real station/yield files are not at hand.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cornsim/agronomy.hpp"
#include "cornsim/calendar.hpp"
#include "cornsim/ingest.hpp"
#include "cornsim/random.hpp"
#include "cornsim/trends.hpp"

namespace cornsim::fixtures {

struct CityPreset {
  std::string name;
  int index = 0;
  std::string station_id;
  double tmax_annual_mean = 11.5;  // °C
  double tmax_amplitude = 14.0;    // °C, half of the seasonal swing
  double diurnal_range = 10.0;     // °C
  double trend_tmax = 0.0;         // °C / yr
  double trend_tmin = 0.0;         // °C / yr
  double trend_rain = 0.0;         // mm/day / yr
  double anomaly_sd_tmax = 0.7;    // °C, year-to-year
  double anomaly_sd_tmin = 0.8;
  YieldModel yield_truth{};
};

struct WeatherOptions {
  int start_year = 1970;
  int n_years = kHistoryYears;
  double daily_noise_sd = 2.5;
  double daily_noise_ar = 0.6;
  double p_wet_after_dry = 0.30;
  double p_wet_after_wet = 0.50;
  double rain_gamma_shape = 0.6;
  double mean_wet_amount = 6.0;  // mm
  double missing_rate = 5e-4;
  /// Cap on tmax (°C) before tenths rounding; infinity disables it.
  double tmax_cap = std::numeric_limits<double>::infinity();
};

/// Ten Ontario stations. Trends are per year; yield_truth holds the county
/// regression coefficients and their fit quality.
inline std::vector<CityPreset> ontario_presets() {
  return {
      {"brockville", 1, "CA006100971", 11.3, 14.0, 10.0, 0.0456, 0.0457, -0.0116, 0.70, 0.80,
       {1.19, 1.21e-1, 8.68e-4, 0.8286}},
      {"cornwall", 2, "CA006101874", 11.2, 14.5, 10.0, 0.0547, 0.0433, 0.0052, 0.60, 0.70,
       {6.37e-1, 1.44e-1, 1.18e-3, 0.8822}},
      {"fergus", 3, "CA006142400", 11.0, 13.5, 10.5, 0.0246, 0.0784, 0.0072, 0.90, 0.70,
       {5.67e-1, 1.19e-1, 1.44e-3, 0.8207}},
      {"kapuskasing", 4, "CA006073975", 6.5, 15.5, 12.0, 0.0291, 0.0348, 0.0078, 1.00, 1.10,
       {3.00, 8.60e-2, 4.68e-6, 0.4203}},
      {"kingsville", 5, "CA006134190", 14.5, 13.0, 9.0, 0.0219, 0.0364, 0.0020, 0.80, 1.20,
       {4.36, 1.48e-1, -4.00e-5, 0.6232}},
      {"north_bay", 6, "CA006085700", 8.8, 14.5, 10.5, 0.0472, 0.0255, -0.0139, 0.90, 1.05,
       {1.59, 7.67e-2, 8.13e-4, 0.4344}},
      {"ottawa", 7, "CA006105976", 11.0, 14.5, 10.0, 0.0402, 0.0415, 0.0114, 0.75, 0.60,
       {4.26, 1.45e-1, -1.50e-4, 0.8226}},
      {"toronto", 8, "CA006158733", 12.8, 13.5, 10.0, 0.0450, 0.0617, 0.0033, 0.90, 1.00,
       {3.90, 1.14e-1, 7.33e-5, 0.7675}},
      {"trenton", 9, "CA006158875", 12.0, 13.5, 10.0, 0.0264, 0.0326, 0.0132, 0.80, 0.80,
       {2.81, 1.08e-1, 3.30e-4, 0.6785}},
      {"woodstock", 10, "CA006149625", 12.5, 13.5, 10.0, 0.0323, 0.0245, 0.0143, 0.90, 0.85,
       {3.49, 1.36e-1, 5.91e-4, 0.8645}},
  };
}

inline std::optional<CityPreset> find_preset(const std::string& name) {
  for (auto& p : ontario_presets()) {
    if (p.name == name) return p;
  }
  return std::nullopt;
}

inline double round_tenths(double v) { return std::round(v * 10.0) / 10.0 + 0.0; }

/// Daily station series for `preset` covering the requested years, values
/// rounded to tenths, with a sprinkle of missing observations (never on the
/// first day).
inline DailyWeatherSeries synthetic_weather(const CityPreset& preset, std::uint64_t seed,
                                            const WeatherOptions& opt = {}) {
  using namespace std::chrono;
  std::mt19937_64 rng(child_seed(seed, std::uint64_t(preset.index)));
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::gamma_distribution<double> amount(opt.rain_gamma_shape,
                                         opt.mean_wet_amount / opt.rain_gamma_shape);

  const double p_wet = opt.p_wet_after_dry / (1.0 + opt.p_wet_after_dry - opt.p_wet_after_wet);
  const double base_daily_rain = p_wet * opt.mean_wet_amount;
  const double mid_year = (opt.n_years + 1) / 2.0;

  DailyWeatherSeries s;
  s.station_id = preset.station_id;
  s.city_index = preset.index;
  sys_days day{year{opt.start_year} / January / 1};
  const sys_days end{year{opt.start_year + opt.n_years - 1} / December / 31};
  double noise_max = 0.0, noise_min = 0.0;
  bool wet = false;
  int year_idx = 0, current_year = opt.start_year - 1;
  double anomaly_max = 0.0, anomaly_min = 0.0, rain_scale = 1.0;
  for (; day <= end; day += days{1}) {
    const year_month_day ymd{day};
    if (int(ymd.year()) != current_year) {
      current_year = int(ymd.year());
      ++year_idx;
      anomaly_max = preset.anomaly_sd_tmax * normal(rng);
      anomaly_min = preset.anomaly_sd_tmin * normal(rng);
      rain_scale = std::max(0.05, 1.0 + preset.trend_rain * (year_idx - mid_year) / base_daily_rain);
    }
    const int doy = (day - sys_days{ymd.year() / January / 1}).count() + 1;
    const double phase = 2.0 * std::numbers::pi * (doy - 110) / 365.25;
    const double ar = opt.daily_noise_ar, innov = opt.daily_noise_sd * std::sqrt(1 - ar * ar);
    noise_max = ar * noise_max + innov * normal(rng);
    noise_min = ar * noise_min + innov * normal(rng);
    double tmax = preset.tmax_annual_mean + preset.tmax_amplitude * std::sin(phase) +
                  preset.trend_tmax * (year_idx - mid_year) + anomaly_max + noise_max;
    tmax = std::min(tmax, opt.tmax_cap);
    double tmin = tmax - preset.diurnal_range + (preset.trend_tmin - preset.trend_tmax) *
                                                    (year_idx - mid_year) +
                  (anomaly_min - anomaly_max) + 0.6 * (noise_min - noise_max);
    tmin = std::min(tmin, tmax);
    wet = unif(rng) < (wet ? opt.p_wet_after_wet : opt.p_wet_after_dry);
    const double rain = wet ? amount(rng) * rain_scale : 0.0;

    WeatherRecord r;
    r.date = ymd;
    r.tmax = round_tenths(tmax);
    r.tmin = std::min(round_tenths(tmin), *r.tmax);
    r.rain = round_tenths(rain);
    if (!s.records.empty()) {
      if (unif(rng) < opt.missing_rate) r.tmax.reset();
      if (unif(rng) < opt.missing_rate) r.tmin.reset();
      if (unif(rng) < opt.missing_rate) r.rain.reset();
    }
    s.records.push_back(r);
  }
  return s;
}

/// County yields generated from the preset's regression truth and the CHU of
/// the given historical blocks, plus Gaussian noise; stored in t/ha rounded to
/// the nearest 0.1 bu/ac.
inline YieldSeries synthetic_yields(const CityPreset& preset, std::span<const YearBlock> blocks,
                                    std::uint64_t seed, double noise_sd = 0.75) {
  std::mt19937_64 rng(child_seed(seed ^ 0x5969656c64ULL, std::uint64_t(preset.index)));
  std::normal_distribution<double> normal(0.0, noise_sd);
  const auto hist = seasonal_chu(blocks, preset.index);
  YieldSeries out;
  out.city_index = preset.index;
  for (const auto& e : hist.chu.values) {
    const auto& m = preset.yield_truth;
    double y = m.c0 + m.c1 * e.year_index + m.c2 * e.h + normal(rng);
    y = std::max(y, 0.5);
    const double bu = std::round(y / kBushelPerAcreToTonnePerHectare * 10.0) / 10.0;
    out.entries.push_back({e.year_index, bu * kBushelPerAcreToTonnePerHectare});
  }
  return out;
}

/// Daily corn futures / FX / deflator series over [first_year, last_year].
inline MarketSeries synthetic_market(int first_year, int last_year, std::uint64_t seed) {
  using namespace std::chrono;
  std::mt19937_64 rng(child_seed(seed, 0x6d6b74ULL));
  std::normal_distribution<double> normal(0.0, 1.0);
  MarketSeries m;
  double log_corn = std::log(170.0), log_fx = std::log(1.20);
  std::map<int, double> deflator;
  for (sys_days d{year{first_year} / January / 1}; d <= sys_days{year{last_year} / December / 31};
       d += days{1}) {
    const year_month_day ymd{d};
    if (ymd.month() == January && ymd.day() == day{1}) {
      deflator[int(ymd.year())] = std::round((1.8 + 0.6 * normal(rng)) * 100.0) / 100.0;
    }
    log_corn += 0.012 * normal(rng) - 0.0005 * (log_corn - std::log(170.0));
    log_fx += 0.004 * normal(rng) - 0.001 * (log_fx - std::log(1.20));
    m.entries.push_back({ymd, std::round(std::exp(log_corn) * 100.0) / 100.0,
                         std::round(std::exp(log_fx) * 10000.0) / 10000.0,
                         deflator[int(ymd.year())]});
  }
  return m;
}

}  // namespace cornsim::fixtures
