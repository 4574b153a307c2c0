#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "cornsim/csv.hpp"
#include "cornsim/error.hpp"
#include "cornsim/gev.hpp"
#include "cornsim/trends.hpp"

namespace cornsim {

/// 100 · sample standard deviation / |mean|.
inline double coefficient_of_variation(std::span<const double> values) {
  if (values.size() < 2) throw DataError("coefficient of variation needs at least 2 values");
  const double m = mean_of(values);
  if (m == 0.0) throw NumericalError("coefficient of variation undefined for zero mean");
  return 100.0 * std::sqrt(sample_variance(values)) / std::abs(m);
}

/// Per-year GEV fits of one realization; index = simulated year - 1.
using RealizationFits = std::vector<GevParams>;

struct StabilityReport {
  int city_index = 0;
  int warming_w = 0;
  double avg_cv_k = 0.0;      // %
  double avg_cv_sigma = 0.0;  // %
  double avg_cv_mu = 0.0;     // %
};

/// For each year, the CV of each coefficient across realizations; then the
/// mean of those CVs over the years.
inline StabilityReport stability_report(std::span<const RealizationFits> realizations,
                                        int city_index = 0, int warming_w = 0) {
  if (realizations.size() < 2) throw DataError("stability report needs at least 2 realizations");
  const auto years = realizations.front().size();
  if (years == 0) throw DataError("stability report: realizations have no years");
  for (const auto& r : realizations) {
    if (r.size() != years) throw DataError("stability report: realizations differ in year count");
  }
  StabilityReport rep{city_index, warming_w, 0.0, 0.0, 0.0};
  std::vector<double> k(realizations.size()), s(realizations.size()), m(realizations.size());
  for (std::size_t y = 0; y < years; ++y) {
    for (std::size_t r = 0; r < realizations.size(); ++r) {
      k[r] = realizations[r][y].k;
      s[r] = realizations[r][y].sigma;
      m[r] = realizations[r][y].mu;
    }
    rep.avg_cv_k += coefficient_of_variation(k);
    rep.avg_cv_sigma += coefficient_of_variation(s);
    rep.avg_cv_mu += coefficient_of_variation(m);
  }
  rep.avg_cv_k /= double(years);
  rep.avg_cv_sigma /= double(years);
  rep.avg_cv_mu /= double(years);
  return rep;
}

/// `gev_{city}_{W}.csv` body: one row per (year, realization).
inline std::string serialize_gev_fits(std::span<const RealizationFits> realizations) {
  std::string out = "year,realization,k,sigma,mu\n";
  const auto years = realizations.empty() ? 0 : realizations.front().size();
  for (std::size_t y = 0; y < years; ++y) {
    for (std::size_t r = 0; r < realizations.size(); ++r) {
      const auto& p = realizations[r][y];
      out += std::to_string(y + 1) + ',' + std::to_string(r) + ',' + csv::fmt(p.k) + ',' +
             csv::fmt(p.sigma) + ',' + csv::fmt(p.mu) + '\n';
    }
  }
  return out;
}

/// Parses a `gev_{city}_{W}.csv` body back into realizations.
inline std::vector<RealizationFits> parse_gev_fits(std::string_view text) {
  std::vector<RealizationFits> out;
  for (const auto& row : csv::read(text, "year,realization,k,sigma,mu")) {
    const auto year = csv::to_int(row.fields[0], row.line);
    const auto r = csv::to_int(row.fields[1], row.line);
    if (year < 1 || r < 0) throw ParseError("bad year/realization", row.line);
    if (std::size_t(r) >= out.size()) out.resize(std::size_t(r) + 1);
    auto& fits = out[std::size_t(r)];
    if (fits.size() != std::size_t(year - 1)) throw ParseError("years out of order", row.line);
    fits.push_back(GevParams{csv::to_double(row.fields[2], row.line),
                             csv::to_double(row.fields[3], row.line),
                             csv::to_double(row.fields[4], row.line)});
  }
  return out;
}

}  // namespace cornsim
