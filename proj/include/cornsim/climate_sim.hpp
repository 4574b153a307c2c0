#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cornsim/error.hpp"
#include "cornsim/ingest.hpp"
#include "cornsim/random.hpp"
#include "cornsim/trends.hpp"

namespace cornsim {

/// How the written √𝒱 in the temperature perturbation is read.
enum class PerturbScale {
  StddevSqrtVar,  ///< standard deviation = √𝒱 (variance 𝒱). Default.
  VarSqrtVar,     ///< variance = √𝒱 (standard deviation 𝒱^¼).
};

inline PerturbScale parse_perturb_scale(std::string_view s) {
  if (s == "stddev_sqrt_var") return PerturbScale::StddevSqrtVar;
  if (s == "var_sqrt_var") return PerturbScale::VarSqrtVar;
  throw ConfigError("perturb_scale must be stddev_sqrt_var or var_sqrt_var, got '" +
                    std::string(s) + "'");
}

inline std::string_view to_string(PerturbScale s) {
  return s == PerturbScale::StddevSqrtVar ? "stddev_sqrt_var" : "var_sqrt_var";
}

/// Warming scenario: +W °C phased in linearly over the simulated years.
struct ClimateScenario {
  int warming_w = 0;
  PerturbScale perturb_scale = PerturbScale::StddevSqrtVar;

  void validate() const {
    if (warming_w < 0 || warming_w > 4) {
      throw ConfigError("warming W must be an integer in [0,4], got " + std::to_string(warming_w));
    }
  }
};

using Permutation = std::array<int, kHistoryYears>;  // values 1..49

/// Everything random about a path. Depends only on the seed, so the same seed
/// gives common random numbers across scenarios.
struct PathDraws {
  Permutation permutation{};
  std::array<double, kHistoryYears> z_tmax{};  // standard normal, one per year
  std::array<double, kHistoryYears> z_tmin{};
};

struct ClimatePath {
  int city_index = 0;
  ClimateScenario scenario;
  std::vector<YearBlock> blocks;  // simulated years 1..49
  Permutation permutation{};
  std::uint64_t seed = 0;
};

/// Draw order: permutation (std::shuffle of 1..49), then per year tmax and
/// tmin standard normals.
inline PathDraws draw_path(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  PathDraws d;
  std::iota(d.permutation.begin(), d.permutation.end(), 1);
  std::shuffle(d.permutation.begin(), d.permutation.end(), rng);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int i = 0; i < kHistoryYears; ++i) {
    d.z_tmax[std::size_t(i)] = normal(rng);
    d.z_tmin[std::size_t(i)] = normal(rng);
  }
  return d;
}

inline double perturbation_stddev(double variance, PerturbScale scale) {
  if (variance < 0.0 || !std::isfinite(variance)) {
    throw DataError("climate variance must be finite and nonnegative");
  }
  return scale == PerturbScale::StddevSqrtVar ? std::sqrt(variance)
                                              : std::sqrt(std::sqrt(variance));
}

/// Scalar shifts applied uniformly to the 365 days of simulated year `year`
/// (1-based) whose source is historical block `source` (1-based).
struct BlockShift {
  double tmax = 0.0;
  double tmin = 0.0;
  double rain = 0.0;
};

inline BlockShift block_shift(const CityClimateStats& stats, const ClimateScenario& scenario,
                              int year, int source, double z_tmax, double z_tmin) {
  const double horizon = kHistoryYears;
  const double mean = double(scenario.warming_w) * double(year) / horizon;
  const double sd_max = perturbation_stddev(stats.var_tmax, scenario.perturb_scale);
  const double sd_min = perturbation_stddev(stats.var_tmin, scenario.perturb_scale);
  BlockShift s;
  // historical trend out, scenario perturbation in, continuity term on top
  s.tmax = -stats.trend_tmax * source + (mean + sd_max * z_tmax) + stats.trend_tmax * horizon;
  s.tmin = -stats.trend_tmin * source + (mean + sd_min * z_tmin) + stats.trend_tmin * horizon;
  // rain keeps the historical trend, no perturbation
  s.rain = stats.trend_rain * (horizon - source + year);
  return s;
}

/// Simulated year `year` (1-based) of the path described by `draws`.
inline YearBlock simulate_year_block(std::span<const YearBlock> history,
                                     const CityClimateStats& stats,
                                     const ClimateScenario& scenario, const PathDraws& draws,
                                     int year) {
  const auto yi = std::size_t(year - 1);
  const int source = draws.permutation[yi];
  const auto shift =
      block_shift(stats, scenario, year, source, draws.z_tmax[yi], draws.z_tmin[yi]);
  YearBlock out = history[std::size_t(source - 1)];
  out.year_label = year;
  // Zero shifts leave the source bytes untouched (signed zeros included).
  for (auto& d : out.days) {
    if (shift.tmax != 0.0) d.tmax += shift.tmax;
    if (shift.tmin != 0.0) d.tmin += shift.tmin;
    if (shift.rain != 0.0) d.rain = std::max(0.0, d.rain + shift.rain);
  }
  return out;
}

inline void check_history(std::span<const YearBlock> history) {
  if (history.size() != std::size_t(kHistoryYears)) {
    throw DataError("expected " + std::to_string(kHistoryYears) + " historical blocks, got " +
                    std::to_string(history.size()));
  }
}

/// One block-bootstrap climate path: permuted historical years, detrended,
/// perturbed toward the warming scenario, with rain trend continued and
/// clamped at zero.
inline ClimatePath build_climate_path(std::span<const YearBlock> history,
                                      const CityClimateStats& stats,
                                      const ClimateScenario& scenario, std::uint64_t seed) {
  check_history(history);
  scenario.validate();
  perturbation_stddev(stats.var_tmax, scenario.perturb_scale);
  perturbation_stddev(stats.var_tmin, scenario.perturb_scale);
  const auto draws = draw_path(seed);
  ClimatePath path;
  path.city_index = stats.city_index;
  path.scenario = scenario;
  path.permutation = draws.permutation;
  path.seed = seed;
  path.blocks.reserve(std::size_t(kHistoryYears));
  for (int i = 1; i <= kHistoryYears; ++i) {
    path.blocks.push_back(simulate_year_block(history, stats, scenario, draws, i));
  }
  return path;
}

/// `n_paths` paths; path p is seeded with child_seed(master_seed, p).
inline std::vector<ClimatePath> generate_realization(std::span<const YearBlock> history,
                                                     const CityClimateStats& stats,
                                                     const ClimateScenario& scenario,
                                                     std::uint64_t master_seed, int n_paths) {
  if (n_paths < 1) throw ConfigError("n_paths must be at least 1");
  std::vector<ClimatePath> paths;
  paths.reserve(std::size_t(n_paths));
  for (int p = 0; p < n_paths; ++p) {
    paths.push_back(
        build_climate_path(history, stats, scenario, child_seed(master_seed, std::uint64_t(p))));
  }
  return paths;
}

/// `paths_{city}_{W}.csv` body.
inline std::string serialize_paths(std::span<const ClimatePath> paths) {
  std::string out = "path,year,day,tmax,tmin,rain\n";
  for (std::size_t p = 0; p < paths.size(); ++p) {
    for (const auto& b : paths[p].blocks) {
      for (int d = 0; d < kDaysPerBlock; ++d) {
        const auto& w = b.days[std::size_t(d)];
        out += std::to_string(p) + ',' + std::to_string(b.year_label) + ',' +
               std::to_string(d + 1) + ',' + csv::fmt(w.tmax) + ',' + csv::fmt(w.tmin) + ',' +
               csv::fmt(w.rain) + '\n';
      }
    }
  }
  return out;
}

}  // namespace cornsim
