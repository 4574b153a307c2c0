#pragma once

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cornsim/agronomy.hpp"
#include "cornsim/climate_sim.hpp"
#include "cornsim/csv.hpp"
#include "cornsim/econ.hpp"
#include "cornsim/error.hpp"
#include "cornsim/gev.hpp"
#include "cornsim/ingest.hpp"
#include "cornsim/random.hpp"
#include "cornsim/stats.hpp"
#include "cornsim/trends.hpp"

namespace cornsim {

namespace fs = std::filesystem;

/// Environment variable that overrides the output directory.
inline constexpr const char* kOutDirEnv = "CORNSIM_OUT_DIR";

struct CityConfig {
  std::string name;        // file stem under the weather and yield dirs
  int index = 0;           // 1..10 in the Ontario study; any positive id works
  std::string station_id;  // defaults to name
};

struct RunConfig {
  fs::path weather_dir;
  fs::path yield_dir;
  fs::path market_csv;  // required in derived price mode
  fs::path output_dir = "out";
  std::vector<CityConfig> cities;
  std::vector<int> scenarios{0, 1, 2, 3, 4};
  int n_paths = 1500;
  int n_realizations = 4;
  std::uint64_t master_seed = 42;
  int start_year = 1970;
  PriceConfig price;
  bool chu_floor_zero = false;
  PerturbScale perturb_scale = PerturbScale::StddevSqrtVar;
  double rain_threshold_mm = 0.0;
  int threads = 1;
  int dump_paths = 0;  // paths of realization 0 written to paths_{city}_{W}.csv

  void validate() const {
    if (cities.empty()) throw ConfigError("cities: must list at least one city");
    std::set<std::string> names;
    std::set<int> ids;
    for (const auto& c : cities) {
      if (c.name.empty() || c.name.find_first_of("/\\ ") != std::string::npos) {
        throw ConfigError("cities: bad city name '" + c.name + "'");
      }
      if (c.index < 1) throw ConfigError("cities: index of '" + c.name + "' must be >= 1");
      if (!names.insert(c.name).second) throw ConfigError("cities: duplicate name '" + c.name + "'");
      if (!ids.insert(c.index).second) {
        throw ConfigError("cities: duplicate index " + std::to_string(c.index));
      }
    }
    if (scenarios.empty()) throw ConfigError("scenarios: must list at least one W");
    for (int w : scenarios) ClimateScenario{w}.validate();
    if (std::set<int>(scenarios.begin(), scenarios.end()).size() != scenarios.size()) {
      throw ConfigError("scenarios: duplicate W");
    }
    if (n_paths < 1) throw ConfigError("n_paths: must be >= 1");
    if (n_realizations < 1) throw ConfigError("n_realizations: must be >= 1");
    if (threads < 1) throw ConfigError("threads: must be >= 1");
    if (dump_paths < 0) throw ConfigError("dump_paths: must be >= 0");
    if (rain_threshold_mm < 0.0) throw ConfigError("rain_threshold_mm: must be >= 0");
    price.validate();
    if (price.mode == PriceMode::Derived && market_csv.empty()) {
      throw ConfigError("market_csv: required when price_mode is derived");
    }
    if (weather_dir.empty()) throw ConfigError("weather_dir: missing");
    if (yield_dir.empty()) throw ConfigError("yield_dir: missing");
  }

  /// Whether per-year GEV fits are produced (they need >= 30 paths).
  bool fits_gev() const { return n_paths >= 30; }
};

/// Flat-key JSON config. Relative paths resolve against `base_dir`.
inline RunConfig parse_config(const nlohmann::json& j, const fs::path& base_dir = {}) {
  static const std::set<std::string> known = {
      "weather_dir", "yield_dir",      "market_csv",    "output_dir",     "cities",
      "scenarios",   "n_paths",        "n_realizations", "master_seed",   "start_year",
      "price_mode",  "fixed_price",    "farm_area",      "chu_floor_zero", "perturb_scale",
      "rain_threshold_mm", "threads",  "dump_paths"};
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) throw ConfigError(key + ": unknown config key");
  }
  RunConfig c;
  auto get = [&](const char* key, auto& out) {
    if (!j.contains(key)) return;
    try {
      j.at(key).get_to(out);
    } catch (const nlohmann::json::exception&) {
      throw ConfigError(std::string(key) + ": wrong type");
    }
  };
  auto path = [&](const char* key, fs::path& out) {
    std::string s;
    get(key, s);
    if (!s.empty()) out = fs::path(s).is_absolute() ? fs::path(s) : base_dir / s;
  };
  path("weather_dir", c.weather_dir);
  path("yield_dir", c.yield_dir);
  path("market_csv", c.market_csv);
  path("output_dir", c.output_dir);
  if (j.contains("cities")) {
    const auto& cs = j.at("cities");
    if (!cs.is_array()) throw ConfigError("cities: must be an array");
    int auto_index = 0;
    for (const auto& item : cs) {
      ++auto_index;
      CityConfig city;
      if (item.is_string()) {
        city.name = item.get<std::string>();
        city.index = auto_index;
      } else if (item.is_object()) {
        if (!item.contains("name") || !item.at("name").is_string()) {
          throw ConfigError("cities: each entry needs a string name");
        }
        city.name = item.at("name").get<std::string>();
        city.index = item.value("index", auto_index);
        city.station_id = item.value("station_id", std::string{});
      } else {
        throw ConfigError("cities: entries must be names or objects");
      }
      if (city.station_id.empty()) city.station_id = city.name;
      c.cities.push_back(city);
    }
  }
  get("scenarios", c.scenarios);
  get("n_paths", c.n_paths);
  get("n_realizations", c.n_realizations);
  get("master_seed", c.master_seed);
  get("start_year", c.start_year);
  std::string mode = "fixed";
  get("price_mode", mode);
  c.price.mode = parse_price_mode(mode);
  get("fixed_price", c.price.fixed_p);
  get("farm_area", c.price.farm_area_a);
  get("chu_floor_zero", c.chu_floor_zero);
  std::string scale = "stddev_sqrt_var";
  get("perturb_scale", scale);
  c.perturb_scale = parse_perturb_scale(scale);
  get("rain_threshold_mm", c.rain_threshold_mm);
  get("threads", c.threads);
  get("dump_paths", c.dump_paths);
  return c;
}

inline std::string read_text_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw DataError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + p.string());
  out << text;
  if (!out) throw DataError("write failed for " + p.string());
}

inline RunConfig load_config(const fs::path& file) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(file));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(file.string() + ": " + e.what());
  }
  return parse_config(j, file.parent_path());
}

/// Runs fn(i) for i in [0, n) on up to `threads` workers, contiguous chunks.
/// Callers write results into preallocated slots, so the outcome does not
/// depend on scheduling.
inline void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  const auto workers = std::min<std::size_t>(std::size_t(std::max(threads, 1)), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w * n / workers; i < (w + 1) * n / workers; ++i) fn(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

/// Inputs of one city after ingest, trend estimation and the yield regression.
struct CityInputs {
  CityConfig city;
  std::vector<YearBlock> history;
  CityClimateStats stats;
  SeasonalChu historical;
  YieldModel model;
};

inline CityInputs prepare_city(const RunConfig& cfg, const CityConfig& city) {
  CityInputs in;
  in.city = city;
  const auto weather_file = cfg.weather_dir / (city.name + ".csv");
  auto series = parse_ghcnd_daily(read_text_file(weather_file), city.station_id);
  series.city_index = city.index;
  in.history = slice_year_blocks(fill_gaps(std::move(series)), cfg.start_year, kHistoryYears);
  in.stats = estimate_city_climate_stats(in.history, city.index);
  in.historical = seasonal_chu(in.history, city.index, SeasonRules{cfg.rain_threshold_mm},
                               ChuOptions{cfg.chu_floor_zero});

  const auto yield_file = cfg.yield_dir / (city.name + ".csv");
  const auto yields = parse_yield_table(read_text_file(yield_file), city.index);
  if (yields.entries.size() != std::size_t(kHistoryYears)) {
    throw DataError(yield_file.string() + ": expected " + std::to_string(kHistoryYears) +
                    " years, got " + std::to_string(yields.entries.size()));
  }
  std::vector<double> h, chu, y;
  for (std::size_t i = 0; i < yields.entries.size(); ++i) {
    h.push_back(double(yields.entries[i].year_index));
    chu.push_back(in.historical.chu.values[i].h);
    y.push_back(yields.entries[i].t_per_ha);
  }
  in.model = fit_yield_model(h, chu, y);
  return in;
}

/// Seed of realization `r` for a city; independent of W so scenarios share
/// common random numbers.
inline std::uint64_t realization_seed(std::uint64_t master, int city_index, int r) {
  return child_seed(child_seed(master, std::uint64_t(city_index)), std::uint64_t(r));
}

/// Projected yields of one realization, streamed path by path.
inline YieldMatrix simulate_realization_yields(const CityInputs& in, const ClimateScenario& sc,
                                               std::uint64_t seed, int n_paths,
                                               const SeasonRules& rules, const ChuOptions& chu,
                                               int threads, std::size_t& clamped) {
  YieldMatrix ym(std::size_t(kHistoryYears), std::vector<double>(std::size_t(n_paths), 0.0));
  std::vector<std::size_t> clamps(std::size_t(n_paths), 0);
  parallel_for(std::size_t(n_paths), threads, [&](std::size_t p) {
    const auto draws = draw_path(child_seed(seed, p));
    ClampCounter counter;
    for (int year = 1; year <= kHistoryYears; ++year) {
      const auto block = simulate_year_block(in.history, in.stats, sc, draws, year);
      const auto season = determine_growing_season(block, year, rules);
      ym[std::size_t(year - 1)][p] = project_yield(in.model, season_chu(block, season, chu), counter);
    }
    clamps[p] = counter.clamped;
  });
  for (auto c : clamps) clamped += c;
  return ym;
}

inline std::vector<GevParams> fit_years(const YieldMatrix& ym, std::uint64_t seed, int threads) {
  std::vector<GevParams> fits(ym.size());
  parallel_for(ym.size(), threads, [&](std::size_t y) {
    GevFitOptions opts;
    opts.seed = child_seed(seed ^ 0x676576ULL, y);
    fits[y] = fit_gev(ym[y], opts).params;
  });
  return fits;
}

struct RunSummary {
  int cities = 0;
  int scenarios = 0;
  long long paths_simulated = 0;
  long long gev_fits = 0;
  std::size_t clamped_yields = 0;
  double reference_price = 0.0;
  double seconds = 0.0;
  std::vector<std::string> files;
};

inline std::string income_file_name(int w) { return "income_" + std::to_string(w) + ".csv"; }
inline std::string stability_file_name(int w) { return "stability_" + std::to_string(w) + ".csv"; }
inline std::string gev_file_name(const std::string& city, int w) {
  return "gev_" + city + "_" + std::to_string(w) + ".csv";
}

struct ReportSummary {
  std::vector<std::string> files;
};

inline ReportSummary run_report(const fs::path& out_dir);

/// Full pipeline for every (city, W): writes all CSVs under cfg.output_dir,
/// then assembles the report files.
inline RunSummary run_simulate(const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  cfg.validate();
  RunSummary summary;
  const SeasonRules rules{cfg.rain_threshold_mm};
  const ChuOptions chu{cfg.chu_floor_zero};

  std::vector<CityInputs> inputs;
  for (const auto& c : cfg.cities) inputs.push_back(prepare_city(cfg, c));

  double price = cfg.price.fixed_p;
  if (cfg.price.mode == PriceMode::Derived) {
    const auto market = parse_market_series(read_text_file(cfg.market_csv));
    std::vector<CitySeasons> seasons;
    for (const auto& in : inputs) {
      CitySeasons cs;
      for (const auto& s : in.historical.seasons) {
        cs.push_back({cfg.start_year + s.year_index - 1, s});
      }
      seasons.push_back(std::move(cs));
    }
    price = compute_reference_price(market, seasons);
  }
  summary.reference_price = price;

  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec) throw DataError("cannot create output dir " + cfg.output_dir.string() + ": " + ec.message());
  auto emit = [&](const std::string& name, const std::string& text) {
    write_text_file(cfg.output_dir / name, text);
    summary.files.push_back(name);
  };

  std::string stats_csv = "city,trend_tmax,trend_tmin,trend_rain,var_tmax,var_tmin,var_rain\n";
  std::string models_csv = "city,c0,c1,c2,gof\n";
  for (const auto& in : inputs) {
    const auto& s = in.stats;
    stats_csv += in.city.name + ',' + csv::fmt(s.trend_tmax) + ',' + csv::fmt(s.trend_tmin) + ',' +
                 csv::fmt(s.trend_rain) + ',' + csv::fmt(s.var_tmax) + ',' + csv::fmt(s.var_tmin) +
                 ',' + csv::fmt(s.var_rain) + '\n';
    const auto& m = in.model;
    models_csv += in.city.name + ',' + csv::fmt(m.c0) + ',' + csv::fmt(m.c1) + ',' +
                  csv::fmt(m.c2) + ',' + csv::fmt(m.gof) + '\n';
    emit("seasons_" + in.city.name + ".csv", serialize_seasons(in.historical.seasons));
    emit("chu_" + in.city.name + ".csv", serialize_chu(in.historical.chu));
  }
  emit("city_stats.csv", stats_csv);
  emit("yield_models.csv", models_csv);

  for (int w : cfg.scenarios) {
    std::string income_csv = "city,year,mean_income_cad\n";
    for (const auto& in : inputs) {
      const ClimateScenario sc{w, cfg.perturb_scale};
      std::vector<RealizationFits> fits;
      for (int r = 0; r < cfg.n_realizations; ++r) {
        const auto seed = realization_seed(cfg.master_seed, in.city.index, r);
        const auto ym = simulate_realization_yields(in, sc, seed, cfg.n_paths, rules, chu,
                                                    cfg.threads, summary.clamped_yields);
        summary.paths_simulated += cfg.n_paths;
        if (r == 0) {
          const auto income =
              income_from_yields(ym, cfg.price.farm_area_a, price, in.city.index, w);
          for (const auto& pt : income.points) {
            income_csv += in.city.name + ',' + std::to_string(pt.year_index) + ',' +
                          csv::fmt(pt.income) + '\n';
          }
          if (cfg.dump_paths > 0) {
            std::vector<ClimatePath> dumped;
            for (int p = 0; p < std::min(cfg.dump_paths, cfg.n_paths); ++p) {
              dumped.push_back(build_climate_path(in.history, in.stats, sc,
                                                  child_seed(seed, std::uint64_t(p))));
            }
            emit("paths_" + in.city.name + "_" + std::to_string(w) + ".csv",
                 serialize_paths(dumped));
          }
        }
        if (cfg.fits_gev()) {
          fits.push_back(fit_years(ym, seed, cfg.threads));
          summary.gev_fits += kHistoryYears;
        }
      }
      if (cfg.fits_gev()) emit(gev_file_name(in.city.name, w), serialize_gev_fits(fits));
    }
    emit(income_file_name(w), income_csv);
  }

  nlohmann::ordered_json manifest;
  manifest["cities"] = nlohmann::ordered_json::array();
  for (const auto& c : cfg.cities) {
    manifest["cities"].push_back({{"name", c.name}, {"index", c.index}, {"station_id", c.station_id}});
  }
  manifest["scenarios"] = cfg.scenarios;
  manifest["n_paths"] = cfg.n_paths;
  manifest["n_realizations"] = cfg.n_realizations;
  manifest["master_seed"] = cfg.master_seed;
  manifest["start_year"] = cfg.start_year;
  manifest["price_mode"] = cfg.price.mode == PriceMode::Fixed ? "fixed" : "derived";
  manifest["reference_price"] = price;
  manifest["farm_area"] = cfg.price.farm_area_a;
  manifest["chu_floor_zero"] = cfg.chu_floor_zero;
  manifest["perturb_scale"] = std::string(to_string(cfg.perturb_scale));
  manifest["rain_threshold_mm"] = cfg.rain_threshold_mm;
  manifest["gev_fitted"] = cfg.fits_gev();
  manifest["clamped_yields"] = summary.clamped_yields;
  emit("run_manifest.json", manifest.dump(2) + "\n");

  const auto report = run_report(cfg.output_dir);
  summary.files.insert(summary.files.end(), report.files.begin(), report.files.end());
  summary.cities = int(cfg.cities.size());
  summary.scenarios = int(cfg.scenarios.size());
  summary.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return summary;
}

/// Rebuilds the consolidated reports from the files `run_simulate` left in
/// `out_dir`: stability_{W}.csv, income_variation.csv and long-format
/// plot_*.csv files. Pure function of the directory contents.
inline ReportSummary run_report(const fs::path& out_dir) {
  const auto manifest_path = out_dir / "run_manifest.json";
  if (!fs::exists(manifest_path)) {
    throw DataError("missing " + manifest_path.string() + "; rerun `cornsim simulate`");
  }
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(read_text_file(manifest_path));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(manifest_path.string() + ": " + e.what());
  }
  std::vector<std::string> cities;
  for (const auto& c : manifest.at("cities")) cities.push_back(c.at("name").get<std::string>());
  const auto scenarios = manifest.at("scenarios").get<std::vector<int>>();
  const bool gev = manifest.at("gev_fitted").get<bool>();
  const int n_real = manifest.at("n_realizations").get<int>();

  std::vector<std::string> missing;
  auto need = [&](const std::string& name) {
    if (!fs::exists(out_dir / name)) missing.push_back(name);
  };
  for (int w : scenarios) {
    need(income_file_name(w));
    if (gev) {
      for (const auto& c : cities) need(gev_file_name(c, w));
    }
  }
  if (!missing.empty()) {
    std::string msg = "missing intermediate files in " + out_dir.string() + ":";
    for (const auto& m : missing) msg += " " + m;
    throw DataError(msg + "; rerun `cornsim simulate` with the same config");
  }

  ReportSummary rep;
  auto emit = [&](const std::string& name, const std::string& text) {
    write_text_file(out_dir / name, text);
    rep.files.push_back(name);
  };

  std::string variation = "city,W,delta_cad\n";
  std::string income_long = "city,W,year,mean_income_cad\n";
  std::map<std::pair<std::string, int>, double> deltas;
  for (int w : scenarios) {
    const auto file = out_dir / income_file_name(w);
    std::map<std::string, IncomeSeries> by_city;
    const auto text = read_text_file(file);
    for (const auto& row : csv::read(text, "city,year,mean_income_cad")) {
      auto& s = by_city[std::string(row.fields[0])];
      s.warming_w = w;
      s.points.push_back({int(csv::to_int(row.fields[1], row.line)),
                          csv::to_double(row.fields[2], row.line)});
      income_long += std::string(row.fields[0]) + ',' + std::to_string(w) + ',' +
                     std::string(row.fields[1]) + ',' + std::string(row.fields[2]) + '\n';
    }
    for (const auto& c : cities) {
      const auto it = by_city.find(c);
      if (it == by_city.end()) throw DataError(file.string() + ": no rows for city " + c);
      deltas[{c, w}] = income_variation(it->second);
    }
  }
  for (const auto& c : cities) {
    for (int w : scenarios) {
      variation += c + ',' + std::to_string(w) + ',' + csv::fixed(deltas.at({c, w}), 2) + '\n';
    }
  }
  emit("income_variation.csv", variation);
  emit("plot_income_long.csv", income_long);

  if (gev) {
    std::string gev_long = "city,W,year,realization,parameter,value\n";
    for (int w : scenarios) {
      std::string stab = "city,avg_cv_k,avg_cv_sigma,avg_cv_mu\n";
      for (const auto& c : cities) {
        const auto fits = parse_gev_fits(read_text_file(out_dir / gev_file_name(c, w)));
        for (std::size_t r = 0; r < fits.size(); ++r) {
          for (std::size_t y = 0; y < fits[r].size(); ++y) {
            const auto prefix = c + ',' + std::to_string(w) + ',' + std::to_string(y + 1) + ',' +
                                std::to_string(r) + ',';
            gev_long += prefix + "k," + csv::fmt(fits[r][y].k) + '\n';
            gev_long += prefix + "sigma," + csv::fmt(fits[r][y].sigma) + '\n';
            gev_long += prefix + "mu," + csv::fmt(fits[r][y].mu) + '\n';
          }
        }
        if (n_real >= 2) {
          const auto s = stability_report(fits, 0, w);
          stab += c + ',' + csv::fmt(s.avg_cv_k) + ',' + csv::fmt(s.avg_cv_sigma) + ',' +
                  csv::fmt(s.avg_cv_mu) + '\n';
        }
      }
      if (n_real >= 2) emit(stability_file_name(w), stab);
    }
    emit("plot_gev_long.csv", gev_long);
  }
  return rep;
}

}  // namespace cornsim
