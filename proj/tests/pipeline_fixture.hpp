#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cornsim/fixtures.hpp"
#include "cornsim/pipeline.hpp"

namespace cornsim::testing {

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("cornsim_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

/// Writes synthetic weather, yields and market files for `cities` under
/// `root` and returns a config pointing at them.
inline RunConfig write_input_set(const std::filesystem::path& root,
                                 const std::vector<std::string>& cities, std::uint64_t seed = 2024) {
  std::filesystem::create_directories(root / "weather");
  std::filesystem::create_directories(root / "yields");
  RunConfig cfg;
  cfg.weather_dir = root / "weather";
  cfg.yield_dir = root / "yields";
  cfg.market_csv = root / "market.csv";
  cfg.output_dir = root / "out";
  for (const auto& name : cities) {
    const auto p = *fixtures::find_preset(name);
    const auto w = fixtures::synthetic_weather(p, seed);
    write_text_file(cfg.weather_dir / (name + ".csv"), serialize_ghcnd_daily(w));
    const auto blocks = slice_year_blocks(fill_gaps(w), 1970, kHistoryYears);
    write_text_file(cfg.yield_dir / (name + ".csv"),
                    serialize_yield_table(fixtures::synthetic_yields(p, blocks, seed)));
    cfg.cities.push_back({name, p.index, p.station_id});
  }
  write_text_file(cfg.market_csv, serialize_market_series(fixtures::synthetic_market(1970, 2018, seed)));
  return cfg;
}

/// Sorted (relative name, bytes) listing of a directory.
inline std::vector<std::pair<std::string, std::string>> snapshot(const std::filesystem::path& dir) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file()) out.emplace_back(e.path().filename().string(), read_text_file(e.path()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace cornsim::testing
