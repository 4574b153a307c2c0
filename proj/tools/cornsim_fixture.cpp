// cornsim-fixture: write a synthetic input set (station weather, county
// yields, market series) and a matching config for `cornsim simulate`.
#include <CLI11.hpp>

#include <iostream>

#include "cornsim/cornsim.hpp"
#include "cornsim/fixtures.hpp"

int main(int argc, char** argv) {
  namespace fs = std::filesystem;
  using namespace cornsim;

  CLI::App app{"Generate a synthetic cornsim input set"};
  std::string out = "fixture";
  std::uint64_t seed = 2024;
  std::vector<std::string> cities;
  int paths = 1500, realizations = 4;
  std::string price_mode = "fixed";
  app.add_option("--out", out, "Directory to create");
  app.add_option("--seed", seed, "Generator seed");
  app.add_option("--city", cities, "Preset names (default: all ten)");
  app.add_option("--paths", paths, "n_paths written to the config");
  app.add_option("--realizations", realizations, "n_realizations written to the config");
  app.add_option("--price-mode", price_mode, "fixed or derived")
      ->check(CLI::IsMember({"fixed", "derived"}));
  CLI11_PARSE(app, argc, argv);

  try {
    std::vector<fixtures::CityPreset> presets;
    if (cities.empty()) {
      presets = fixtures::ontario_presets();
    } else {
      for (const auto& c : cities) {
        auto p = fixtures::find_preset(c);
        if (!p) throw ConfigError("--city: unknown preset '" + c + "'");
        presets.push_back(*p);
      }
    }
    const fs::path root(out);
    fs::create_directories(root / "weather");
    fs::create_directories(root / "yields");

    nlohmann::ordered_json cfg;
    cfg["weather_dir"] = "weather";
    cfg["yield_dir"] = "yields";
    cfg["market_csv"] = "market.csv";
    cfg["output_dir"] = "out";
    cfg["cities"] = nlohmann::ordered_json::array();
    for (const auto& p : presets) {
      const auto weather = fixtures::synthetic_weather(p, seed);
      write_text_file(root / "weather" / (p.name + ".csv"), serialize_ghcnd_daily(weather));
      const auto blocks = slice_year_blocks(fill_gaps(weather), 1970, kHistoryYears);
      write_text_file(root / "yields" / (p.name + ".csv"),
                      serialize_yield_table(fixtures::synthetic_yields(p, blocks, seed)));
      cfg["cities"].push_back({{"name", p.name}, {"index", p.index}, {"station_id", p.station_id}});
    }
    write_text_file(root / "market.csv", serialize_market_series(fixtures::synthetic_market(1970, 2018, seed)));
    cfg["scenarios"] = {0, 1, 2, 3, 4};
    cfg["n_paths"] = paths;
    cfg["n_realizations"] = realizations;
    cfg["master_seed"] = seed;
    cfg["price_mode"] = price_mode;
    write_text_file(root / "config.json", cfg.dump(2) + "\n");
    std::cout << "wrote " << presets.size() << " cities to " << root.string() << "\n";
  } catch (const ConfigError& e) {
    std::cerr << "cornsim-fixture: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "cornsim-fixture: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
