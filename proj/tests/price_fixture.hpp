#pragma once

// Decade of weekday market rows with a hand-chosen deflator chain, plus two
// cities of season windows. The expected price was recomputed outside this
// code base (plain per-row arithmetic and nested means) and frozen here.

#include <array>
#include <chrono>
#include <vector>

#include "cornsim/econ.hpp"

namespace cornsim::testing {

inline constexpr double kDecadePriceOracle = 178.4308616545914;

inline MarketSeries decade_market() {
  using namespace std::chrono;
  constexpr std::array<double, 10> deflator{1.7, 2.1, 0.9, 1.5, 1.0, 1.9, 1.1, 1.6, 2.3, 1.8};
  MarketSeries m;
  for (sys_days d{2009y / January / 1}; d <= sys_days{2018y / December / 31}; d += days{1}) {
    const weekday wd{d};
    if (wd == Saturday || wd == Sunday) continue;
    const year_month_day ymd{d};
    const int y = int(ymd.year());
    const int doy = int((d - sys_days{ymd.year() / January / 1}).count()) + 1;
    m.entries.push_back({ymd, 150.0 + 2.0 * (y - 2009) + 0.05 * doy,
                         1.05 + 0.015 * (y - 2009) + 0.0001 * doy, deflator[std::size_t(y - 2009)]});
  }
  return m;
}

inline std::vector<CitySeasons> decade_seasons() {
  std::vector<CitySeasons> cities(2);
  for (int y = 2009; y <= 2018; ++y) {
    const int pa = 150 + y % 3, ha = 295 + y % 5;
    const int pb = 160 - y % 4, hb = 300 - y % 2;
    cities[0].push_back({y, GrowingSeason{y - 2008, pa, ha, ha - pa + 1}});
    cities[1].push_back({y, GrowingSeason{y - 2008, pb, hb, hb - pb + 1}});
  }
  return cities;
}

}  // namespace cornsim::testing
