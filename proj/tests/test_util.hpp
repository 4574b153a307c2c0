#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "cornsim/ingest.hpp"
#include "cornsim/trends.hpp"

namespace cornsim::testing {

inline YearBlock constant_block(int label, double tmax, double tmin, double rain) {
  YearBlock b;
  b.year_label = label;
  for (auto& d : b.days) d = {tmax, tmin, rain};
  return b;
}

/// 49 distinct blocks: seasonal tmax, block-specific offsets and a rain
/// pattern with a few dry triples near both anchors.
inline std::vector<YearBlock> varied_history(std::uint64_t seed = 11, int n = kHistoryYears) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<YearBlock> h;
  for (int y = 1; y <= n; ++y) {
    YearBlock b;
    b.year_label = 1969 + y;
    const double off = 0.8 * z(rng);
    for (int d = 0; d < kDaysPerBlock; ++d) {
      const double tmax = 11.0 + 14.0 * std::sin(2 * 3.141592653589793 * (d - 110) / 365.0) + off +
                          2.0 * z(rng);
      b.days[std::size_t(d)] = {tmax, tmax - 9.0 - std::abs(z(rng)), u(rng) < 0.35 ? 8.0 * u(rng) : 0.0};
    }
    h.push_back(b);
  }
  return h;
}

inline bool same_block_days(const YearBlock& a, const YearBlock& b) {
  for (std::size_t d = 0; d < a.days.size(); ++d) {
    if (a.days[d].tmax != b.days[d].tmax || a.days[d].tmin != b.days[d].tmin ||
        a.days[d].rain != b.days[d].rain) {
      return false;
    }
  }
  return true;
}

}  // namespace cornsim::testing
