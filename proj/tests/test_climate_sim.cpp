#include <gtest/gtest.h>

#include <algorithm>
#include <cstring>
#include <set>

#include "cornsim/climate_sim.hpp"
#include "test_util.hpp"

using namespace cornsim;
using cornsim::testing::same_block_days;
using cornsim::testing::varied_history;

namespace {

CityClimateStats zero_stats() { return CityClimateStats{}; }

CityClimateStats some_stats() {
  CityClimateStats s;
  s.city_index = 1;
  s.trend_tmax = 0.0456;
  s.trend_tmin = 0.0457;
  s.trend_rain = -0.0116;
  s.var_tmax = 0.49;
  s.var_tmin = 0.64;
  s.var_rain = 0.04;
  return s;
}

}  // namespace

TEST(Scenario, ValidatesRange) {
  EXPECT_NO_THROW(ClimateScenario{0}.validate());
  EXPECT_NO_THROW(ClimateScenario{4}.validate());
  EXPECT_THROW(ClimateScenario{5}.validate(), ConfigError);
  EXPECT_THROW(ClimateScenario{-1}.validate(), ConfigError);
  EXPECT_EQ(parse_perturb_scale("var_sqrt_var"), PerturbScale::VarSqrtVar);
  EXPECT_EQ(to_string(PerturbScale::StddevSqrtVar), "stddev_sqrt_var");
  EXPECT_THROW(parse_perturb_scale("sd"), ConfigError);
}

TEST(Scenario, PerturbationScaleReadings) {
  EXPECT_DOUBLE_EQ(perturbation_stddev(0.49, PerturbScale::StddevSqrtVar), 0.7);
  EXPECT_DOUBLE_EQ(perturbation_stddev(16.0, PerturbScale::VarSqrtVar), 2.0);
  EXPECT_THROW(perturbation_stddev(-1.0, PerturbScale::StddevSqrtVar), DataError);
}

TEST(ClimatePath, NoShiftsGiveExactPermutationOfHistory) {
  const auto h = varied_history();
  for (std::uint64_t seed : {1ull, 2ull, 99ull}) {
    const auto p = build_climate_path(h, zero_stats(), ClimateScenario{0}, seed);
    ASSERT_EQ(p.blocks.size(), 49u);
    for (std::size_t i = 0; i < 49; ++i) {
      EXPECT_TRUE(same_block_days(p.blocks[i], h[std::size_t(p.permutation[i] - 1)]));
    }
  }
}

TEST(ClimatePath, PermutationIsBijection) {
  for (std::uint64_t s = 0; s < 200; ++s) {
    auto perm = draw_path(s).permutation;
    std::sort(perm.begin(), perm.end());
    for (int i = 0; i < 49; ++i) ASSERT_EQ(perm[std::size_t(i)], i + 1);
  }
}

TEST(ClimatePath, ContinuityAnchorWithZeroVariance) {
  const auto h = varied_history(5);
  auto stats = some_stats();
  stats.var_tmax = stats.var_tmin = 0.0;
  const auto p = build_climate_path(h, stats, ClimateScenario{0}, 17);
  for (std::size_t i = 0; i < 49; ++i) {
    const int src = p.permutation[i];
    const double want = annual_means(h[std::size_t(src - 1)]).tmax_mean - stats.trend_tmax * src +
                        stats.trend_tmax * 49;
    EXPECT_NEAR(annual_means(p.blocks[i]).tmax_mean, want, 1e-9);
  }
}

TEST(ClimatePath, WarmingAddsIOver49PerStepWithCommonDraws) {
  const auto h = varied_history(6);
  const auto stats = some_stats();
  std::vector<ClimatePath> paths;
  for (int w = 0; w <= 4; ++w) paths.push_back(build_climate_path(h, stats, ClimateScenario{w}, 23));
  for (int w = 1; w <= 4; ++w) {
    ASSERT_EQ(paths[std::size_t(w)].permutation, paths[0].permutation);
    for (int i = 1; i <= 49; i += 12) {
      const auto& a = paths[std::size_t(w - 1)].blocks[std::size_t(i - 1)];
      const auto& b = paths[std::size_t(w)].blocks[std::size_t(i - 1)];
      for (std::size_t d = 0; d < 365; d += 7) {
        EXPECT_NEAR(b.days[d].tmax - a.days[d].tmax, i / 49.0, 1e-12);
        EXPECT_NEAR(b.days[d].tmin - a.days[d].tmin, i / 49.0, 1e-12);
        EXPECT_EQ(b.days[d].rain, a.days[d].rain);
      }
    }
  }
}

TEST(ClimatePath, MeanShiftAtHorizonIsW) {
  // Sample-mean oracle over 10^4 draws: E[sim - source] = W at year 49 with zero trend.
  const auto h = varied_history(7);
  CityClimateStats stats;
  stats.var_tmax = 0.25;
  const ClimateScenario sc{2};
  double sum = 0.0;
  const int n = 10000;
  for (int s = 0; s < n; ++s) {
    const auto d = draw_path(child_seed(31, std::uint64_t(s)));
    const auto b = simulate_year_block(h, stats, sc, d, 49);
    sum += b.days[100].tmax - h[std::size_t(d.permutation[48] - 1)].days[100].tmax;
  }
  // Standard error 0.5/100 = 0.005; allow 5 of them.
  EXPECT_NEAR(sum / n, 2.0, 0.025);
}

TEST(ClimatePath, RainIsClampedAtZero) {
  auto h = varied_history(8);
  CityClimateStats stats;
  stats.trend_rain = -0.5;
  const auto p = build_climate_path(h, stats, ClimateScenario{0}, 4);
  for (const auto& b : p.blocks) {
    for (const auto& d : b.days) EXPECT_GE(d.rain, 0.0);
  }
  // A dry source day stays exactly 0 under a negative net shift.
  const int src = p.permutation[0];
  for (std::size_t d = 0; d < 365; ++d) {
    if (h[std::size_t(src - 1)].days[d].rain == 0.0) {
      EXPECT_EQ(p.blocks[0].days[d].rain, 0.0);
    }
  }
}

TEST(ClimatePath, RainShiftFollowsTrendContinuation) {
  const auto h = std::vector<YearBlock>(49, cornsim::testing::constant_block(0, 10, 0, 5.0));
  CityClimateStats stats;
  stats.trend_rain = 0.01;
  const auto d = draw_path(3);
  const auto b = simulate_year_block(h, stats, ClimateScenario{0}, d, 10);
  EXPECT_NEAR(b.days[0].rain, 5.0 + 0.01 * (49 - d.permutation[9] + 10), 1e-12);
}

TEST(Realization, DeterministicAndSeedSensitive) {
  const auto h = varied_history(9);
  const auto a = generate_realization(h, some_stats(), ClimateScenario{2}, 42, 20);
  const auto b = generate_realization(h, some_stats(), ClimateScenario{2}, 42, 20);
  EXPECT_EQ(serialize_paths(a), serialize_paths(b));
  const auto c = generate_realization(h, some_stats(), ClimateScenario{2}, 43, 2);
  EXPECT_NE(a[0].permutation, c[0].permutation);
  EXPECT_NE(a[1].permutation, c[1].permutation);
  std::set<Permutation> distinct;
  for (const auto& p : a) distinct.insert(p.permutation);
  EXPECT_EQ(distinct.size(), a.size());
}

TEST(Realization, SinglePathComposesWithChildSeed) {
  const auto h = varied_history(10);
  const auto r = generate_realization(h, some_stats(), ClimateScenario{1}, 42, 1);
  const auto p = build_climate_path(h, some_stats(), ClimateScenario{1}, child_seed(42, 0));
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].permutation, p.permutation);
  EXPECT_EQ(serialize_paths(r), serialize_paths(std::vector<ClimatePath>{p}));
}

TEST(Realization, RejectsBadInputs) {
  const auto h = varied_history(10);
  EXPECT_THROW(generate_realization(h, some_stats(), ClimateScenario{1}, 42, 0), ConfigError);
  const std::vector<YearBlock> short_h(h.begin(), h.begin() + 10);
  EXPECT_THROW(build_climate_path(short_h, some_stats(), ClimateScenario{1}, 1), DataError);
  auto bad = some_stats();
  bad.var_tmax = -1.0;
  EXPECT_THROW(build_climate_path(h, bad, ClimateScenario{1}, 1), DataError);
  EXPECT_THROW(build_climate_path(h, some_stats(), ClimateScenario{7}, 1), ConfigError);
}

TEST(Realization, SerializedPathsHaveOneRowPerDay) {
  const auto h = varied_history(12);
  const auto r = generate_realization(h, some_stats(), ClimateScenario{0}, 1, 2);
  const auto text = serialize_paths(r);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1 + 2 * 49 * 365);
}

TEST(ClimatePath, ZeroShiftKeepsSourceBytes) {
  auto h = varied_history(13);
  for (auto& b : h) b.days[0] = {-0.0, -0.0, 0.0};
  const auto p = build_climate_path(h, zero_stats(), ClimateScenario{0}, 8);
  for (std::size_t i = 0; i < 49; ++i) {
    const auto& src = h[std::size_t(p.permutation[i] - 1)];
    EXPECT_EQ(std::memcmp(p.blocks[i].days.data(), src.days.data(), sizeof(DayWeather) * 365), 0);
  }
}
