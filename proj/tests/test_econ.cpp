#include <gtest/gtest.h>

#include <algorithm>

#include "cornsim/econ.hpp"
#include "price_fixture.hpp"
#include "test_util.hpp"

using namespace cornsim;
using cornsim::testing::constant_block;

namespace {

MarketSeries constant_market(int y0, int y1, double corn, double fx) {
  using namespace std::chrono;
  MarketSeries m;
  for (sys_days d{year{y0} / January / 1}; d <= sys_days{year{y1} / December / 31}; d += days{1}) {
    m.entries.push_back({year_month_day{d}, corn, fx, 0.0});
  }
  return m;
}

CitySeasons seasons_for(int y0, int y1, int planting, int harvest) {
  CitySeasons c;
  for (int y = y0; y <= y1; ++y) {
    c.push_back({y, GrowingSeason{y - y0 + 1, planting, harvest, harvest - planting + 1}});
  }
  return c;
}

const YieldModel kBrockville{1.19, 1.21e-1, 8.68e-4, 0.8286};

}  // namespace

TEST(Price, ConstantInputsPassThrough) {
  const auto m = constant_market(2009, 2019, 100.0, 1.30);
  const std::vector<CitySeasons> c{seasons_for(2009, 2019, 152, 298), seasons_for(2009, 2019, 140, 310)};
  EXPECT_NEAR(compute_reference_price(m, c), 130.0, 1e-12);
}

TEST(Price, MeanOfCityMeans) {
  // Window 1 at 100 CAD, the other city's window at 200 CAD, one year.
  using namespace std::chrono;
  MarketSeries m;
  for (sys_days d{2009y / January / 1}; d <= sys_days{2009y / December / 31}; d += days{1}) {
    const year_month_day ymd{d};
    m.entries.push_back({ymd, ymd.month() <= July ? 100.0 : 200.0, 1.0, 0.0});
  }
  const std::vector<CitySeasons> c{seasons_for(2009, 2009, 100, 150), seasons_for(2009, 2009, 240, 300)};
  EXPECT_NEAR(compute_reference_price(m, c), 150.0, 1e-12);
}

TEST(Price, DecadeFixtureMatchesOracle) {
  const auto m = cornsim::testing::decade_market();
  const auto c = cornsim::testing::decade_seasons();
  EXPECT_NEAR(compute_reference_price(m, c), cornsim::testing::kDecadePriceOracle, 1e-6);
}

TEST(Price, WindowOutsideSeriesIsAnError) {
  auto m = constant_market(2009, 2009, 100.0, 1.3);
  m.entries.resize(181);  // through June 30
  const std::vector<CitySeasons> c{seasons_for(2009, 2009, 152, 298)};
  EXPECT_THROW(compute_reference_price(m, c), DataError);
  const std::vector<CitySeasons> none{seasons_for(1990, 1991, 152, 298)};
  EXPECT_THROW(compute_reference_price(m, none), DataError);
}

TEST(Income, ProductOfFactors) {
  EXPECT_NEAR(farm_income(100, 8.0, 186.12), 148896.0, 1e-9);
  EXPECT_EQ(farm_income(100, 0.0, 186.12), 0.0);
  EXPECT_EQ(farm_income(1, 1, 1), 1.0);
  EXPECT_EQ(farm_income(200, 3.7, 186.12), 2 * farm_income(100, 3.7, 186.12));
  EXPECT_EQ(farm_income(100, 3.7, 372.24), 2 * farm_income(100, 3.7, 186.12));
}

TEST(Income, Variation) {
  IncomeSeries flat;
  IncomeSeries ramp;
  IncomeSeries table;
  for (int i = 1; i <= 49; ++i) {
    flat.points.push_back({i, 5000.0});
    ramp.points.push_back({i, 100.0 + 12.5 * i});
    table.points.push_back({i, i == 49 ? 108130.28 : 100000.0});
  }
  EXPECT_EQ(income_variation(flat), 0.0);
  EXPECT_NEAR(income_variation(ramp), 48 * 12.5, 1e-9);
  EXPECT_NEAR(income_variation(table), 8130.28, 1e-9);
  EXPECT_THROW(income_variation(IncomeSeries{}), DataError);
}

TEST(Income, ConstantWeatherGivesFlatSeries) {
  const std::vector<YearBlock> h(49, constant_block(0, 22.0, 12.0, 0.0));
  const auto r = generate_realization(h, CityClimateStats{}, ClimateScenario{0}, 5, 1);
  const auto s = income_forecast(r, kBrockville, PriceConfig{});
  ASSERT_EQ(s.points.size(), 49u);
  for (const auto& p : s.points) EXPECT_EQ(p.income, s.points.front().income);
  EXPECT_EQ(income_variation(s), 0.0);
}

TEST(Income, TwoPathMeanAndOrderInvariance) {
  const auto h = cornsim::testing::varied_history(14);
  CityClimateStats st;
  st.var_tmax = 0.3;
  st.var_tmin = 0.3;
  const auto r = generate_realization(h, st, ClimateScenario{2}, 9, 2);
  const auto both = income_forecast(r, kBrockville, 100.0, 186.12);
  const auto a = income_forecast(std::span(r).first(1), kBrockville, 100.0, 186.12);
  const auto b = income_forecast(std::span(r).last(1), kBrockville, 100.0, 186.12);
  for (std::size_t y = 0; y < 49; ++y) {
    EXPECT_NEAR(both.points[y].income, 0.5 * (a.points[y].income + b.points[y].income), 1e-9);
  }
  EXPECT_EQ(both.n_paths, 2);

  auto many = generate_realization(h, st, ClimateScenario{2}, 10, 40);
  const auto fwd = income_forecast(many, kBrockville, 100.0, 186.12);
  std::reverse(many.begin(), many.end());
  const auto rev = income_forecast(many, kBrockville, 100.0, 186.12);
  for (std::size_t y = 0; y < 49; ++y) EXPECT_NEAR(fwd.points[y].income, rev.points[y].income, 1e-9);
}

TEST(Income, NondecreasingInWarmingBelowOptimum) {
  // Positive C2, common random numbers, every tmax well below the CHU optimum.
  auto h = cornsim::testing::varied_history(15);
  for (auto& b : h) {
    for (auto& d : b.days) {
      d.tmax = std::min(d.tmax, 24.0);
      d.tmin = std::min(d.tmin, d.tmax);
    }
  }
  CityClimateStats st;
  st.var_tmax = 0.04;
  st.var_tmin = 0.04;
  double prev = -1e300;
  for (int w = 0; w <= 4; ++w) {
    const auto r = generate_realization(h, st, ClimateScenario{w}, 77, 30);
    for (const auto& p : r) {
      for (const auto& b : p.blocks) {
        for (const auto& d : b.days) ASSERT_LT(d.tmax, 10.0 + 3.3 / (2 * 0.084));
      }
    }
    const double delta = income_variation(income_forecast(r, kBrockville, 100.0, 186.12));
    EXPECT_GE(delta, prev) << "W=" << w;
    prev = delta;
  }
}

TEST(Income, RejectsEmptyAndDerivedWithoutPrice) {
  EXPECT_THROW(income_forecast(std::vector<ClimatePath>{}, kBrockville, 100.0, 186.12), DataError);
  const std::vector<YearBlock> h(49, constant_block(0, 22.0, 12.0, 0.0));
  const auto r = generate_realization(h, CityClimateStats{}, ClimateScenario{0}, 5, 1);
  PriceConfig derived;
  derived.mode = PriceMode::Derived;
  EXPECT_THROW(income_forecast(r, kBrockville, derived), ConfigError);
  PriceConfig bad;
  bad.fixed_p = -1;
  EXPECT_THROW(bad.validate(), ConfigError);
  EXPECT_THROW(parse_price_mode("spot"), ConfigError);
}

TEST(CompensatedMean, PartitionIndependent) {
  std::vector<double> v;
  for (int i = 0; i < 10000; ++i) v.push_back(1e8 + 0.1 * (i % 7));
  auto r = v;
  std::reverse(r.begin(), r.end());
  EXPECT_NEAR(compensated_mean(v), compensated_mean(r), 1e-12 * 1e8);
}
