#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "cornsim/fixtures.hpp"
#include "cornsim/trends.hpp"
#include "test_util.hpp"

using namespace cornsim;
using cornsim::testing::constant_block;

TEST(AnnualMeans, ConstantAndAlternatingBlocks) {
  EXPECT_DOUBLE_EQ(annual_means(constant_block(1970, 20.0, 5.0, 1.0)).tmax_mean, 20.0);
  EXPECT_DOUBLE_EQ(annual_means(constant_block(1970, 20.0, 5.0, 1.0)).rain_mean, 1.0);
  auto b = constant_block(1970, 0.0, 0.0, 0.0);
  for (std::size_t d = 0; d < b.days.size(); ++d) b.days[d].tmax = d % 2 == 0 ? 20.0 : 10.0;
  EXPECT_NEAR(annual_means(b).tmax_mean, (183 * 20.0 + 182 * 10.0) / 365.0, 1e-12);
  EXPECT_NEAR(annual_means(b).tmax_mean, 15.013698630136986, 1e-12);
}

TEST(Ols, ExactLineAndHandOracle) {
  const std::vector<double> x{1, 2, 3, 4};
  const std::vector<double> y{3, 5, 7, 9};
  const auto f = ols_fit(x, y);
  EXPECT_NEAR(f.slope, 2.0, 1e-12);
  EXPECT_NEAR(f.intercept, 1.0, 1e-12);
  EXPECT_NEAR(f.r_squared, 1.0, 1e-12);

  const std::vector<double> x3{1, 2, 3}, y3{1, 3, 2};
  const auto g = ols_fit(x3, y3);
  EXPECT_NEAR(g.slope, 0.5, 1e-12);
  EXPECT_NEAR(g.intercept, 1.0, 1e-12);
  EXPECT_NEAR(g.r_squared, 0.25, 1e-12);
}

TEST(Ols, ConstantTargetHasUnitRSquared) {
  const std::vector<double> x{1, 2, 3}, y{4, 4, 4};
  const auto f = ols_fit(x, y);
  EXPECT_EQ(f.slope, 0.0);
  EXPECT_EQ(f.r_squared, 1.0);
}

TEST(Ols, DegenerateInputs) {
  const std::vector<double> two{1, 2}, c{2, 2, 2}, y{1, 2, 3};
  EXPECT_THROW(ols_fit(two, two), DataError);
  EXPECT_THROW(ols_fit(c, y), NumericalError);
}

TEST(Ols, ResidualsOrthogonalToRegressor) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> z(0.0, 1.0);
  for (int rep = 0; rep < 10; ++rep) {
    std::vector<double> x(49), y(49);
    for (int i = 0; i < 49; ++i) {
      x[std::size_t(i)] = i + 1;
      y[std::size_t(i)] = 3.0 + 0.2 * i + 5.0 * z(rng);
    }
    const auto f = ols_fit(x, y);
    double dot = 0.0, sum = 0.0;
    for (int i = 0; i < 49; ++i) {
      const double e = y[std::size_t(i)] - f.intercept - f.slope * x[std::size_t(i)];
      dot += (x[std::size_t(i)] - 25.0) * e;
      sum += e;
    }
    EXPECT_NEAR(dot, 0.0, 1e-9);
    EXPECT_NEAR(sum, 0.0, 1e-9);
  }
}

TEST(CityStats, IdenticalBlocksGiveZeroTrendsAndVariances) {
  std::vector<YearBlock> h(49, constant_block(0, 15.0, 3.0, 2.0));
  const auto s = estimate_city_climate_stats(h, 1);
  EXPECT_EQ(s.trend_tmax, 0.0);
  EXPECT_EQ(s.trend_rain, 0.0);
  EXPECT_EQ(s.var_tmax, 0.0);
  EXPECT_EQ(s.var_tmin, 0.0);
  EXPECT_EQ(s.var_rain, 0.0);
}

TEST(CityStats, LinearRampHasClosedFormVariance) {
  std::vector<YearBlock> h;
  for (int i = 1; i <= 49; ++i) h.push_back(constant_block(1969 + i, 10.0 + 0.1 * i, 0.0, 1.0));
  const auto s = estimate_city_climate_stats(h, 1);
  EXPECT_NEAR(s.trend_tmax, 0.1, 1e-12);
  // Sample variance of an arithmetic progression: d² n(n+1)/12.
  EXPECT_NEAR(s.var_tmax, 0.01 * 49 * 50 / 12.0, 1e-10);
  EXPECT_NEAR(s.var_tmax, 2.0416666666666665, 1e-10);
}

TEST(CityStats, ReversalFlipsTrendsKeepsVariances) {
  const auto h = cornsim::testing::varied_history(21);
  auto r = h;
  std::reverse(r.begin(), r.end());
  const auto a = estimate_city_climate_stats(h, 1);
  const auto b = estimate_city_climate_stats(r, 1);
  EXPECT_NEAR(a.trend_tmax, -b.trend_tmax, 1e-12);
  EXPECT_NEAR(a.trend_tmin, -b.trend_tmin, 1e-12);
  EXPECT_NEAR(a.trend_rain, -b.trend_rain, 1e-12);
  EXPECT_NEAR(a.var_tmax, b.var_tmax, 1e-10);
  EXPECT_NEAR(a.var_rain, b.var_rain, 1e-10);

  std::vector<std::size_t> idx(49);
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), std::mt19937_64(8));
  std::vector<YearBlock> s;
  for (auto i : idx) s.push_back(h[i]);
  EXPECT_NEAR(estimate_city_climate_stats(s, 1).var_tmin, a.var_tmin, 1e-10);
}

TEST(CityStats, RequiresFortyNineBlocks) {
  std::vector<YearBlock> h(48, constant_block(0, 1, 0, 0));
  EXPECT_THROW(estimate_city_climate_stats(h, 1), DataError);
}

TEST(CityStats, StationFixturesRecoverTheirTrends) {
  // Brockville carries 0.456 tenths °C/yr; Fergus warms about 1.2 °C over 49 years.
  const auto brock = *fixtures::find_preset("brockville");
  const auto fergus = *fixtures::find_preset("fergus");
  const auto hb = slice_year_blocks(fill_gaps(fixtures::synthetic_weather(brock, 1)), 1970, 49);
  const auto hf = slice_year_blocks(fill_gaps(fixtures::synthetic_weather(fergus, 1)), 1970, 49);
  const auto sb = estimate_city_climate_stats(hb, 1);
  const auto sf = estimate_city_climate_stats(hf, 3);
  // Year-to-year anomalies (sd ~0.7 °C) leave a slope standard error of ~0.007 °C/yr.
  EXPECT_NEAR(sb.trend_tmax, 0.0456, 0.025);
  EXPECT_NEAR(fergus.trend_tmax * 49, 1.2054, 1e-12);
  EXPECT_NEAR(sf.trend_tmax * 49, 1.2, 1.0);
  EXPECT_GT(sb.var_tmax, 0.0);
}
