// Reference corn price from a market CSV and per-city season CSVs written by
// `cornsim simulate` (seasons_<city>.csv).
//
//   reference_price market.csv 1970 out/seasons_ottawa.csv out/seasons_toronto.csv
#include <cstdio>
#include <cstdlib>

#include "cornsim/cornsim.hpp"

int main(int argc, char** argv) {
  using namespace cornsim;
  if (argc < 4) {
    std::fprintf(stderr, "usage: %s market.csv first_year seasons.csv...\n", argv[0]);
    return 1;
  }
  try {
    const auto market = parse_market_series(read_text_file(argv[1]));
    const int first_year = std::atoi(argv[2]);
    std::vector<CitySeasons> cities;
    for (int i = 3; i < argc; ++i) {
      const auto text = read_text_file(argv[i]);
      CitySeasons seasons;
      for (const auto& r : csv::read(text, "year,planting_day,harvest_day,length")) {
        const int y = int(csv::to_int(r.fields[0], r.line));
        const int pl = int(csv::to_int(r.fields[1], r.line));
        const int hv = int(csv::to_int(r.fields[2], r.line));
        seasons.push_back({first_year + y - 1, GrowingSeason{y, pl, hv, hv - pl + 1}});
      }
      cities.push_back(std::move(seasons));
    }
    std::printf("P = %.2f CAD/tonne\n", compute_reference_price(market, cities));
  } catch (const Error& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  }
}
