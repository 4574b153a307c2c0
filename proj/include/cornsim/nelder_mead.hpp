#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>

namespace cornsim {

template <std::size_t N>
using Point = std::array<double, N>;

template <std::size_t N>
struct SimplexResult {
  Point<N> x{};
  double value = std::numeric_limits<double>::infinity();
  int evaluations = 0;
  bool converged = false;
};

struct SimplexOptions {
  double initial_step = 0.1;
  double tolerance = 1e-8;  ///< max vertex distance (inf-norm) from the best vertex
  int max_evaluations = 20000;
};

/// Minimizes `f` with the Nelder–Mead simplex (reflection 1, expansion 2,
/// contraction ½, shrink ½). `f` may return +inf to reject a point.
template <std::size_t N, class F>
SimplexResult<N> nelder_mead(F&& f, const Point<N>& start, const SimplexOptions& opts = {}) {
  std::array<Point<N>, N + 1> v{};
  std::array<double, N + 1> fv{};
  int evals = 0;
  auto eval = [&](const Point<N>& p) {
    ++evals;
    const double y = f(p);
    return std::isnan(y) ? std::numeric_limits<double>::infinity() : y;
  };
  v[0] = start;
  for (std::size_t i = 0; i < N; ++i) {
    v[i + 1] = start;
    v[i + 1][i] += opts.initial_step;
  }
  for (std::size_t i = 0; i <= N; ++i) fv[i] = eval(v[i]);

  std::array<std::size_t, N + 1> order{};
  auto combine = [](const Point<N>& a, const Point<N>& b, double t) {
    Point<N> r{};
    for (std::size_t i = 0; i < N; ++i) r[i] = a[i] + t * (b[i] - a[i]);
    return r;
  };

  SimplexResult<N> res;
  for (;;) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return fv[a] < fv[b]; });
    const auto best = order.front(), worst = order.back(), second = order[N - 1];

    double diameter = 0.0;
    for (std::size_t i = 0; i <= N; ++i) {
      for (std::size_t j = 0; j < N; ++j) {
        diameter = std::max(diameter, std::abs(v[i][j] - v[best][j]));
      }
    }
    if (diameter < opts.tolerance && std::isfinite(fv[best])) {
      res.converged = true;
      break;
    }
    if (evals >= opts.max_evaluations) break;

    Point<N> centroid{};
    for (std::size_t i = 0; i <= N; ++i) {
      if (i == worst) continue;
      for (std::size_t j = 0; j < N; ++j) centroid[j] += v[i][j] / double(N);
    }
    const auto reflected = combine(centroid, v[worst], -1.0);
    const double fr = eval(reflected);
    if (fr < fv[best]) {
      const auto expanded = combine(centroid, v[worst], -2.0);
      const double fe = eval(expanded);
      if (fe < fr) {
        v[worst] = expanded;
        fv[worst] = fe;
      } else {
        v[worst] = reflected;
        fv[worst] = fr;
      }
      continue;
    }
    if (fr < fv[second]) {
      v[worst] = reflected;
      fv[worst] = fr;
      continue;
    }
    const bool outside = fr < fv[worst];
    const auto contracted = outside ? combine(centroid, reflected, 0.5)
                                    : combine(centroid, v[worst], 0.5);
    const double fc = eval(contracted);
    if (fc < (outside ? fr : fv[worst])) {
      v[worst] = contracted;
      fv[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= N; ++i) {
      if (i == best) continue;
      v[i] = combine(v[best], v[i], 0.5);
      fv[i] = eval(v[i]);
    }
  }
  const auto best = std::size_t(std::min_element(fv.begin(), fv.end()) - fv.begin());
  res.x = v[best];
  res.value = fv[best];
  res.evaluations = evals;
  return res;
}

}  // namespace cornsim
