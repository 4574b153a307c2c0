#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "cornsim/error.hpp"
#include "cornsim/nelder_mead.hpp"

namespace cornsim {

/// Generalized extreme value parameters: shape k (k != 0), scale sigma > 0,
/// location mu.
struct GevParams {
  double k = 0.1;
  double sigma = 1.0;
  double mu = 0.0;
  friend bool operator==(const GevParams&, const GevParams&) = default;
};

/// Smallest |k| the fitter will use; the Gumbel limit k = 0 is not modeled.
inline constexpr double kMinAbsShape = 1e-4;

inline void validate(const GevParams& p) {
  if (!(p.sigma > 0.0) || !std::isfinite(p.sigma)) throw DataError("GEV scale must be positive");
  if (p.k == 0.0 || !std::isfinite(p.k)) throw DataError("GEV shape must be finite and nonzero");
  if (!std::isfinite(p.mu)) throw DataError("GEV location must be finite");
}

/// Density; zero outside the support 1 + k(x-mu)/sigma > 0.
inline double gev_pdf(const GevParams& p, double x) {
  const double t = 1.0 + p.k * (x - p.mu) / p.sigma;
  if (!(t > 0.0)) return 0.0;
  const double log_t = std::log(t);
  return std::exp(-(1.0 + 1.0 / p.k) * log_t - std::exp(-log_t / p.k)) / p.sigma;
}

inline double gev_cdf(const GevParams& p, double x) {
  const double t = 1.0 + p.k * (x - p.mu) / p.sigma;
  if (!(t > 0.0)) return p.k > 0.0 ? 0.0 : 1.0;
  return std::exp(-std::pow(t, -1.0 / p.k));
}

/// Inverse CDF, u in (0,1).
inline double gev_quantile(const GevParams& p, double u) {
  return p.mu + p.sigma * (std::pow(-std::log(u), -p.k) - 1.0) / p.k;
}

/// `n` inverse-CDF draws.
inline std::vector<double> gev_sample(const GevParams& p, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> out(n);
  for (auto& x : out) {
    double u = 0.0;
    while (u <= 0.0) u = unif(rng);
    x = gev_quantile(p, u);
  }
  return out;
}

/// Log-likelihood; -inf when any point falls outside the support.
inline double gev_log_likelihood(const GevParams& p, std::span<const double> sample) {
  if (!(p.sigma > 0.0)) return -std::numeric_limits<double>::infinity();
  const double inv_k = 1.0 / p.k;
  const double inv_sigma = 1.0 / p.sigma;
  double sum_log_t = 0.0, sum_pow = 0.0;
  for (double x : sample) {
    const double t = 1.0 + p.k * (x - p.mu) * inv_sigma;
    if (!(t > 0.0)) return -std::numeric_limits<double>::infinity();
    const double log_t = std::log(t);
    sum_log_t += log_t;
    sum_pow += std::exp(-log_t * inv_k);
  }
  return -double(sample.size()) * std::log(p.sigma) - (1.0 + inv_k) * sum_log_t - sum_pow;
}

struct GevFitOptions {
  std::uint64_t seed = 0x6e76f1u;
  int restarts = 3;            ///< jittered restarts after the moment-based start
  double tolerance = 1e-8;     ///< simplex diameter in standardized parameters
  int max_evaluations = 20000; ///< per simplex run
};

struct GevFit {
  GevParams params;
  double log_likelihood = 0.0;
  double initial_log_likelihood = 0.0;  ///< at the moment-based starting point
  int evaluations = 0;
  int converged_runs = 0;
};

namespace detail {

inline double clamp_shape(double k) {
  if (std::abs(k) >= kMinAbsShape) return k;
  return k < 0.0 ? -kMinAbsShape : kMinAbsShape;
}

// Parameters live in standardized units z = (x - mean)/sd as (k, log sigma_z, mu_z).
inline GevParams from_standardized(const Point<3>& q) {
  return GevParams{clamp_shape(q[0]), std::exp(q[1]), q[2]};
}

}  // namespace detail

/// Maximum-likelihood GEV fit.
///
/// The sample is standardized, then the negative log-likelihood is minimized
/// over (k, log sigma, mu) with Nelder–Mead. The first start comes from the
/// Gumbel moment estimates with the sign of k taken from the sample skewness;
/// `restarts` further starts jitter that point with a generator seeded from
/// `opts.seed`, and the best run is polished by one more run from its optimum.
/// Infeasible points (any observation outside the support) evaluate to +inf,
/// so the support constraint holds at every accepted vertex.
inline GevFit fit_gev(std::span<const double> sample, const GevFitOptions& opts = {}) {
  if (sample.size() < 30) {
    throw DataError("fit_gev: need at least 30 observations, got " + std::to_string(sample.size()));
  }
  double mean = 0.0;
  for (double x : sample) mean += x;
  mean /= double(sample.size());
  double m2 = 0.0, m3 = 0.0;
  for (double x : sample) {
    const double d = x - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= double(sample.size());
  m3 /= double(sample.size());
  if (!(m2 > 0.0)) throw NumericalError("fit_gev: sample is constant");
  const double sd = std::sqrt(m2 * double(sample.size()) / double(sample.size() - 1));
  const double skew = m3 / std::pow(m2, 1.5);

  std::vector<double> z(sample.size());
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = (sample[i] - mean) / sd;
  const auto [zmin_it, zmax_it] = std::minmax_element(z.begin(), z.end());
  const double zmin = *zmin_it, zmax = *zmax_it;

  auto objective = [&](const Point<3>& q) {
    if (std::abs(q[1]) > 50.0) return std::numeric_limits<double>::infinity();
    const double ll = gev_log_likelihood(detail::from_standardized(q), z);
    return std::isfinite(ll) ? -ll : std::numeric_limits<double>::infinity();
  };

  constexpr double kEuler = 0.5772156649015329;
  constexpr double kGumbelSkew = 1.1395470994046486;
  const double sigma0 = std::sqrt(6.0) / std::numbers::pi;
  Point<3> start{skew < kGumbelSkew ? -0.1 : 0.1, std::log(sigma0), -kEuler * sigma0};
  // Pull k toward zero until every observation lies inside the support.
  auto feasible = [&](const Point<3>& q) {
    const auto p = detail::from_standardized(q);
    return 1.0 + p.k * (zmin - p.mu) / p.sigma > 0.0 && 1.0 + p.k * (zmax - p.mu) / p.sigma > 0.0;
  };
  while (!feasible(start) && std::abs(start[0]) > kMinAbsShape) start[0] *= 0.5;
  if (!feasible(start)) throw NumericalError("fit_gev: no feasible starting point");

  GevFit fit;
  fit.initial_log_likelihood = -objective(start);
  if (!std::isfinite(fit.initial_log_likelihood)) {
    throw NumericalError("fit_gev: likelihood is not finite at the starting point");
  }

  SimplexOptions so;
  so.tolerance = opts.tolerance;
  so.max_evaluations = opts.max_evaluations;
  so.initial_step = 0.1;

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> jitter(0.0, 1.0);
  SimplexResult<3> best;
  for (int run = 0; run <= opts.restarts; ++run) {
    Point<3> s = start;
    if (run > 0) {
      s[0] += 0.1 * jitter(rng);
      s[1] += 0.2 * jitter(rng);
      s[2] += 0.2 * jitter(rng);
      if (!feasible(s)) s = start;
    }
    const auto r = nelder_mead<3>(objective, s, so);
    fit.evaluations += r.evaluations;
    fit.converged_runs += r.converged ? 1 : 0;
    if (r.value < best.value) best = r;
  }
  {
    so.initial_step = 0.01;
    const auto r = nelder_mead<3>(objective, best.x, so);
    fit.evaluations += r.evaluations;
    fit.converged_runs += r.converged ? 1 : 0;
    if (r.value <= best.value) best = r;
  }
  if (fit.converged_runs == 0 || !std::isfinite(best.value)) {
    throw NumericalError("fit_gev: simplex did not converge in " + std::to_string(opts.restarts + 2) +
                         " runs (" + std::to_string(fit.evaluations) + " evaluations, best -logL " +
                         std::to_string(best.value) + ")");
  }
  const auto pz = detail::from_standardized(best.x);
  fit.params = GevParams{pz.k, pz.sigma * sd, mean + pz.mu * sd};
  fit.log_likelihood = -best.value - double(sample.size()) * std::log(sd);
  fit.initial_log_likelihood -= double(sample.size()) * std::log(sd);
  return fit;
}

}  // namespace cornsim
