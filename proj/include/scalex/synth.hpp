#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "scalex/frontier.hpp"
#include "scalex/rng.hpp"
#include "scalex/types.hpp"

namespace scalex {

/// Numerical argmin of L(N, C/(6N)) over N by golden-section search on ln N.
/// Serves as the independent oracle for the closed-form frontier; only the
/// bracket (closed-form optimum x [1e-3, 1e3]) borrows from it.
inline double golden_section_opt_params(const ParametricParams& p, double flops,
                                        double tol_log = 1e-10) {
  if (!(flops > 0.0)) throw ValidationError("golden_section_opt_params: flops must be positive");
  p.validate();
  const FrontierConstants fc = closed_form_frontier(p);
  const double center = std::log(fc.G * std::pow(flops / 6.0, fc.a));
  auto loss_at = [&](double ln_n) {
    const double n = std::exp(ln_n);
    return p.predict_loss(n, flops / (6.0 * n));
  };
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = center - 3.0 * std::log(10.0);
  double hi = center + 3.0 * std::log(10.0);
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = loss_at(x1);
  double f2 = loss_at(x2);
  while (hi - lo > tol_log) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = loss_at(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = loss_at(x2);
    }
  }
  return std::exp(0.5 * (lo + hi));
}

/// Loss sample from the parametric ground truth with multiplicative
/// log-normal noise: (E + A/n^alpha + B/d^beta) * exp(eps),
/// eps ~ Normal(0, sigma^2).
inline double gen_loss(const ParametricParams& p, double n, double d, double log_noise_sigma,
                       std::uint64_t seed) {
  p.validate();
  if (!(n > 0.0) || !(d > 0.0)) throw ValidationError("gen_loss: n and d must be positive");
  if (log_noise_sigma < 0.0) throw ValidationError("gen_loss: sigma must be >= 0");
  double eps = 0.0;
  if (log_noise_sigma > 0.0) {
    Rng rng(seed);
    eps = log_noise_sigma * rng.next_normal();
  }
  return p.predict_loss(n, d) * std::exp(eps);
}

struct GenRunOptions {
  /// Ratio d_max / d_first for the log-spaced checkpoints.
  double span = 100.0;
  double log_noise_sigma = 0.0;
};

/// Emulated training run: log-spaced token checkpoints up to d_max, with
/// intermediate losses inflated by (1 + penalty * (1 - d/d_max)) to mimic a
/// schedule whose horizon overshoots the stopping point.
inline RunRecord gen_run(const ParametricParams& p, std::uint64_t n, std::uint64_t d_max,
                         int n_points, double cycle_mismatch_penalty, std::uint64_t seed,
                         const GenRunOptions& opt = {}) {
  if (n_points < 2) throw ValidationError("gen_run: n_points must be >= 2");
  if (n == 0 || d_max == 0) throw ValidationError("gen_run: n and d_max must be positive");
  if (!(opt.span > 1.0)) throw ValidationError("gen_run: span must exceed 1");
  if (d_max < static_cast<std::uint64_t>(n_points))
    throw ValidationError("gen_run: d_max too small for " + std::to_string(n_points) +
                          " distinct checkpoints");
  RunRecord run;
  run.run_id = "synth-n" + std::to_string(n) + "-h" + std::to_string(d_max);
  run.n_params = n;
  run.cosine_cycle_tokens = d_max;
  run.points.reserve(static_cast<std::size_t>(n_points));
  std::uint64_t prev = 0;
  for (int i = 0; i < n_points; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n_points - 1);
    double d = static_cast<double>(d_max) * std::pow(opt.span, t - 1.0);
    std::uint64_t tokens = static_cast<std::uint64_t>(std::llround(d));
    if (tokens <= prev) tokens = prev + 1;
    prev = tokens;
    const double base = gen_loss(p, static_cast<double>(n), static_cast<double>(tokens),
                                 opt.log_noise_sigma, Rng::substream(seed, static_cast<std::uint64_t>(i)).next_u64());
    const double factor =
        1.0 + cycle_mismatch_penalty *
                  (1.0 - static_cast<double>(tokens) / static_cast<double>(d_max));
    run.points.push_back({tokens, base * factor});
  }
  run.validate();
  return run;
}

struct GenIsoflopOptions {
  /// Half-width of the size sweep around the optimum, in decades of N.
  double spread_decades = 1.0;
  double log_noise_sigma = 0.0;
};

/// IsoFLOP suite: per budget C, model sizes log-spaced around the numerically
/// located optimum N*, tokens set by D = C/(6N).
inline std::vector<LossPoint> gen_isoflop_suite(const ParametricParams& p,
                                                const std::vector<double>& budgets,
                                                int sizes_per_budget, std::uint64_t seed,
                                                const GenIsoflopOptions& opt = {}) {
  if (sizes_per_budget < 3)
    throw ValidationError("gen_isoflop_suite: sizes_per_budget must be >= 3");
  if (budgets.empty()) throw ValidationError("gen_isoflop_suite: no budgets");
  std::vector<LossPoint> out;
  out.reserve(budgets.size() * static_cast<std::size_t>(sizes_per_budget));
  std::uint64_t draw = 0;
  for (const double c : budgets) {
    if (!(c > 0.0)) throw ValidationError("gen_isoflop_suite: budgets must be positive");
    const double n_star = golden_section_opt_params(p, c);
    for (int i = 0; i < sizes_per_budget; ++i) {
      const double t = sizes_per_budget == 1
                           ? 0.0
                           : 2.0 * static_cast<double>(i) / (sizes_per_budget - 1) - 1.0;
      const double n = n_star * std::pow(10.0, opt.spread_decades * t);
      const double d = c / (6.0 * n);
      LossPoint pt;
      pt.n_params = n;
      pt.tokens = d;
      pt.loss = gen_loss(p, n, d, opt.log_noise_sigma, Rng::substream(seed, draw).next_u64());
      ++draw;
      out.push_back(pt);
    }
  }
  return out;
}

}  // namespace scalex
