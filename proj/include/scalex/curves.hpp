#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "scalex/flops.hpp"
#include "scalex/types.hpp"

namespace scalex {

/// Gaussian smoothing over observation order: y[i] becomes a kernel-weighted
/// average of the points within radius floor(window/2), sigma = window/4.
/// The symmetric stencil leaves constant and (interior) linear series
/// unchanged; at the boundaries the kernel is clipped and renormalized.
inline std::vector<double> gaussian_smooth_values(const std::vector<double>& y, int window) {
  if (window < 1) throw ValidationError("gaussian_smooth: window must be >= 1");
  const std::size_t n = y.size();
  std::vector<double> out(n);
  if (n == 0) return out;
  const long radius = std::min<long>(window / 2, static_cast<long>(n) - 1);
  const double sigma = static_cast<double>(window) / 4.0;
  std::vector<double> kernel(static_cast<std::size_t>(radius) + 1);
  for (long k = 0; k <= radius; ++k)
    kernel[static_cast<std::size_t>(k)] =
        sigma > 0.0 ? std::exp(-0.5 * (k / sigma) * (k / sigma)) : (k == 0 ? 1.0 : 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const long lo = std::max<long>(0, static_cast<long>(i) - radius);
    const long hi = std::min<long>(static_cast<long>(n) - 1, static_cast<long>(i) + radius);
    double num = 0.0, den = 0.0;
    for (long j = lo; j <= hi; ++j) {
      const double w = kernel[static_cast<std::size_t>(std::labs(j - static_cast<long>(i)))];
      num += w * y[static_cast<std::size_t>(j)];
      den += w;
    }
    out[i] = num / den;
  }
  return out;
}

/// (x, y) overload; x must be non-decreasing and is returned unchanged.
inline std::vector<std::pair<double, double>> gaussian_smooth(
    const std::vector<std::pair<double, double>>& series, int window) {
  std::vector<double> y(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (i > 0 && series[i].first < series[i - 1].first)
      throw ValidationError("gaussian_smooth: series must be ordered by x");
    y[i] = series[i].second;
  }
  const std::vector<double> sm = gaussian_smooth_values(y, window);
  std::vector<std::pair<double, double>> out(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) out[i] = {series[i].first, sm[i]};
  return out;
}

/// Smooths every run's loss series in observation order.
inline std::vector<RunRecord> smooth_runs(std::vector<RunRecord> runs, int window) {
  for (auto& run : runs) {
    std::vector<double> y(run.points.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = run.points[i].loss;
    const std::vector<double> sm = gaussian_smooth_values(y, window);
    for (std::size_t i = 0; i < y.size(); ++i) run.points[i].loss = sm[i];
  }
  return runs;
}

/// Continuous map FLOPs -> loss for one run: piecewise linear in
/// (log10 FLOPs, loss). Queries outside the observed domain are an error,
/// never an extrapolation.
class RunInterpolant {
 public:
  RunInterpolant(const RunRecord& run, const FlopsCalc& calc) {
    run.validate();
    run_id_ = run.run_id;
    n_params_ = run.n_params;
    per_token_ = calc.per_token(run);
    log_c_.reserve(run.points.size());
    loss_.reserve(run.points.size());
    for (const auto& p : run.points) {
      log_c_.push_back(std::log10(per_token_ * static_cast<double>(p.tokens)));
      loss_.push_back(p.loss);
    }
  }

  const std::string& run_id() const { return run_id_; }
  std::uint64_t n_params() const { return n_params_; }
  double per_token_flops() const { return per_token_; }
  double min_flops() const { return std::pow(10.0, log_c_.front()); }
  double max_flops() const { return std::pow(10.0, log_c_.back()); }

  bool covers_log10(double log_c) const {
    return log_c >= log_c_.front() && log_c <= log_c_.back();
  }

  double loss_at_log10(double log_c) const {
    if (!covers_log10(log_c))
      throw ValidationError("run " + run_id_ + ": query at log10(flops)=" +
                            std::to_string(log_c) + " is outside the interpolation domain [" +
                            std::to_string(log_c_.front()) + ", " +
                            std::to_string(log_c_.back()) + "]");
    const auto it = std::lower_bound(log_c_.begin(), log_c_.end(), log_c);
    const std::size_t hi = static_cast<std::size_t>(it - log_c_.begin());
    if (hi == 0) return loss_.front();
    const std::size_t lo = hi - 1;
    if (hi == log_c_.size()) return loss_.back();
    const double span = log_c_[hi] - log_c_[lo];
    if (span <= 0.0) return loss_[hi];
    const double t = (log_c - log_c_[lo]) / span;
    return loss_[lo] + t * (loss_[hi] - loss_[lo]);
  }

  double loss_at(double flops) const { return loss_at_log10(std::log10(flops)); }

  /// True when flops lies in the final `fraction` of this run's FLOPs span.
  bool in_final_fraction(double flops, double fraction) const {
    const double lo = min_flops();
    const double hi = max_flops();
    return flops >= hi - fraction * (hi - lo);
  }

 private:
  std::string run_id_;
  std::uint64_t n_params_ = 0;
  double per_token_ = 0.0;
  std::vector<double> log_c_;
  std::vector<double> loss_;
};

/// Builds the interpolant for a single run (losses taken as given; smooth
/// beforehand if desired).
inline RunInterpolant interpolate_run(const RunRecord& run,
                                      const FlopsCalc& calc = FlopsCalc::approx6nd()) {
  return RunInterpolant(run, calc);
}

struct Envelope {
  std::vector<FrontierPoint> points;
  FlopsConvention convention = FlopsConvention::approx_6nd;
  /// Fraction of envelope winners lying in the last 15% of their run's FLOPs
  /// span. Diagnostic only.
  double fraction_in_final_15pct = 0.0;
};

struct EnvelopeOptions {
  int n_grid = 1500;
  FlopsCalc flops = FlopsCalc::approx6nd();
};

/// Minimal interpolated loss per FLOPs value over a log-spaced grid spanning
/// the union of the runs' domains. Grid points covered by no run are skipped;
/// ties break toward the smaller model.
inline Envelope extract_envelope(const std::vector<RunRecord>& runs,
                                 const EnvelopeOptions& opt = {}) {
  if (runs.empty()) throw ValidationError("extract_envelope: no runs");
  if (opt.n_grid < 1) throw ValidationError("extract_envelope: n_grid must be >= 1");

  std::vector<RunInterpolant> interp;
  interp.reserve(runs.size());
  for (const auto& r : runs) interp.emplace_back(r, opt.flops);

  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& it : interp) {
    lo = std::min(lo, std::log10(it.min_flops()));
    hi = std::max(hi, std::log10(it.max_flops()));
  }

  Envelope env;
  env.convention = opt.flops.convention();
  std::size_t final_15 = 0;
  for (int g = 0; g < opt.n_grid; ++g) {
    const double log_c =
        opt.n_grid == 1 ? lo : lo + (hi - lo) * static_cast<double>(g) / (opt.n_grid - 1);
    const RunInterpolant* best = nullptr;
    double best_loss = std::numeric_limits<double>::infinity();
    for (const auto& it : interp) {
      if (!it.covers_log10(log_c)) continue;
      const double loss = it.loss_at_log10(log_c);
      if (best == nullptr || loss < best_loss ||
          (loss == best_loss && it.n_params() < best->n_params())) {
        best = &it;
        best_loss = loss;
      }
    }
    if (best == nullptr) continue;
    const double c = std::pow(10.0, log_c);
    FrontierPoint p;
    p.flops = c;
    p.n_params = best->n_params();
    p.tokens = c / best->per_token_flops();
    p.loss = best_loss;
    env.points.push_back(p);
    if (best->in_final_fraction(c, 0.15)) ++final_15;
  }
  if (env.points.empty())
    throw ValidationError("extract_envelope: no grid point is covered by any run");
  env.fraction_in_final_15pct =
      static_cast<double>(final_15) / static_cast<double>(env.points.size());
  return env;
}

/// Cosine learning-rate schedule decaying from max_lr to max_lr/decay_factor
/// over total_steps. Undefined past its cycle.
inline double cosine_lr(std::uint64_t step, std::uint64_t total_steps, double max_lr,
                        double decay_factor = 10.0) {
  if (total_steps == 0) throw ValidationError("cosine_lr: total_steps must be positive");
  if (step > total_steps)
    throw ValidationError("cosine_lr: step " + std::to_string(step) +
                          " exceeds the schedule cycle of " + std::to_string(total_steps));
  if (!(decay_factor >= 1.0)) throw ValidationError("cosine_lr: decay_factor must be >= 1");
  const double min_lr = max_lr / decay_factor;
  const double phase = std::numbers::pi * static_cast<double>(step) /
                       static_cast<double>(total_steps);
  return min_lr + 0.5 * (max_lr - min_lr) * (1.0 + std::cos(phase));
}

}  // namespace scalex
