#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "scalex/approaches.hpp"
#include "scalex/parallel.hpp"
#include "scalex/rng.hpp"
#include "scalex/types.hpp"

namespace scalex {

struct BootstrapOptions {
  std::uint64_t n_resamples = 100;
  double fraction = 0.8;  // of the dataset, sampled without replacement
  std::uint64_t seed = 0;
  int threads = 0;
  double max_failure_fraction = 0.2;
};

struct BootstrapResult {
  BootstrapSummary a;
  BootstrapSummary b;
  std::uint64_t n_failed = 0;
  ScalingFit point_fit;  // full-data fit the summaries refer to
};

namespace detail {

/// Hazen percentile: linear interpolation between closest order statistics.
inline double percentile(std::vector<double> values, double p) {
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  const double h = p * n - 0.5;
  if (h <= 0.0) return values.front();
  if (h >= n - 1.0) return values.back();
  const std::size_t i = static_cast<std::size_t>(h);
  const double frac = h - static_cast<double>(i);
  return values[i] + frac * (values[i + 1] - values[i]);
}

template <typename Refit>
BootstrapResult bootstrap_impl(std::size_t n_units, const ScalingFit& point_fit,
                               Refit&& refit, const BootstrapOptions& opt) {
  if (!(opt.fraction > 0.0) || opt.fraction > 1.0)
    throw ValidationError("bootstrap: fraction must lie in (0, 1]");
  if (opt.n_resamples == 0) throw ValidationError("bootstrap: n_resamples must be positive");
  const std::size_t m =
      std::max<std::size_t>(1, static_cast<std::size_t>(
                                   std::ceil(opt.fraction * static_cast<double>(n_units))));

  struct Sample {
    double a = 0.0, b = 0.0;
    bool ok = false;
  };
  std::vector<Sample> samples(opt.n_resamples);
  parallel_for(opt.n_resamples, opt.threads, [&](std::size_t r) {
    Rng rng = Rng::substream(opt.seed, r);
    const std::vector<std::size_t> idx = sample_without_replacement(n_units, m, rng);
    try {
      const ScalingFit fit = refit(idx);
      samples[r] = {fit.a, fit.b, true};
    } catch (const std::exception&) {
      samples[r].ok = false;
    }
  });

  std::vector<double> av, bv;
  av.reserve(samples.size());
  bv.reserve(samples.size());
  for (const auto& s : samples) {
    if (!s.ok) continue;
    av.push_back(s.a);
    bv.push_back(s.b);
  }
  const std::uint64_t n_failed = opt.n_resamples - av.size();
  if (static_cast<double>(n_failed) >
      opt.max_failure_fraction * static_cast<double>(opt.n_resamples))
    throw NumericalError("bootstrap: " + std::to_string(n_failed) + " of " +
                         std::to_string(opt.n_resamples) + " resamples failed to fit");

  auto summarize = [&](double point, const std::vector<double>& values) {
    BootstrapSummary s;
    s.point = point;
    s.p10 = percentile(values, 0.10);
    s.p90 = percentile(values, 0.90);
    s.n_resamples = opt.n_resamples;
    s.resample_fraction = opt.fraction;
    s.seed = opt.seed;
    return s;
  };
  BootstrapResult out;
  out.a = summarize(point_fit.a, av);
  out.b = summarize(point_fit.b, bv);
  out.n_failed = n_failed;
  out.point_fit = point_fit;
  return out;
}

}  // namespace detail

/// Bootstrap intervals for Approach 1; the unit of resampling is a whole run.
inline BootstrapResult bootstrap_approach1(const std::vector<RunRecord>& runs,
                                           const Approach1Options& fit_opt,
                                           const BootstrapOptions& opt) {
  const ScalingFit point = approach1(runs, fit_opt);
  return detail::bootstrap_impl(
      runs.size(), point,
      [&](const std::vector<std::size_t>& idx) {
        std::vector<RunRecord> subset;
        subset.reserve(idx.size());
        for (const std::size_t i : idx) subset.push_back(runs[i]);
        return approach1(subset, fit_opt);
      },
      opt);
}

/// Bootstrap intervals for Approach 2; the unit of resampling is a final point.
inline BootstrapResult bootstrap_approach2(const std::vector<LossPoint>& points,
                                           const Approach2Options& fit_opt,
                                           const BootstrapOptions& opt) {
  const ScalingFit point = approach2(points, fit_opt);
  return detail::bootstrap_impl(
      points.size(), point,
      [&](const std::vector<std::size_t>& idx) {
        std::vector<LossPoint> subset;
        subset.reserve(idx.size());
        for (const std::size_t i : idx) subset.push_back(points[i]);
        return approach2(subset, fit_opt);
      },
      opt);
}

/// Bootstrap intervals for Approach 3; the unit of resampling is a final point.
inline BootstrapResult bootstrap_approach3(const std::vector<LossPoint>& points,
                                           const Approach3Options& fit_opt,
                                           const BootstrapOptions& opt) {
  Approach3Options serial_fit = fit_opt;
  // Resamples already run in parallel; keep the inner multistart serial.
  serial_fit.multistart.threads = 1;
  const ScalingFit point = approach3(points, serial_fit);
  return detail::bootstrap_impl(
      points.size(), point,
      [&](const std::vector<std::size_t>& idx) {
        std::vector<LossPoint> subset;
        subset.reserve(idx.size());
        for (const std::size_t i : idx) subset.push_back(points[i]);
        return approach3(subset, serial_fit);
      },
      opt);
}

}  // namespace scalex
