#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "scalex/curves.hpp"
#include "scalex/fitting.hpp"
#include "scalex/frontier.hpp"
#include "scalex/multistart.hpp"
#include "scalex/types.hpp"

namespace scalex {

namespace detail {

inline FitDiagnostics log_residual_diagnostics(const std::vector<double>& abs_log_residuals,
                                               double flops_min, double flops_max) {
  FitDiagnostics d;
  d.count = abs_log_residuals.size();
  for (const double r : abs_log_residuals) {
    d.mean_abs_log_residual += r;
    d.max_abs_log_residual = std::max(d.max_abs_log_residual, r);
  }
  if (!abs_log_residuals.empty())
    d.mean_abs_log_residual /= static_cast<double>(abs_log_residuals.size());
  d.flops_min = flops_min;
  d.flops_max = flops_max;
  return d;
}

}  // namespace detail

struct Approach1Options {
  int n_grid = 1500;
  int smooth_window = 10;
  FlopsCalc flops = FlopsCalc::approx6nd();
};

/// Approach 1: smooth each run, interpolate in (log C, loss), take the
/// envelope of minimal loss per FLOP, and fit power laws N(C) and D(C) to the
/// envelope winners.
inline ScalingFit approach1(const std::vector<RunRecord>& runs,
                            const Approach1Options& opt = {}) {
  if (runs.size() < 2)
    throw ValidationError("approach1: need at least 2 runs to form an envelope across model sizes");
  {
    std::set<std::uint64_t> sizes;
    for (const auto& r : runs) sizes.insert(r.n_params);
    if (sizes.size() < 2)
      throw ValidationError("approach1: runs must span at least 2 model sizes");
  }
  const std::vector<RunRecord> smoothed = smooth_runs(runs, opt.smooth_window);
  EnvelopeOptions env_opt;
  env_opt.n_grid = opt.n_grid;
  env_opt.flops = opt.flops;
  const Envelope env = extract_envelope(smoothed, env_opt);

  std::vector<std::pair<double, double>> cn, cd;
  cn.reserve(env.points.size());
  cd.reserve(env.points.size());
  for (const auto& p : env.points) {
    cn.emplace_back(p.flops, static_cast<double>(p.n_params));
    cd.emplace_back(p.flops, p.tokens);
  }
  const PowerLawFit n_fit = fit_power_law(cn);
  const PowerLawFit d_fit = fit_power_law(cd);

  ScalingFit fit;
  fit.approach = Approach::envelope;
  fit.a = n_fit.exponent;
  fit.b = d_fit.exponent;
  fit.n_coeff = n_fit.coeff();
  fit.d_coeff = d_fit.coeff();
  std::vector<double> res;
  res.reserve(cn.size());
  for (const auto& [c, n] : cn)
    res.push_back(std::abs(std::log(n) - std::log(n_fit.predict(c))));
  fit.diagnostics = detail::log_residual_diagnostics(res, env.points.front().flops,
                                                     env.points.back().flops);
  return fit;
}

struct IsoflopBudget {
  double flops = 0.0;  // geometric mean of the member budgets
  std::vector<LossPoint> points;
};

/// Groups final points into isoFLOP budgets by their 6ND compute, allowing
/// `tolerance` relative scatter within a budget.
inline std::vector<IsoflopBudget> group_into_budgets(const std::vector<LossPoint>& points,
                                                     double tolerance = 0.01) {
  if (points.empty()) throw ValidationError("group_into_budgets: no points");
  std::vector<std::pair<double, const LossPoint*>> by_c;
  by_c.reserve(points.size());
  for (const auto& p : points) {
    p.validate();
    by_c.emplace_back(std::log(6.0 * p.n_params * p.tokens), &p);
  }
  std::sort(by_c.begin(), by_c.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });

  const double log_tol = std::log1p(tolerance);
  std::vector<IsoflopBudget> budgets;
  double group_sum = 0.0;
  std::size_t group_n = 0;
  for (const auto& [log_c, p] : by_c) {
    const bool open = group_n > 0;
    if (!open || std::abs(log_c - group_sum / static_cast<double>(group_n)) > log_tol) {
      budgets.emplace_back();
      group_sum = 0.0;
      group_n = 0;
    }
    budgets.back().points.push_back(*p);
    group_sum += log_c;
    ++group_n;
    budgets.back().flops = std::exp(group_sum / static_cast<double>(group_n));
  }
  return budgets;
}

struct Approach2Options {
  double budget_tolerance = 0.01;
};

/// Approach 2: per isoFLOP budget, fit a parabola to loss vs log10 N and read
/// the optimal size off its vertex; then fit power laws through the
/// (C, N_opt) and (C, D_opt) pairs. D_opt comes from the 6ND inversion.
inline ScalingFit approach2(const std::vector<LossPoint>& final_points,
                            const Approach2Options& opt = {}) {
  const std::vector<IsoflopBudget> budgets =
      group_into_budgets(final_points, opt.budget_tolerance);
  if (budgets.size() < 2)
    throw ValidationError("approach2: at least 2 isoFLOP budgets required, found " +
                          std::to_string(budgets.size()));

  std::vector<std::pair<double, double>> cn, cd;
  for (const auto& budget : budgets) {
    std::set<double> sizes;
    for (const auto& p : budget.points) sizes.insert(p.n_params);
    const std::string label = "budget C=" + std::to_string(budget.flops);
    if (sizes.size() < 3)
      throw ValidationError("approach2: " + label + " has fewer than 3 model sizes");
    std::vector<std::pair<double, double>> slice;
    slice.reserve(budget.points.size());
    for (const auto& p : budget.points) slice.emplace_back(std::log10(p.n_params), p.loss);
    ParabolaFit parabola;
    try {
      parabola = fit_parabola(slice);
    } catch (const ValidationError& err) {
      throw ValidationError("approach2: " + label + ": " + err.what());
    }
    const double n_opt = std::pow(10.0, parabola.vertex_x);
    cn.emplace_back(budget.flops, n_opt);
    cd.emplace_back(budget.flops, budget.flops / (6.0 * n_opt));
  }

  const PowerLawFit n_fit = fit_power_law(cn);
  const PowerLawFit d_fit = fit_power_law(cd);

  ScalingFit fit;
  fit.approach = Approach::isoflop;
  fit.a = n_fit.exponent;
  fit.b = d_fit.exponent;
  fit.n_coeff = n_fit.coeff();
  fit.d_coeff = d_fit.coeff();
  std::vector<double> res;
  res.reserve(cn.size());
  for (const auto& [c, n] : cn)
    res.push_back(std::abs(std::log(n) - std::log(n_fit.predict(c))));
  fit.diagnostics =
      detail::log_residual_diagnostics(res, budgets.front().flops, budgets.back().flops);
  return fit;
}

struct Approach3Options {
  MultistartOptions multistart;
};

/// Approach 3: fit the parametric loss by robust multistart optimization and
/// derive the frontier in closed form. By construction a + b = 1.
inline ScalingFit approach3(const std::vector<LossPoint>& final_points,
                            const Approach3Options& opt = {},
                            MultistartFitResult* fit_info = nullptr) {
  const MultistartFitResult ms = multistart_fit(final_points, opt.multistart);
  if (fit_info) *fit_info = ms;
  ScalingFit fit = parametric_fit(ms.params);

  std::vector<double> res;
  res.reserve(final_points.size());
  double c_min = 0.0, c_max = 0.0;
  for (const auto& p : final_points) {
    res.push_back(std::abs(std::log(ms.params.predict_loss(p.n_params, p.tokens)) -
                           std::log(p.loss)));
    const double c = 6.0 * p.n_params * p.tokens;
    c_min = c_min == 0.0 ? c : std::min(c_min, c);
    c_max = std::max(c_max, c);
  }
  fit.diagnostics = detail::log_residual_diagnostics(res, c_min, c_max);
  return fit;
}

struct ResidualSummary {
  std::size_t count = 0;
  double mean_abs_log_residual = 0.0;
  double max_abs_log_residual = 0.0;
  double huber_total = 0.0;
};

/// Held-out predictive check of a parametric fit.
inline ResidualSummary evaluate_fit(const ParametricParams& params,
                                    const std::vector<LossPoint>& heldout, double delta) {
  if (heldout.empty()) throw ValidationError("evaluate_fit: empty held-out set");
  params.validate();
  ResidualSummary out;
  out.count = heldout.size();
  for (const auto& p : heldout) {
    p.validate();
    const double r = std::log(params.predict_loss(p.n_params, p.tokens)) - std::log(p.loss);
    out.mean_abs_log_residual += std::abs(r);
    out.max_abs_log_residual = std::max(out.max_abs_log_residual, std::abs(r));
    out.huber_total += huber(r, delta);
  }
  out.mean_abs_log_residual /= static_cast<double>(heldout.size());
  return out;
}

}  // namespace scalex
