#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scalex/fitting.hpp"
#include "scalex/types.hpp"

namespace scalex {

/// Reference training budget: 1 "Gopher unit" of compute.
inline constexpr double kGopherFlops = 5.76e23;

/// Closed-form compute-optimal frontier of the parametric loss under C = 6ND:
///   N_opt(C) = G (C/6)^a,  D_opt(C) = G^-1 (C/6)^b,
///   G = (alpha A / (beta B))^(1/(alpha+beta)),
///   a = beta/(alpha+beta), b = alpha/(alpha+beta).
struct FrontierConstants {
  double G = 0.0;
  double a = 0.0;
  double b = 0.0;
};

inline FrontierConstants closed_form_frontier(const ParametricParams& p) {
  if (!(p.alpha + p.beta > 0.0) || !(p.A > 0.0) || !(p.B > 0.0) || !(p.alpha > 0.0) ||
      !(p.beta > 0.0))
    throw NumericalError("closed_form_frontier: frontier undefined (requires positive A, B, alpha, beta)");
  FrontierConstants fc;
  fc.a = p.beta / (p.alpha + p.beta);
  fc.b = 1.0 - fc.a;  // a + b = 1 exactly
  fc.G = std::pow(p.alpha * p.A / (p.beta * p.B), 1.0 / (p.alpha + p.beta));
  return fc;
}

/// ScalingFit built directly from parametric constants via the closed form,
/// with no data behind it (diagnostics empty). Useful for projecting from
/// published fits.
inline ScalingFit parametric_fit(const ParametricParams& params) {
  params.validate();
  const FrontierConstants fc = closed_form_frontier(params);
  ScalingFit fit;
  fit.approach = Approach::parametric;
  fit.a = fc.a;
  fit.b = fc.b;
  fit.n_coeff = fc.G * std::pow(6.0, -fc.a);
  fit.d_coeff = (1.0 / fc.G) * std::pow(6.0, -fc.b);
  fit.params = params;
  return fit;
}

struct OptAllocation {
  double n_opt = 0.0;
  double d_opt = 0.0;
  std::optional<double> loss_hat;  // present when the fit carries parameters
  bool extrapolated = false;       // flops outside the fitted range
};

/// Optimal allocation at a compute budget, per the fitted frontier.
inline OptAllocation predict_opt(const ScalingFit& fit, double flops) {
  if (!(flops > 0.0)) throw ValidationError("predict_opt: flops must be positive");
  fit.validate();
  OptAllocation out;
  out.n_opt = fit.n_coeff * std::pow(flops, fit.a);
  out.d_opt = fit.d_coeff * std::pow(flops, fit.b);
  if (fit.params)
    out.loss_hat = fit.params->predict_loss(out.n_opt, out.d_opt);
  if (fit.diagnostics.flops_max > 0.0)
    out.extrapolated = flops < fit.diagnostics.flops_min || flops > fit.diagnostics.flops_max;
  return out;
}

/// One row of the inverted frontier: the budget at which a model of N
/// parameters is optimal. tokens keeps C = 6ND exactly;
/// tokens_independent is the frontier's own D_opt(C), which coincides only
/// when the N and D power laws are exact complements.
struct BudgetRow {
  double n_params = 0.0;
  double flops = 0.0;
  double flops_gopher_units = 0.0;
  double tokens = 0.0;
  double tokens_independent = 0.0;
  bool extrapolated = false;
};

inline std::vector<BudgetRow> budget_table(const ScalingFit& fit,
                                           const std::vector<double>& param_sizes) {
  fit.validate();
  if (!(fit.a > 0.0))
    throw NumericalError("budget_table: frontier inversion undefined for exponent a <= 0");
  std::vector<BudgetRow> rows;
  rows.reserve(param_sizes.size());
  for (const double n : param_sizes) {
    if (!(n > 0.0)) throw ValidationError("budget_table: model sizes must be positive");
    BudgetRow row;
    row.n_params = n;
    row.flops = std::pow(n / fit.n_coeff, 1.0 / fit.a);
    row.flops_gopher_units = row.flops / kGopherFlops;
    row.tokens = row.flops / (6.0 * n);
    row.tokens_independent = fit.d_coeff * std::pow(row.flops, fit.b);
    if (fit.diagnostics.flops_max > 0.0)
      row.extrapolated =
          row.flops < fit.diagnostics.flops_min || row.flops > fit.diagnostics.flops_max;
    rows.push_back(row);
  }
  return rows;
}

/// Splits envelope points by FLOPs rank into contiguous segments of equal
/// count (remainder to the later segments) and fits an N-vs-C power law per
/// segment. A drifting exponent sequence exposes curvature in the frontier.
inline std::vector<PowerLawFit> segmented_frontier_fit(const std::vector<FrontierPoint>& envelope,
                                                       int n_segments = 3) {
  if (n_segments < 1) throw ValidationError("segmented_frontier_fit: n_segments must be >= 1");
  const std::size_t k = static_cast<std::size_t>(n_segments);
  if (envelope.size() < 2 * k)
    throw ValidationError("segmented_frontier_fit: need at least " + std::to_string(2 * k) +
                          " envelope points for " + std::to_string(n_segments) + " segments");
  std::vector<FrontierPoint> sorted = envelope;
  std::sort(sorted.begin(), sorted.end(),
            [](const FrontierPoint& x, const FrontierPoint& y) { return x.flops < y.flops; });

  const std::size_t base = sorted.size() / k;
  const std::size_t rem = sorted.size() % k;
  std::vector<PowerLawFit> fits;
  fits.reserve(k);
  std::size_t pos = 0;
  for (std::size_t seg = 0; seg < k; ++seg) {
    const std::size_t len = base + (seg + rem >= k ? 1 : 0);
    std::vector<std::pair<double, double>> pts;
    pts.reserve(len);
    for (std::size_t i = pos; i < pos + len; ++i)
      pts.emplace_back(sorted[i].flops, static_cast<double>(sorted[i].n_params));
    pos += len;
    fits.push_back(fit_power_law(pts));
  }
  return fits;
}

}  // namespace scalex
