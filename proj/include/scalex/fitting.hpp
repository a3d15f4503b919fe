#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "scalex/types.hpp"

namespace scalex {

/// Huber loss: quadratic within |r| <= delta, linear outside; continuous and
/// once-differentiable at the transition.
inline double huber(double residual, double delta) {
  if (!(delta > 0.0)) throw ValidationError("huber: delta must be positive");
  const double r = std::abs(residual);
  if (r <= delta) return 0.5 * residual * residual;
  return delta * (r - 0.5 * delta);
}

/// d/dr of huber; the linear-branch value delta*sign(r) is used at the kink.
inline double huber_derivative(double residual, double delta) {
  if (!(delta > 0.0)) throw ValidationError("huber: delta must be positive");
  if (std::abs(residual) < delta) return residual;
  return residual > 0.0 ? delta : (residual < 0.0 ? -delta : 0.0);
}

/// log(sum(exp(v))) with max-subtraction for overflow safety.
inline double lse(std::span<const double> values) {
  if (values.empty()) throw ValidationError("lse: empty input");
  double m = values[0];
  for (const double v : values) m = std::max(m, v);
  if (!std::isfinite(m)) return m;  // +-inf propagates
  double sum = 0.0;
  for (const double v : values) sum += std::exp(v - m);
  return m + std::log(sum);
}

inline double lse(std::initializer_list<double> values) {
  return lse(std::span<const double>(values.begin(), values.size()));
}

/// y = 10^log10_coeff * x^exponent, fitted by OLS in log10-log10 space.
struct PowerLawFit {
  double exponent = 0.0;
  double log10_coeff = 0.0;
  double r_squared = 0.0;
  std::size_t n_points = 0;

  double coeff() const { return std::pow(10.0, log10_coeff); }
  double predict(double x) const { return coeff() * std::pow(x, exponent); }
};

inline PowerLawFit fit_power_law(std::span<const std::pair<double, double>> points) {
  if (points.size() < 2)
    throw ValidationError("fit_power_law: at least 2 points required");
  std::vector<double> lx(points.size()), ly(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto [x, y] = points[i];
    if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y))
      throw ValidationError("fit_power_law: x and y must be positive and finite (point " +
                            std::to_string(i) + ")");
    lx[i] = std::log10(x);
    ly[i] = std::log10(y);
  }
  const double n = static_cast<double>(points.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0)
    throw ValidationError("fit_power_law: degenerate design (all x identical)");
  PowerLawFit fit;
  fit.exponent = sxy / sxx;
  fit.log10_coeff = my - fit.exponent * mx;
  fit.n_points = points.size();
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double resid = ly[i] - (fit.log10_coeff + fit.exponent * lx[i]);
    ss_res += resid * resid;
    ss_tot += (ly[i] - my) * (ly[i] - my);
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

inline PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& points) {
  return fit_power_law(std::span<const std::pair<double, double>>(points));
}

/// y = c2 x^2 + c1 x + c0 with an interior minimum.
struct ParabolaFit {
  double c2 = 0.0;
  double c1 = 0.0;
  double c0 = 0.0;
  double vertex_x = 0.0;
  double vertex_y = 0.0;

  double predict(double x) const { return (c2 * x + c1) * x + c0; }
};

/// Least-squares quadratic. Fails when the fit is not convex or its minimum
/// falls outside the sampled x range.
inline ParabolaFit fit_parabola(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3)
    throw ValidationError("fit_parabola: at least 3 points required");
  double x_min = points[0].first, x_max = points[0].first;
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : points) {
    if (!std::isfinite(x) || !std::isfinite(y))
      throw ValidationError("fit_parabola: non-finite input");
    x_min = std::min(x_min, x);
    x_max = std::max(x_max, x);
    mx += x;
    my += y;
  }
  const double n = static_cast<double>(points.size());
  mx /= n;
  my /= n;
  {
    std::vector<double> xs;
    xs.reserve(points.size());
    for (const auto& p : points) xs.push_back(p.first);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    if (xs.size() < 3)
      throw ValidationError("fit_parabola: at least 3 distinct x required");
  }

  // Normal equations on centered/scaled x for conditioning.
  const double scale = std::max(x_max - x_min, 1e-300);
  double s1 = 0, s2 = 0, s3 = 0, s4 = 0, t0 = 0, t1 = 0, t2 = 0;
  double y_dev = 0.0;
  for (const auto& [x, y] : points) {
    const double u = (x - mx) / scale;
    const double v = y - my;
    y_dev = std::max(y_dev, std::abs(v));
    s1 += u;
    s2 += u * u;
    s3 += u * u * u;
    s4 += u * u * u * u;
    t0 += v;
    t1 += u * v;
    t2 += u * u * v;
  }
  // Solve [n s1 s2; s1 s2 s3; s2 s3 s4] (b0 b1 b2)^T = (t0 t1 t2)^T.
  const double m00 = n, m01 = s1, m02 = s2;
  const double m11 = s2, m12 = s3, m22 = s4;
  const double det = m00 * (m11 * m22 - m12 * m12) - m01 * (m01 * m22 - m12 * m02) +
                     m02 * (m01 * m12 - m11 * m02);
  if (!(std::abs(det) > 1e-30))
    throw ValidationError("fit_parabola: degenerate design");
  const double b0 = (t0 * (m11 * m22 - m12 * m12) - m01 * (t1 * m22 - m12 * t2) +
                     m02 * (t1 * m12 - m11 * t2)) /
                    det;
  const double b1 = (m00 * (t1 * m22 - m12 * t2) - t0 * (m01 * m22 - m02 * m12) +
                     m02 * (m01 * t2 - m02 * t1)) /
                    det;
  const double b2 = (m00 * (m11 * t2 - t1 * m12) - m01 * (m01 * t2 - t1 * m02) +
                     t0 * (m01 * m12 - m11 * m02)) /
                    det;

  ParabolaFit fit;
  // Undo u = (x - mx)/scale, v = y - my.
  fit.c2 = b2 / (scale * scale);
  fit.c1 = b1 / scale - 2.0 * fit.c2 * mx;
  fit.c0 = my + b0 - b1 * mx / scale + fit.c2 * mx * mx;

  // Convexity: a curvature indistinguishable from zero at the data's own
  // scale means no interior minimum.
  const double curvature_scale = std::abs(fit.c2) * scale * scale;
  if (fit.c2 <= 0.0 || curvature_scale <= 1e-10 * std::max(y_dev, 1e-300))
    throw ValidationError("fit_parabola: no interior minimum (fit is not convex)");
  fit.vertex_x = -fit.c1 / (2.0 * fit.c2);
  fit.vertex_y = fit.predict(fit.vertex_x);
  if (fit.vertex_x < x_min || fit.vertex_x > x_max)
    throw ValidationError("fit_parabola: minimum at boundary - widen model-size sweep");
  return fit;
}

inline ParabolaFit fit_parabola(const std::vector<std::pair<double, double>>& points) {
  return fit_parabola(std::span<const std::pair<double, double>>(points));
}

/// Robust objective for the parametric loss in log space. With
/// theta = (a, b, e, alpha, beta) and natural logs throughout:
///   f(theta) = sum_i Huber_delta( LSE(a - alpha ln N_i, b - beta ln D_i, e) - ln L_i ).
/// The LSE equals ln(A/N^alpha + B/D^beta + E) for A = e^a, B = e^b, E = e^e.
class ParametricObjective {
 public:
  ParametricObjective(const std::vector<LossPoint>& data, double delta)
      : delta_(delta) {
    if (data.empty()) throw ValidationError("parametric objective: empty data");
    if (!(delta > 0.0)) throw ValidationError("parametric objective: delta must be positive");
    ln_n_.reserve(data.size());
    ln_d_.reserve(data.size());
    ln_l_.reserve(data.size());
    for (const auto& p : data) {
      p.validate();
      ln_n_.push_back(std::log(p.n_params));
      ln_d_.push_back(std::log(p.tokens));
      ln_l_.push_back(std::log(p.loss));
    }
  }

  std::size_t size() const { return ln_n_.size(); }
  double delta() const { return delta_; }

  /// Value and analytic gradient; grad may be null when only the value is
  /// needed.
  double operator()(std::span<const double, 5> theta, double* grad) const {
    const double a = theta[0], b = theta[1], e = theta[2];
    const double alpha = theta[3], beta = theta[4];
    if (grad) std::fill(grad, grad + 5, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < ln_n_.size(); ++i) {
      const double z0 = a - alpha * ln_n_[i];
      const double z1 = b - beta * ln_d_[i];
      const double z2 = e;
      const double m = std::max(z0, std::max(z1, z2));
      const double e0 = std::exp(z0 - m), e1 = std::exp(z1 - m), e2 = std::exp(z2 - m);
      const double sum = e0 + e1 + e2;
      const double s = m + std::log(sum);
      const double r = s - ln_l_[i];
      if (!std::isfinite(r))
        throw NumericalError("parametric objective: non-finite residual at datum " +
                             std::to_string(i));
      total += huber(r, delta_);
      if (grad) {
        const double dh = huber_derivative(r, delta_);
        const double p0 = e0 / sum, p1 = e1 / sum, p2 = e2 / sum;
        grad[0] += dh * p0;
        grad[1] += dh * p1;
        grad[2] += dh * p2;
        grad[3] += dh * (-ln_n_[i] * p0);
        grad[4] += dh * (-ln_d_[i] * p1);
      }
    }
    return total;
  }

 private:
  double delta_;
  std::vector<double> ln_n_;
  std::vector<double> ln_d_;
  std::vector<double> ln_l_;
};

/// Free-function form of the objective.
inline double parametric_objective(std::span<const double, 5> log_params,
                                   const std::vector<LossPoint>& data, double delta,
                                   std::array<double, 5>* gradient = nullptr) {
  const ParametricObjective obj(data, delta);
  return obj(log_params, gradient ? gradient->data() : nullptr);
}

}  // namespace scalex
