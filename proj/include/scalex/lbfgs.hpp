#pragma once

#include <cmath>
#include <cstddef>
#include <deque>
#include <vector>

#include "scalex/types.hpp"

namespace scalex {

struct LbfgsOptions {
  int memory = 10;
  double grad_tol = 1e-8;   // infinity norm
  int max_iter = 1000;
  double armijo_c = 1e-4;
  double backtrack = 0.5;
  int max_line_search = 60;
};

struct LbfgsResult {
  std::vector<double> x;
  double value = 0.0;
  bool converged = false;
  int iterations = 0;
};

namespace detail {

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (const double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace detail

/// Limited-memory BFGS with backtracking Armijo line search. The callable
/// must have signature double(const std::vector<double>& x,
/// std::vector<double>& grad) and fill grad at x. Deterministic for fixed
/// inputs. A failed line search returns the best iterate seen with
/// converged = false rather than throwing.
template <typename F>
LbfgsResult minimize_lbfgs(F&& objective, std::vector<double> init, double tol = 1e-8,
                           int max_iter = 1000, const LbfgsOptions& base = {}) {
  LbfgsOptions opt = base;
  opt.grad_tol = tol;
  opt.max_iter = max_iter;

  const std::size_t n = init.size();
  std::vector<double> x = std::move(init);
  std::vector<double> g(n, 0.0);
  double fx = objective(x, g);
  if (!std::isfinite(fx))
    throw NumericalError("minimize_lbfgs: objective is not finite at the initial point");

  LbfgsResult best;
  best.x = x;
  best.value = fx;

  if (detail::inf_norm(g) < opt.grad_tol) {
    best.converged = true;
    return best;
  }

  // (s, y) pairs, most recent last.
  std::deque<std::pair<std::vector<double>, std::vector<double>>> history;
  std::vector<double> dir(n), x_new(n), g_new(n, 0.0), alpha_buf;

  for (int iter = 0; iter < opt.max_iter; ++iter) {
    // Two-loop recursion: dir = -H * g.
    dir = g;
    alpha_buf.assign(history.size(), 0.0);
    for (std::size_t k = history.size(); k-- > 0;) {
      const auto& [s, y] = history[k];
      const double rho = 1.0 / detail::dot(y, s);
      alpha_buf[k] = rho * detail::dot(s, dir);
      for (std::size_t i = 0; i < n; ++i) dir[i] -= alpha_buf[k] * y[i];
    }
    if (!history.empty()) {
      const auto& [s, y] = history.back();
      const double gamma = detail::dot(s, y) / detail::dot(y, y);
      for (auto& d : dir) d *= gamma;
    }
    for (std::size_t k = 0; k < history.size(); ++k) {
      const auto& [s, y] = history[k];
      const double rho = 1.0 / detail::dot(y, s);
      const double beta = rho * detail::dot(y, dir);
      for (std::size_t i = 0; i < n; ++i) dir[i] += (alpha_buf[k] - beta) * s[i];
    }
    for (auto& d : dir) d = -d;

    double slope = detail::dot(g, dir);
    if (!(slope < 0.0)) {
      // Not a descent direction (stale curvature); fall back to steepest descent.
      for (std::size_t i = 0; i < n; ++i) dir[i] = -g[i];
      slope = detail::dot(g, dir);
      history.clear();
    }

    double step = 1.0;
    if (iter == 0) {
      const double gnorm = std::sqrt(detail::dot(g, g));
      step = 1.0 / std::max(1.0, gnorm);
    }

    bool accepted = false;
    double f_new = fx;
    for (int ls = 0; ls < opt.max_line_search; ++ls) {
      for (std::size_t i = 0; i < n; ++i) x_new[i] = x[i] + step * dir[i];
      f_new = objective(x_new, g_new);
      if (std::isfinite(f_new) && f_new <= fx + opt.armijo_c * step * slope) {
        accepted = true;
        break;
      }
      step *= opt.backtrack;
    }
    if (!accepted) {
      best.iterations = iter;
      return best;  // converged stays false
    }

    std::vector<double> s(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = x_new[i] - x[i];
      y[i] = g_new[i] - g[i];
    }
    const double sy = detail::dot(s, y);
    const double ss = detail::dot(s, s);
    // Keep the Hessian approximation positive definite.
    if (sy > 1e-12 * std::sqrt(ss) * std::sqrt(detail::dot(y, y))) {
      history.emplace_back(std::move(s), std::move(y));
      if (history.size() > static_cast<std::size_t>(opt.memory)) history.pop_front();
    }

    x.swap(x_new);
    g.swap(g_new);
    fx = f_new;
    if (fx < best.value) {
      best.value = fx;
      best.x = x;
    }
    best.iterations = iter + 1;
    if (detail::inf_norm(g) < opt.grad_tol) {
      best.converged = true;
      best.value = fx;
      best.x = x;
      return best;
    }
  }
  return best;  // max_iter reached
}

}  // namespace scalex
