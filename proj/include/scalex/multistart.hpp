#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "scalex/fitting.hpp"
#include "scalex/lbfgs.hpp"
#include "scalex/parallel.hpp"
#include "scalex/types.hpp"

namespace scalex {

/// Cartesian grid of L-BFGS starting points in (a, b, e, alpha, beta).
struct InitGrid {
  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> e;
  std::vector<double> alpha;
  std::vector<double> beta;

  /// The full sweep: alpha, beta in {0, 0.5, ..., 2}, e in {-1, -0.5, ..., 1},
  /// a, b in {0, 5, ..., 25}; 4500 starts.
  static InitGrid full() {
    InitGrid g;
    for (int i = 0; i <= 5; ++i) g.a.push_back(5.0 * i);
    g.b = g.a;
    for (int i = 0; i <= 4; ++i) g.e.push_back(-1.0 + 0.5 * i);
    for (int i = 0; i <= 4; ++i) g.alpha.push_back(0.5 * i);
    g.beta = g.alpha;
    return g;
  }

  /// 3 evenly spaced values per axis over the same ranges; 243 starts.
  static InitGrid reduced() {
    InitGrid g;
    g.a = {0.0, 12.5, 25.0};
    g.b = {0.0, 12.5, 25.0};
    g.e = {-1.0, 0.0, 1.0};
    g.alpha = {0.0, 1.0, 2.0};
    g.beta = {0.0, 1.0, 2.0};
    return g;
  }

  std::size_t size() const {
    return a.size() * b.size() * e.size() * alpha.size() * beta.size();
  }

  /// Flattened lexicographically in (a, b, e, alpha, beta), beta fastest.
  std::array<double, 5> at(std::size_t idx) const {
    const std::size_t nb = beta.size(), nal = alpha.size(), ne = e.size(), nbb = b.size();
    const std::size_t i_beta = idx % nb;
    idx /= nb;
    const std::size_t i_alpha = idx % nal;
    idx /= nal;
    const std::size_t i_e = idx % ne;
    idx /= ne;
    const std::size_t i_b = idx % nbb;
    idx /= nbb;
    const std::size_t i_a = idx;
    return {a[i_a], b[i_b], e[i_e], alpha[i_alpha], beta[i_beta]};
  }

  /// True when any coordinate of start idx sits at an end of its axis.
  bool on_boundary(std::size_t idx) const {
    const std::size_t nb = beta.size(), nal = alpha.size(), ne = e.size(), nbb = b.size();
    const std::size_t i_beta = idx % nb;
    idx /= nb;
    const std::size_t i_alpha = idx % nal;
    idx /= nal;
    const std::size_t i_e = idx % ne;
    idx /= ne;
    const std::size_t i_b = idx % nbb;
    idx /= nbb;
    const std::size_t i_a = idx;
    auto at_edge = [](std::size_t i, std::size_t n) { return n > 1 && (i == 0 || i == n - 1); };
    return at_edge(i_a, a.size()) || at_edge(i_b, nbb) || at_edge(i_e, ne) ||
           at_edge(i_alpha, nal) || at_edge(i_beta, nb);
  }
};

struct MultistartOptions {
  InitGrid grid = InitGrid::full();
  double delta = 1e-3;
  double grad_tol = 1e-8;
  int max_iter = 1000;
  int threads = 0;  // 0: SCALEX_THREADS or hardware
};

struct MultistartFitResult {
  ParametricParams params;
  double objective = 0.0;
  std::array<double, 5> raw{};  // winning (a, b, e, alpha, beta)
  std::size_t winner_index = 0;
  bool winner_init_on_boundary = false;
  std::size_t n_converged = 0;
  std::size_t n_starts = 0;
};

/// Fits the parametric loss by running L-BFGS from every grid point and
/// keeping the lowest converged objective. Ties within 1e-12 resolve to the
/// lower grid index, so the result does not depend on thread count.
inline MultistartFitResult multistart_fit(const std::vector<LossPoint>& data,
                                          const MultistartOptions& opt = {}) {
  if (data.size() < 5)
    throw ValidationError("multistart_fit: at least 5 data points required");
  {
    std::set<double> ns, ds;
    for (const auto& p : data) {
      ns.insert(p.n_params);
      ds.insert(p.tokens);
    }
    if (ns.size() < 2 || ds.size() < 2)
      throw ValidationError("multistart_fit: data must span at least 2 distinct N and 2 distinct D");
  }
  const std::size_t n_starts = opt.grid.size();
  if (n_starts == 0) throw ValidationError("multistart_fit: empty init grid");

  const ParametricObjective objective(data, opt.delta);
  auto eval = [&objective](const std::vector<double>& x, std::vector<double>& grad) {
    std::array<double, 5> theta{x[0], x[1], x[2], x[3], x[4]};
    double g[5];
    const double v = objective(theta, g);
    grad.assign(g, g + 5);
    return v;
  };

  struct StartOutcome {
    double value = 0.0;
    std::array<double, 5> x{};
    bool converged = false;
    bool failed = false;
  };
  std::vector<StartOutcome> outcomes(n_starts);

  parallel_for(n_starts, opt.threads, [&](std::size_t idx) {
    const std::array<double, 5> start = opt.grid.at(idx);
    StartOutcome& out = outcomes[idx];
    try {
      LbfgsResult res = minimize_lbfgs(eval, std::vector<double>(start.begin(), start.end()),
                                       opt.grad_tol, opt.max_iter);
      out.value = res.value;
      for (int i = 0; i < 5; ++i) out.x[static_cast<std::size_t>(i)] = res.x[static_cast<std::size_t>(i)];
      out.converged = res.converged;
    } catch (const std::exception&) {
      out.failed = true;
    }
  });

  std::size_t n_converged = 0;
  bool have_winner = false;
  std::size_t winner = 0;
  for (std::size_t i = 0; i < n_starts; ++i) {
    if (outcomes[i].failed || !outcomes[i].converged) continue;
    ++n_converged;
    if (!have_winner || outcomes[i].value < outcomes[winner].value - 1e-12) {
      winner = i;
      have_winner = true;
    }
  }
  if (!have_winner) {
    std::size_t n_failed = 0;
    for (const auto& o : outcomes) n_failed += o.failed ? 1 : 0;
    throw NumericalError("multistart_fit: no start converged (" + std::to_string(n_starts) +
                         " starts, " + std::to_string(n_failed) + " raised errors, " +
                         std::to_string(n_starts - n_failed) +
                         " stopped on line-search failure or the iteration cap)");
  }

  const StartOutcome& w = outcomes[winner];
  if (!(w.x[3] > 0.0) || !(w.x[4] > 0.0))
    throw NumericalError("multistart_fit: best fit has non-positive exponents (alpha=" +
                         std::to_string(w.x[3]) + ", beta=" + std::to_string(w.x[4]) + ")");

  MultistartFitResult result;
  result.params.A = std::exp(w.x[0]);
  result.params.B = std::exp(w.x[1]);
  result.params.E = std::exp(w.x[2]);
  result.params.alpha = w.x[3];
  result.params.beta = w.x[4];
  result.params.validate();
  result.objective = w.value;
  result.raw = w.x;
  result.winner_index = winner;
  result.winner_init_on_boundary = opt.grid.on_boundary(winner);
  result.n_converged = n_converged;
  result.n_starts = n_starts;
  return result;
}

}  // namespace scalex
