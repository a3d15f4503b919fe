// End-to-end demo: generate an isoFLOP suite from a known ground truth,
// estimate the frontier with all three approaches, and print projections.

#include <cmath>
#include <cstdio>
#include <vector>

#include "scalex/scalex.hpp"

using namespace scalex;

int main() {
  const ParametricParams truth{1.69, 406.4, 410.7, 0.34, 0.28};

  // Final points across 9 budgets, 7 sizes each, with mild loss noise.
  std::vector<double> budgets;
  for (int i = 0; i < 9; ++i) budgets.push_back(6e18 * std::pow(500.0, i / 8.0));
  GenIsoflopOptions iso;
  iso.log_noise_sigma = 0.005;
  const std::vector<LossPoint> points = gen_isoflop_suite(truth, budgets, 7, 1234, iso);

  // Training-run suite: 10 sizes, 4 horizons each.
  const FrontierConstants fc = closed_form_frontier(truth);
  std::vector<RunRecord> runs;
  for (int i = 0; i < 10; ++i) {
    const double n = 1e7 * std::pow(10.0, i / 3.0);
    const double c_star = 6.0 * std::pow(n / fc.G, 1.0 / fc.a);
    for (const double h : {1.0, 1.5, 2.2, 3.2}) {
      GenRunOptions opt;
      opt.span = 2.2;
      runs.push_back(gen_run(truth, static_cast<std::uint64_t>(n),
                             static_cast<std::uint64_t>(h * c_star / (6.0 * n)), 50, 0.02,
                             static_cast<std::uint64_t>(i), opt));
    }
  }

  Approach3Options a3;
  a3.multistart.grid = InitGrid::reduced();
  const ScalingFit fits[3] = {approach1(runs), approach2(points), approach3(points, a3)};

  std::printf("ground truth a = %.4f\n\n", fc.a);
  std::printf("%-12s %8s %8s\n", "approach", "a", "b");
  for (const auto& fit : fits)
    std::printf("%-12s %8.4f %8.4f\n", to_string(fit.approach), fit.a, fit.b);

  std::printf("\nprojected optimal allocations (parametric fit):\n");
  std::printf("%12s %14s %14s\n", "C", "N_opt", "D_opt");
  for (const double c : {1e19, 1e21, 1e23, 5.76e23}) {
    const OptAllocation opt = predict_opt(fits[2], c);
    std::printf("%12.3g %14.4g %14.4g%s\n", c, opt.n_opt, opt.d_opt,
                opt.extrapolated ? "  [extrapolated]" : "");
  }
  return 0;
}
