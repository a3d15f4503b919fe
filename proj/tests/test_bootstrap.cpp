#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "scalex/bootstrap.hpp"
#include "scalex/synth.hpp"
#include "test_support.hpp"

using namespace scalex;
using testsupport::reference_params;

namespace {

std::vector<double> log_spaced(double lo, double hi, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i)
    out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
  return out;
}

std::vector<LossPoint> noisy_suite(std::uint64_t seed) {
  GenIsoflopOptions opt;
  opt.log_noise_sigma = 0.01;
  return gen_isoflop_suite(reference_params(), log_spaced(6e18, 3e21, 9), 7, seed, opt);
}

}  // namespace

TEST_CASE("equal seeds give bit-identical summaries") {
  const std::vector<LossPoint> pts = noisy_suite(1);
  BootstrapOptions opt;
  opt.n_resamples = 40;
  opt.seed = 777;
  const BootstrapResult r1 = bootstrap_approach2(pts, {}, opt);
  const BootstrapResult r2 = bootstrap_approach2(pts, {}, opt);
  CHECK(r1.a.p10 == r2.a.p10);
  CHECK(r1.a.p90 == r2.a.p90);
  CHECK(r1.b.p10 == r2.b.p10);
  CHECK(r1.b.p90 == r2.b.p90);
  CHECK(r1.a.point == r2.a.point);
  CHECK(r1.n_failed == r2.n_failed);

  opt.seed = 778;
  const BootstrapResult r3 = bootstrap_approach2(pts, {}, opt);
  CHECK(r3.a.p10 != r1.a.p10);
}

TEST_CASE("thread count does not change the result") {
  const std::vector<LossPoint> pts = noisy_suite(2);
  BootstrapOptions opt;
  opt.n_resamples = 30;
  opt.seed = 5;
  opt.threads = 1;
  const BootstrapResult serial = bootstrap_approach2(pts, {}, opt);
  opt.threads = 4;
  const BootstrapResult parallel = bootstrap_approach2(pts, {}, opt);
  CHECK(serial.a.p10 == parallel.a.p10);
  CHECK(serial.a.p90 == parallel.a.p90);
  CHECK(serial.b.p10 == parallel.b.p10);
}

TEST_CASE("zero-variance resampling collapses the interval to the point") {
  const std::vector<LossPoint> pts = noisy_suite(3);
  BootstrapOptions opt;
  opt.n_resamples = 25;
  opt.fraction = 1.0;  // every resample is the full dataset
  opt.seed = 9;
  const BootstrapResult r = bootstrap_approach2(pts, {}, opt);
  CHECK(r.a.p10 == r.a.point);
  CHECK(r.a.p90 == r.a.point);
  CHECK(r.b.p10 == r.b.point);
  CHECK(r.b.p90 == r.b.point);
  CHECK(r.n_failed == 0);
}

TEST_CASE("percentiles are ordered and bracket the estimate on noisy data") {
  const std::vector<LossPoint> pts = noisy_suite(4);
  BootstrapOptions opt;
  opt.n_resamples = 100;
  opt.seed = 31;
  const BootstrapResult r = bootstrap_approach2(pts, {}, opt);
  CHECK(r.a.p10 <= r.a.p90);
  CHECK(r.b.p10 <= r.b.p90);
  CHECK(r.a.n_resamples == 100);
  CHECK(r.a.resample_fraction == 0.8);
  CHECK(r.a.seed == 31);
  // summaries correspond to the full-data fit
  const ScalingFit point = approach2(pts);
  CHECK(r.a.point == point.a);
  CHECK(r.b.point == point.b);
}

TEST_CASE("approach1 bootstrap resamples whole runs") {
  const ParametricParams truth{1.7, 380.0, 380.0, 0.31, 0.31};
  std::vector<RunRecord> runs;
  GenRunOptions gopt;
  gopt.span = 2.2;
  const FrontierConstants fc = closed_form_frontier(truth);
  for (int i = 0; i < 12; ++i) {
    const double n_real = 1e7 * std::pow(10.0, 0.25 * i);
    const std::uint64_t n = static_cast<std::uint64_t>(n_real);
    const double c_star = 6.0 * std::pow(n_real / fc.G, 1.0 / fc.a);
    for (const double h : {1.0, 1.8, 3.2}) {
      runs.push_back(gen_run(truth, n, static_cast<std::uint64_t>(h * c_star / (6.0 * n_real)),
                             40, 0.02, 0, gopt));
    }
  }
  BootstrapOptions opt;
  opt.n_resamples = 20;
  opt.seed = 11;
  const BootstrapResult r = bootstrap_approach1(runs, {}, opt);
  CHECK(r.a.p10 <= r.a.p90);
  CHECK(std::abs(r.a.point - 0.5) < 0.05);
}

TEST_CASE("a summary with too many failed resamples is an error") {
  // every budget has exactly 3 sizes: dropping any point breaks a budget
  std::vector<LossPoint> pts;
  for (const double c : {1e19, 1e20, 1e21}) {
    for (int i = -1; i <= 1; ++i) {
      const double n = golden_section_opt_params(reference_params(), c) * std::pow(10.0, 0.3 * i);
      pts.push_back({n, c / (6.0 * n), reference_params().predict_loss(n, c / (6.0 * n))});
    }
  }
  BootstrapOptions opt;
  opt.n_resamples = 30;
  opt.fraction = 0.8;
  opt.seed = 17;
  CHECK_THROWS_AS(bootstrap_approach2(pts, {}, opt), NumericalError);
}

TEST_CASE("percentiles are monotone in the percentile argument") {
  Rng rng(123);
  std::vector<double> values;
  for (int i = 0; i < 37; ++i) values.push_back(rng.next_normal());
  double prev = detail::percentile(values, 0.0);
  for (double p = 0.05; p <= 1.0; p += 0.05) {
    const double cur = detail::percentile(values, p);
    CHECK(cur >= prev);
    prev = cur;
  }
  // interpolation stays within the sample range
  CHECK(detail::percentile(values, 0.0) ==
        *std::min_element(values.begin(), values.end()));
  CHECK(detail::percentile(values, 1.0) ==
        *std::max_element(values.begin(), values.end()));
}

TEST_CASE("bootstrap input validation") {
  const std::vector<LossPoint> pts = noisy_suite(6);
  BootstrapOptions opt;
  opt.fraction = 0.0;
  CHECK_THROWS_AS(bootstrap_approach2(pts, {}, opt), ValidationError);
  opt.fraction = 1.2;
  CHECK_THROWS_AS(bootstrap_approach2(pts, {}, opt), ValidationError);
  opt.fraction = 0.8;
  opt.n_resamples = 0;
  CHECK_THROWS_AS(bootstrap_approach2(pts, {}, opt), ValidationError);
}
