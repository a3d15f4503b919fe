#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>

#include "scalex/fitting.hpp"
#include "scalex/rng.hpp"
#include "scalex/synth.hpp"
#include "test_support.hpp"

using namespace scalex;

TEST_CASE("huber values") {
  CHECK(huber(0.0, 1e-3) == 0.0);
  CHECK(huber(1e-3, 1e-3) == Catch::Approx(5e-7).epsilon(1e-14));   // both branches agree
  CHECK(huber(2e-3, 1e-3) == Catch::Approx(1.5e-6).epsilon(1e-14)); // linear branch
  CHECK_THROWS_AS(huber(1.0, 0.0), ValidationError);
}

TEST_CASE("huber is even, monotone in |r| and once-differentiable") {
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    const double r = (rng.next_uniform() - 0.5) * 0.02;
    const double delta = 1e-3;
    CHECK(huber(r, delta) == huber(-r, delta));
    CHECK(huber(r * 1.5, delta) >= huber(r, delta) * (std::abs(r) > 0 ? 1.0 : 0.0));
    // derivative consistent with a central difference
    const double h = 1e-9;
    const double fd = (huber(r + h, delta) - huber(r - h, delta)) / (2.0 * h);
    CHECK(std::abs(fd - huber_derivative(r, delta)) < 1e-6);
  }
  // continuity of the derivative at the kink
  CHECK(huber_derivative(1e-3 - 1e-15, 1e-3) == Catch::Approx(1e-3).epsilon(1e-9));
  CHECK(huber_derivative(1e-3 + 1e-15, 1e-3) == Catch::Approx(1e-3).epsilon(1e-9));
}

TEST_CASE("lse basics") {
  CHECK(lse({4.2}) == 4.2);
  CHECK(lse({0.0, 0.0, 0.0}) == Catch::Approx(std::log(3.0)).epsilon(1e-14));
  CHECK(lse({1000.0, 1000.0}) == Catch::Approx(1000.0 + std::log(2.0)).epsilon(1e-14));
  CHECK(std::isfinite(lse({-1e308, -1e308})));
  CHECK_THROWS_AS(lse(std::span<const double>{}), ValidationError);
}

TEST_CASE("power-law fit recovers an exact law") {
  std::vector<std::pair<double, double>> pts;
  for (const double x : {1e18, 1e20, 1e22}) pts.emplace_back(x, 0.1 * std::sqrt(x));
  const PowerLawFit fit = fit_power_law(pts);
  CHECK(fit.exponent == Catch::Approx(0.5).epsilon(1e-12));
  CHECK(fit.log10_coeff == Catch::Approx(-1.0).epsilon(1e-12));
  CHECK(fit.r_squared == Catch::Approx(1.0).epsilon(1e-12));
  CHECK(fit.n_points == 3);
}

TEST_CASE("two points give an exact interpolating power law") {
  const PowerLawFit fit = fit_power_law({{1.0, 2.0}, {10.0, 8.0}});
  CHECK(fit.r_squared == Catch::Approx(1.0).epsilon(1e-12));
  CHECK(fit.predict(1.0) == Catch::Approx(2.0).epsilon(1e-12));
  CHECK(fit.predict(10.0) == Catch::Approx(8.0).epsilon(1e-12));
}

TEST_CASE("power-law fit input validation") {
  CHECK_THROWS_AS(fit_power_law({{1.0, 2.0}}), ValidationError);
  CHECK_THROWS_AS(fit_power_law({{1.0, 2.0}, {1.0, 3.0}}), ValidationError);  // degenerate
  CHECK_THROWS_AS(fit_power_law({{1.0, 2.0}, {-1.0, 3.0}}), ValidationError);
  CHECK_THROWS_AS(fit_power_law({{1.0, 0.0}, {2.0, 3.0}}), ValidationError);
}

TEST_CASE("scaling y rescales the coefficient and leaves the exponent alone") {
  Rng rng(11);
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i < 20; ++i) {
    const double x = std::pow(10.0, 2.0 + 0.3 * i);
    pts.emplace_back(x, 3.0 * std::pow(x, 0.7) * std::exp(0.05 * rng.next_normal()));
  }
  const PowerLawFit base = fit_power_law(pts);
  const double k = 42.5;
  for (auto& [x, y] : pts) y *= k;
  const PowerLawFit scaled = fit_power_law(pts);
  CHECK(scaled.exponent == Catch::Approx(base.exponent).epsilon(1e-12));
  CHECK(scaled.log10_coeff == Catch::Approx(base.log10_coeff + std::log10(k)).epsilon(1e-12));
}

TEST_CASE("parabola fit finds a symmetric vertex") {
  const ParabolaFit fit = fit_parabola({{1.0, 2.0}, {2.0, 1.0}, {3.0, 2.0}});
  CHECK(fit.vertex_x == Catch::Approx(2.0).epsilon(1e-12));
  CHECK(fit.vertex_y == Catch::Approx(1.0).epsilon(1e-12));
  CHECK(fit.c2 > 0.0);
  CHECK(fit.vertex_x == Catch::Approx(-fit.c1 / (2.0 * fit.c2)).epsilon(1e-12));
}

TEST_CASE("parabola vertex tracks the analytic optimum of an isoFLOP slice") {
  // noiseless losses along one compute budget; the numeric argmin is the
  // oracle for where the parabola's vertex should fall
  const ParametricParams truth = testsupport::reference_params();
  for (const double c : {6e18, 1e20, 3e21}) {
    const double n_star = golden_section_opt_params(truth, c);
    std::vector<std::pair<double, double>> slice;
    for (int i = -3; i <= 3; ++i) {
      const double n = n_star * std::pow(10.0, i / 3.0);
      slice.emplace_back(std::log10(n), truth.predict_loss(n, c / (6.0 * n)));
    }
    const ParabolaFit fit = fit_parabola(slice);
    CHECK(std::abs(fit.vertex_x - std::log10(n_star)) <= 0.05);
  }
}

TEST_CASE("parabola fit rejects non-convex and boundary-minimum data") {
  CHECK_THROWS_WITH(fit_parabola({{1.0, 1.0}, {2.0, 2.0}, {3.0, 3.0}}),
                    Catch::Matchers::ContainsSubstring("no interior minimum"));
  // exactly (x-6)^2: convex with its minimum beyond the sampled range
  CHECK_THROWS_WITH(fit_parabola({{1.0, 25.0}, {2.0, 16.0}, {3.0, 9.0}, {4.0, 4.0}}),
                    Catch::Matchers::ContainsSubstring("minimum at boundary"));
  CHECK_THROWS_AS(fit_parabola({{1.0, 1.0}, {2.0, 2.0}}), ValidationError);
  CHECK_THROWS_AS(fit_parabola({{1.0, 1.0}, {1.0, 2.0}, {2.0, 3.0}}), ValidationError);
}

TEST_CASE("parametric objective is zero with zero gradient on exact data") {
  const std::array<double, 5> theta{std::log(400.0), std::log(410.0), std::log(1.7), 0.34, 0.28};
  const double n = 1e9, d = 2e10;
  const double lhat = std::exp(lse({theta[0] - theta[3] * std::log(n),
                                    theta[1] - theta[4] * std::log(d), theta[2]}));
  const std::vector<LossPoint> data{{n, d, lhat}};
  std::array<double, 5> grad{};
  const double value = parametric_objective(theta, data, 1e-3, &grad);
  CHECK(value == Catch::Approx(0.0).margin(1e-28));
  for (const double g : grad) CHECK(std::abs(g) < 1e-14);
}

TEST_CASE("duplicating the dataset doubles the objective") {
  const std::array<double, 5> theta{5.0, 5.5, 0.5, 0.3, 0.25};
  std::vector<LossPoint> data{{1e8, 1e10, 2.9}, {1e9, 2e10, 2.5}, {5e9, 8e10, 2.2}};
  const double once = parametric_objective(theta, data, 1e-3);
  std::vector<LossPoint> doubled = data;
  doubled.insert(doubled.end(), data.begin(), data.end());
  const double twice = parametric_objective(theta, doubled, 1e-3);
  CHECK(twice == Catch::Approx(2.0 * once).epsilon(1e-14));
}

TEST_CASE("analytic gradient matches central finite differences") {
  Rng rng(1234);
  std::vector<LossPoint> data;
  for (int i = 0; i < 24; ++i) {
    const double n = std::pow(10.0, 6.0 + 5.0 * rng.next_uniform());
    const double d = std::pow(10.0, 8.0 + 5.0 * rng.next_uniform());
    const double l = testsupport::reference_params().predict_loss(n, d) *
                     std::exp(0.05 * rng.next_normal());
    data.push_back({n, d, l});
  }
  const ParametricObjective obj(data, 1e-3);
  const double h = 1e-6;
  for (int trial = 0; trial < 100; ++trial) {
    std::array<double, 5> theta{10.0 * rng.next_uniform(), 10.0 * rng.next_uniform(),
                                2.0 * rng.next_uniform() - 1.0, 0.1 + 0.9 * rng.next_uniform(),
                                0.1 + 0.9 * rng.next_uniform()};
    std::array<double, 5> grad{};
    obj(theta, grad.data());
    for (std::size_t k = 0; k < 5; ++k) {
      std::array<double, 5> lo = theta, hi = theta;
      lo[k] -= h;
      hi[k] += h;
      const double fd = (obj(hi, nullptr) - obj(lo, nullptr)) / (2.0 * h);
      CHECK(std::abs(fd - grad[k]) <= 1e-5 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST_CASE("non-finite intermediates are reported with the offending datum") {
  const std::vector<LossPoint> data{{1e9, 1e10, 2.5}};
  // a - alpha*ln(N) overflows to +inf
  const std::array<double, 5> theta{1e308, 0.0, 0.0, -1e307, 0.3};
  CHECK_THROWS_WITH(parametric_objective(theta, data, 1e-3),
                    Catch::Matchers::ContainsSubstring("datum 0"));
}

TEST_CASE("objective validates inputs") {
  CHECK_THROWS_AS(ParametricObjective({}, 1e-3), ValidationError);
  CHECK_THROWS_AS(ParametricObjective({{1e9, 1e10, 2.5}}, 0.0), ValidationError);
  CHECK_THROWS_AS(ParametricObjective({{-1e9, 1e10, 2.5}}, 1e-3), ValidationError);
}
