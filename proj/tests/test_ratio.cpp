#include <doctest.h>

#include <cmath>
#include <random>

#include "robreg/datasets.hpp"
#include "robreg/posterior.hpp"
#include "robreg/ratio.hpp"
#include "robreg/robustness.hpp"

using namespace robreg;

namespace {

FitSummary robust_food_fit(bool drop_outliers) {
  ModelConfig cfg;
  cfg.theta = 0.5;
  cfg.error = calibrated_lptn();
  cfg.prior = PriorKind::InverseSigma;
  Dataset d = food_expenditure();
  if (drop_outliers) d = exclude(d, {16, 19});
  return fit_model(cfg, d);
}

}  // namespace

TEST_SUITE_BEGIN("ratio");

TEST_CASE("published ratio and population-mean estimates") {
  const FitSummary fit = robust_food_fit(false);
  const PointInterval r = ratio_summary(fit);
  CHECK(std::fabs(r.point - 0.319) < 0.01);
  CHECK(std::fabs(r.interval.lo - 0.240) < 0.02);
  CHECK(std::fabs(r.interval.hi - 0.376) < 0.02);

  const PopulationContext ctx{210.0, std::nullopt};
  const PointInterval mu = population_mean_estimate(fit, ctx);
  CHECK(std::fabs(mu.point - 66.99) < 0.5);
  CHECK(std::fabs(mu.interval.lo - 50.40) < 0.5);
  CHECK(std::fabs(mu.interval.hi - 78.96) < 0.5);
}

TEST_CASE("published estimates with the two outliers removed") {
  const FitSummary fit = robust_food_fit(true);
  const PointInterval r = ratio_summary(fit);
  CHECK(std::fabs(r.point - 0.343) < 0.01);

  const PopulationContext ctx{210.0, std::nullopt};
  const PointInterval mu = population_mean_estimate(fit, ctx);
  CHECK(std::fabs(mu.point - 72.03) < 0.5);
  CHECK(std::fabs(mu.interval.lo - 63.84) < 0.5);
  CHECK(std::fabs(mu.interval.hi - 80.22) < 0.5);
}

TEST_CASE("exact-ratio data recovers the ratio within grid resolution") {
  const double c = 2.5;
  Dataset d;
  for (int i = 1; i <= 6; ++i) {
    d.x.push_back(i);
    d.y.push_back(c * i);
  }
  ModelConfig cfg;
  cfg.theta = 0.5;
  cfg.error = calibrated_lptn();
  cfg.prior = PriorKind::Flat;
  const FitSummary fit = fit_model(cfg, d);
  const PointInterval r = ratio_summary(fit);
  const double cell =
      (fit.grid_spec_used.beta_hi - fit.grid_spec_used.beta_lo) /
      fit.grid_spec_used.n_beta;
  CHECK(std::fabs(r.point - c) <= cell);
}

TEST_CASE("map-based point estimate flag") {
  const FitSummary fit = robust_food_fit(false);
  CHECK(ratio_summary(fit, true).point == fit.map.beta);
  CHECK(ratio_summary(fit, false).point == fit.median_beta);
}

TEST_CASE("scaling by mu_x: zero, negative, and power-of-two linearity") {
  const FitSummary fit = robust_food_fit(false);

  const PointInterval zero =
      population_mean_estimate(fit, PopulationContext{0.0, std::nullopt});
  CHECK(zero.point == 0.0);
  CHECK(zero.interval.lo == 0.0);
  CHECK(zero.interval.hi == 0.0);

  const PointInterval neg =
      population_mean_estimate(fit, PopulationContext{-2.0, std::nullopt});
  CHECK(neg.interval.lo <= neg.interval.hi);

  const PointInterval base =
      population_mean_estimate(fit, PopulationContext{210.0, std::nullopt});
  for (double c : {2.0, 4.0, 0.5}) {
    const PointInterval scaled = population_mean_estimate(
        fit, PopulationContext{c * 210.0, std::nullopt});
    CHECK(scaled.point == c * base.point);
    CHECK(scaled.interval.lo == c * base.interval.lo);
    CHECK(scaled.interval.hi == c * base.interval.hi);
  }
}

TEST_CASE("the ratio is a weighted average of per-row proportions") {
  std::mt19937_64 rng(424242);
  std::uniform_real_distribution<double> ux(1.0, 300.0);
  std::uniform_real_distribution<double> uy(0.1, 120.0);
  for (int it = 0; it < 200; ++it) {
    const int n = 3 + static_cast<int>(rng() % 20);
    std::vector<double> x(n), y(n);
    double sx = 0.0, sy = 0.0;
    for (int i = 0; i < n; ++i) {
      x[i] = ux(rng);
      y[i] = uy(rng);
      sx += x[i];
      sy += y[i];
    }
    double weighted = 0.0;
    for (int i = 0; i < n; ++i) weighted += (x[i] / sx) * (y[i] / x[i]);
    CHECK(std::fabs(weighted - sy / sx) < 1e-12);
  }
}

TEST_SUITE_END();
