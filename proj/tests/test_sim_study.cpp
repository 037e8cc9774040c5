#include <doctest.h>

#include <cmath>

#include "robreg/errors.hpp"
#include "robreg/rng.hpp"
#include "robreg/sim_study.hpp"

using namespace robreg;

TEST_SUITE_BEGIN("sim_study");

TEST_CASE("scenario validation") {
  ScenarioSpec bad;
  bad.components = {{0.5, 0.0, 1.0}, {0.6, 0.0, 1.0}};
  CHECK_THROWS_AS(bad.validate(), parameter_error);
  bad.components = {{1.0, 0.0, 0.0}};
  CHECK_THROWS_AS(bad.validate(), parameter_error);
  bad.components.clear();
  CHECK_THROWS_AS(bad.validate(), parameter_error);

  for (const ScenarioSpec& s : default_scenarios()) CHECK_NOTHROW(s.validate());
}

TEST_CASE("noise-free simulation returns the exact regression line") {
  StudyConfig cfg = default_study_config();
  cfg.sigma_true = 0.0;
  // sigma_true = 0 is a degenerate config only meaningful here
  ScenarioSpec clean = default_scenarios()[0];
  const Dataset d = simulate_dataset(clean, cfg, 7);
  for (std::size_t i = 0; i < d.size(); ++i)
    CHECK(d.y[i] == doctest::Approx(d.x[i]).epsilon(1e-15));
}

TEST_CASE("mixture draws have the right mean, clean scenario") {
  const ScenarioSpec clean = default_scenarios()[0];
  const std::uint64_t seed = 2024;
  double sum = 0.0;
  const std::size_t reps = 100000, n = 20;
  for (std::size_t r = 0; r < reps; ++r)
    for (std::size_t i = 0; i < n; ++i) sum += mixture_draw(clean, seed, r, i);
  const double mean = sum / (reps * n);
  const double se = 1.0 / std::sqrt(static_cast<double>(reps * n));
  CHECK(std::fabs(mean) < 4.0 * se);
}

TEST_CASE("mixture draws have the right mean, shifted component") {
  ScenarioSpec s;
  s.label = "shifted";
  s.components = {{0.95, 0.0, 1.0}, {0.05, 10.0, 1.0}};
  const std::uint64_t seed = 99;
  double sum = 0.0, sumsq = 0.0;
  const std::size_t draws = 1000000;
  for (std::size_t i = 0; i < draws; ++i) {
    const double z = mixture_draw(s, seed, i, 0);
    sum += z;
    sumsq += z * z;
  }
  const double mean = sum / draws;
  const double var = sumsq / draws - mean * mean;
  const double se = std::sqrt(var / draws);
  CHECK(std::fabs(mean - 0.5) < 4.0 * se);
}

TEST_CASE("counter rng is a pure function of its coordinates") {
  CHECK(counter_hash(1, 2, 3, 4) == counter_hash(1, 2, 3, 4));
  CHECK(counter_hash(1, 2, 3, 4) != counter_hash(1, 2, 3, 5));
  CHECK(counter_hash(1, 2, 3, 4) != counter_hash(2, 2, 3, 4));
  const double u = uniform01(counter_hash(7, 8, 9, 0));
  CHECK(u > 0.0);
  CHECK(u <= 1.0);
}

TEST_CASE("identical seeds give bitwise-identical tables for any worker count") {
  StudyConfig cfg = default_study_config();
  cfg.reps = 60;
  const auto scenarios = default_scenarios();
  const MseTable t1 = run_mse_study(cfg, scenarios, 1);
  const MseTable t2 = run_mse_study(cfg, scenarios, 2);
  const MseTable t4 = run_mse_study(cfg, scenarios, 4);
  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    for (std::size_t m = 0; m < cfg.models.size(); ++m) {
      CHECK(t1.beta[s][m].mse == t2.beta[s][m].mse);
      CHECK(t1.beta[s][m].mse == t4.beta[s][m].mse);
      CHECK(t1.sigma[s][m].mse == t2.sigma[s][m].mse);
      CHECK(t1.sigma[s][m].mse == t4.sigma[s][m].mse);
      CHECK(t1.beta[s][m].mc_se == t4.beta[s][m].mc_se);
    }
  }
}

TEST_CASE("desk-scale runs: seed stability and clean-scenario equivalence") {
  StudyConfig cfg = default_study_config();
  cfg.reps = 2000;
  const auto scenarios = default_scenarios();
  cfg.seed = 1001;
  const MseTable a = run_mse_study(cfg, scenarios, 0);
  cfg.seed = 2002;
  const MseTable b = run_mse_study(cfg, scenarios, 0);
  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    for (std::size_t m = 0; m < cfg.models.size(); ++m) {
      const double gap = std::fabs(a.beta[s][m].mse - b.beta[s][m].mse);
      const double se = std::hypot(a.beta[s][m].mc_se, b.beta[s][m].mc_se);
      CHECK(gap < 4.0 * se);
      const double gap_s = std::fabs(a.sigma[s][m].mse - b.sigma[s][m].mse);
      const double se_s =
          std::hypot(a.sigma[s][m].mc_se, b.sigma[s][m].mc_se);
      CHECK(gap_s < 4.0 * se_s);
    }
  }

  // without contamination the three models are interchangeable
  for (std::size_t m = 1; m < cfg.models.size(); ++m) {
    CHECK(std::fabs(a.beta[0][m].mse - a.beta[0][0].mse) <
          0.10 * a.beta[0][0].mse);
  }
}

TEST_CASE("small study produces finite cells and no failures") {
  StudyConfig cfg = default_study_config();
  cfg.reps = 40;
  const MseTable t = run_mse_study(cfg, default_scenarios(), 0);
  CHECK(t.scenario_label.size() == 3);
  CHECK(t.model_label.size() == 3);
  for (std::size_t s = 0; s < 3; ++s) {
    for (std::size_t m = 0; m < 3; ++m) {
      CHECK(std::isfinite(t.beta[s][m].mse));
      CHECK(t.beta[s][m].mse > 0.0);
      CHECK(std::isfinite(t.sigma[s][m].mse));
      CHECK(t.beta[s][m].failures == 0);
      CHECK(t.beta[s][m].reps_used == 40);
    }
  }
}

TEST_SUITE_END();
