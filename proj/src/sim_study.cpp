#include "robreg/sim_study.hpp"

#include <cmath>
#include <sstream>

#include "robreg/errors.hpp"
#include "robreg/parallel.hpp"
#include "robreg/posterior.hpp"
#include "robreg/rng.hpp"

namespace robreg {

void ScenarioSpec::validate() const {
  if (components.empty())
    throw parameter_error("ScenarioSpec: at least one component required");
  double total = 0.0;
  for (const MixtureComponent& c : components) {
    if (!(c.weight > 0.0) || c.weight > 1.0)
      throw parameter_error("ScenarioSpec: weights must lie in (0, 1]");
    if (!(c.sd > 0.0))
      throw parameter_error("ScenarioSpec: component sds must be positive");
    total += c.weight;
  }
  if (std::fabs(total - 1.0) > 1e-12)
    throw parameter_error("ScenarioSpec: weights must sum to 1");
}

void StudyConfig::validate() const {
  if (x.empty()) throw parameter_error("StudyConfig: x must be nonempty");
  for (double xi : x)
    if (xi == 0.0 || !std::isfinite(xi))
      throw parameter_error("StudyConfig: x must be nonzero and finite");
  if (reps < 1) throw parameter_error("StudyConfig: reps must be at least 1");
  if (models.empty()) throw parameter_error("StudyConfig: no models given");
  if (!model_label.empty() && model_label.size() != models.size())
    throw parameter_error("StudyConfig: one label per model");
}

StudyConfig default_study_config() {
  StudyConfig cfg;
  cfg.x.resize(20);
  for (int i = 0; i < 20; ++i) cfg.x[i] = i + 1;
  for (const ErrorDensitySpec& e :
       {calibrated_normal(), calibrated_student(), calibrated_lptn()}) {
    ModelConfig m;
    m.theta = cfg.theta;
    m.error = e;
    m.prior = PriorKind::Flat;
    cfg.models.push_back(m);
    cfg.model_label.push_back(e.label());
  }
  return cfg;
}

std::vector<ScenarioSpec> default_scenarios() {
  std::vector<ScenarioSpec> s(3);
  s[0].label = "clean";
  s[0].components = {{1.0, 0.0, 1.0}};
  s[1].label = "scale_contaminated";
  s[1].components = {{0.9, 0.0, 1.0}, {0.1, 0.0, 10.0}};
  s[2].label = "location_contaminated";
  s[2].components = {{0.95, 0.0, 1.0}, {0.05, 10.0, 1.0}};
  return s;
}

double mixture_draw(const ScenarioSpec& scenario, std::uint64_t seed,
                    std::uint64_t rep, std::uint64_t item) {
  const double u = uniform01(counter_hash(seed, rep, item, 0));
  double cum = 0.0;
  const MixtureComponent* picked = &scenario.components.back();
  for (const MixtureComponent& c : scenario.components) {
    cum += c.weight;
    if (u <= cum) {
      picked = &c;
      break;
    }
  }
  return picked->mean + picked->sd * normal_draw(seed, rep, item, 1);
}

Dataset simulate_dataset(const ScenarioSpec& scenario, const StudyConfig& cfg,
                         std::uint64_t rep_index) {
  scenario.validate();
  cfg.validate();
  Dataset d;
  d.x = cfg.x;
  d.y.resize(cfg.x.size());
  for (std::size_t i = 0; i < cfg.x.size(); ++i) {
    const double z = mixture_draw(scenario, cfg.seed, rep_index, i);
    d.y[i] = cfg.beta_true * cfg.x[i] +
             cfg.sigma_true * std::pow(std::fabs(cfg.x[i]), cfg.theta) * z;
  }
  return d;
}

MseTable run_mse_study(const StudyConfig& cfg,
                       const std::vector<ScenarioSpec>& scenarios,
                       int n_threads) {
  cfg.validate();
  if (scenarios.empty()) throw parameter_error("run_mse_study: no scenarios");
  for (const ScenarioSpec& s : scenarios) s.validate();

  const std::size_t n_scen = scenarios.size();
  const std::size_t n_model = cfg.models.size();
  const std::size_t reps = cfg.reps;

  // per-replicate slots; reduced serially afterwards so totals cannot
  // depend on the worker count
  std::vector<double> err_beta(n_scen * n_model * reps, 0.0);
  std::vector<double> err_sigma(n_scen * n_model * reps, 0.0);
  std::vector<unsigned char> failed(n_scen * n_model * reps, 0);
  const auto slot = [&](std::size_t s, std::size_t m, std::size_t r) {
    return (s * n_model + m) * reps + r;
  };

  std::vector<ModelConfig> models = cfg.models;
  for (ModelConfig& m : models) m.prior = PriorKind::Flat;

  parallel_for(n_scen * reps, n_threads, [&](std::size_t job) {
    const std::size_t s = job / reps;
    const std::size_t r = job % reps;
    const Dataset d = simulate_dataset(scenarios[s], cfg, r);
    for (std::size_t m = 0; m < n_model; ++m) {
      const std::size_t k = slot(s, m, r);
      try {
        const ParamPoint p = map_estimate(models[m], d);
        const double db = p.beta - cfg.beta_true;
        const double ds = p.sigma - cfg.sigma_true;
        err_beta[k] = db * db;
        err_sigma[k] = ds * ds;
      } catch (const optimization_error&) {
        failed[k] = 1;
      }
    }
  });

  MseTable table;
  table.scenario_label.reserve(n_scen);
  for (const ScenarioSpec& s : scenarios) table.scenario_label.push_back(s.label);
  if (cfg.model_label.empty()) {
    for (const ModelConfig& m : cfg.models)
      table.model_label.push_back(m.error.label());
  } else {
    table.model_label = cfg.model_label;
  }
  table.beta.assign(n_scen, std::vector<MseCell>(n_model));
  table.sigma.assign(n_scen, std::vector<MseCell>(n_model));

  for (std::size_t s = 0; s < n_scen; ++s) {
    for (std::size_t m = 0; m < n_model; ++m) {
      std::size_t used = 0, fails = 0;
      double sum_b = 0.0, sum_s = 0.0;
      for (std::size_t r = 0; r < reps; ++r) {
        const std::size_t k = slot(s, m, r);
        if (failed[k]) {
          ++fails;
          continue;
        }
        sum_b += err_beta[k];
        sum_s += err_sigma[k];
        ++used;
      }
      if (fails * 100 > reps) {
        std::ostringstream msg;
        msg << "run_mse_study: " << fails << "/" << reps
            << " replicates failed for scenario '" << scenarios[s].label
            << "', model '" << table.model_label[m] << "'";
        throw study_error(msg.str());
      }
      const double mean_b = sum_b / used;
      const double mean_s = sum_s / used;
      double var_b = 0.0, var_s = 0.0;
      for (std::size_t r = 0; r < reps; ++r) {
        const std::size_t k = slot(s, m, r);
        if (failed[k]) continue;
        var_b += (err_beta[k] - mean_b) * (err_beta[k] - mean_b);
        var_s += (err_sigma[k] - mean_s) * (err_sigma[k] - mean_s);
      }
      const double denom = used > 1 ? static_cast<double>(used - 1) : 1.0;
      table.beta[s][m] = {mean_b, std::sqrt(var_b / denom / used), fails, used};
      table.sigma[s][m] = {mean_s, std::sqrt(var_s / denom / used), fails, used};
    }
  }
  return table;
}

}  // namespace robreg
