#ifndef ROBREG_SIM_STUDY_HPP
#define ROBREG_SIM_STUDY_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "robreg/model.hpp"

namespace robreg {

struct MixtureComponent {
  double weight = 1.0;
  double mean = 0.0;
  double sd = 1.0;
};

// Normal mixture generating the error term of one simulation scenario.
struct ScenarioSpec {
  std::string label;
  std::vector<MixtureComponent> components;

  void validate() const;  // weights sum to 1, sds positive
};

struct StudyConfig {
  std::vector<double> x;  // explanatory values, all nonzero
  double theta = 0.5;
  double beta_true = 1.0;
  double sigma_true = 1.5;
  std::size_t reps = 2000;
  std::uint64_t seed = 12345;
  std::vector<ModelConfig> models;
  std::vector<std::string> model_label;

  void validate() const;
};

// One MSE table cell, with its Monte Carlo standard error and failure
// accounting.
struct MseCell {
  double mse = 0.0;
  double mc_se = 0.0;
  std::size_t failures = 0;
  std::size_t reps_used = 0;
};

struct MseTable {
  std::vector<std::string> scenario_label;
  std::vector<std::string> model_label;
  // indexed [scenario][model]
  std::vector<std::vector<MseCell>> beta;
  std::vector<std::vector<MseCell>> sigma;
};

// Optimization failed in more than 1% of the replicates of some cell.
class study_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// x = 1..20, theta = 1/2, beta = 1, sigma = 1.5, 2000 reps, and the
// three calibrated error models.
StudyConfig default_study_config();

// The three benchmark scenarios: pure N(0,1); 90% N(0,1) + 10% N(0,100);
// 95% N(0,1) + 5% N(10,1).
std::vector<ScenarioSpec> default_scenarios();

// One draw from the scenario mixture for observation `item` of replicate
// `rep`.
double mixture_draw(const ScenarioSpec& scenario, std::uint64_t seed,
                    std::uint64_t rep, std::uint64_t item);

// y_i = beta_true x_i + sigma_true |x_i|^theta z_i with z from the
// scenario mixture.
Dataset simulate_dataset(const ScenarioSpec& scenario, const StudyConfig& cfg,
                         std::uint64_t rep_index);

// Simulates cfg.reps datasets per scenario, MAP-fits every model with a
// flat prior, and accumulates squared errors against the true values.
// Replicates run in parallel; per-replicate results are reduced in a
// fixed order, so the table is identical for any worker count.
MseTable run_mse_study(const StudyConfig& cfg,
                       const std::vector<ScenarioSpec>& scenarios,
                       int n_threads = 0);

}  // namespace robreg

#endif  // ROBREG_SIM_STUDY_HPP
