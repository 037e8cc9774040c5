// robreg — robust regression through the origin, with ratio estimation,
// threshold sweeps, convergence traces, and a Monte Carlo MSE study.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "robreg/datasets.hpp"
#include "robreg/errors.hpp"
#include "robreg/io.hpp"
#include "robreg/posterior.hpp"
#include "robreg/ratio.hpp"
#include "robreg/robustness.hpp"
#include "robreg/sim_study.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

robreg::ErrorDensitySpec spec_for_token(const std::string& token) {
  if (token == "normal") return robreg::calibrated_normal();
  if (token == "student") return robreg::calibrated_student();
  if (token == "lptn") return robreg::calibrated_lptn();
  throw robreg::parameter_error("unknown model '" + token +
                                "' (expected normal, student or lptn)");
}

robreg::PriorKind prior_for_token(const std::string& token) {
  if (token == "flat") return robreg::PriorKind::Flat;
  if (token == "inv-sigma") return robreg::PriorKind::InverseSigma;
  throw robreg::parameter_error("unknown prior '" + token +
                                "' (expected flat or inv-sigma)");
}

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

robreg::Dataset load_dataset(const std::string& token, double y11) {
  if (token == "table1") return robreg::pdi_households(y11);
  if (token == "table2") return robreg::food_expenditure();
  std::ifstream in(token);
  if (!in)
    throw robreg::csv_error("cannot open data file '" + token + "'");
  return robreg::parse_dataset_csv(in);
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path);
  if (!out)
    throw robreg::csv_error("cannot open output file '" + path + "'");
  out << content;
}

struct FitArgs {
  std::string data;
  std::string model = "lptn";
  std::string prior = "inv-sigma";
  double theta = 0.5;
  double level = 0.95;
  double y11 = 85.0;
  std::optional<double> mu_x;
  std::string ratio_point = "median";
  std::string exclude;
  int cells = 512;
  int threads = 0;
  std::string output;
};

int run_fit(const FitArgs& a) {
  robreg::Dataset data = load_dataset(a.data, a.y11);
  if (!a.exclude.empty()) {
    std::vector<std::size_t> drop;
    for (const std::string& tok : split_list(a.exclude)) {
      const long row = std::stol(tok);
      if (row < 1 || static_cast<std::size_t>(row) > data.size())
        throw robreg::parameter_error("fit: --exclude row out of range");
      drop.push_back(static_cast<std::size_t>(row - 1));
    }
    data = robreg::exclude(data, drop);
  }
  robreg::ModelConfig config;
  config.theta = a.theta;
  config.error = spec_for_token(a.model);
  config.prior = prior_for_token(a.prior);

  std::optional<robreg::GridSpec> spec;
  if (a.cells != 512)
    spec = robreg::auto_grid_spec(config, data, std::nullopt, a.cells, a.cells);
  const robreg::FitSummary fit =
      robreg::fit_model(config, data, a.level, spec, a.threads);

  std::string json;
  if (a.mu_x) {
    if (a.theta != 0.5)
      std::cerr << "warning: ratio summaries assume theta = 0.5\n";
    for (double xi : data.x)
      if (xi <= 0.0) {
        std::cerr << "warning: ratio summaries assume positive x\n";
        break;
      }
    const bool map_point = a.ratio_point == "map";
    const robreg::PointInterval ratio = robreg::ratio_summary(fit, map_point);
    const robreg::PopulationContext ctx{*a.mu_x, std::nullopt};
    const robreg::PointInterval mean =
        robreg::population_mean_estimate(fit, ctx, map_point);
    json = robreg::fit_summary_json(fit, &ratio, &mean);
  } else {
    json = robreg::fit_summary_json(fit);
  }
  write_output(a.output, json);
  return 0;
}

struct SweepArgs {
  std::string data = "table1";
  double y11 = 85.0;
  int index = 11;  // 1-based row number
  double from = 85.0;
  double to = 385.0;
  int steps = 301;
  std::string models = "normal,student,lptn";
  double theta = 0.5;
  std::string prior = "flat";
  bool serial = false;
  int threads = 0;
  std::string output;
};

int run_sweep(const SweepArgs& a) {
  const robreg::Dataset data = load_dataset(a.data, a.y11);
  if (a.index < 1 || static_cast<std::size_t>(a.index) > data.size())
    throw robreg::parameter_error("sweep: --index out of range (1-based row)");
  if (a.steps < 1) throw robreg::parameter_error("sweep: --steps must be >= 1");
  if (a.steps > 1 && !(a.from < a.to))
    throw robreg::parameter_error("sweep: need --from < --to");

  std::vector<robreg::ModelConfig> configs;
  for (const std::string& token : split_list(a.models)) {
    robreg::ModelConfig c;
    c.theta = a.theta;
    c.error = spec_for_token(token);
    c.prior = prior_for_token(a.prior);
    configs.push_back(c);
  }

  std::vector<double> values(a.steps);
  for (int k = 0; k < a.steps; ++k)
    values[k] = a.steps == 1
                    ? a.from
                    : a.from + (a.to - a.from) * k / (a.steps - 1);

  const robreg::SweepResult sweep = robreg::threshold_sweep(
      configs, data, static_cast<std::size_t>(a.index - 1), values, a.threads,
      a.serial);
  if (a.steps > 2) {
    // the step size bounds how precisely the peak is located
    const double step = (a.to - a.from) / (a.steps - 1);
    for (std::size_t c = 0; c < configs.size(); ++c) {
      std::size_t kmax = 0;
      for (std::size_t k = 1; k < sweep.rows.size(); ++k)
        if (sweep.rows[k].estimate[c].beta > sweep.rows[kmax].estimate[c].beta)
          kmax = k;
      if (kmax > 0 && kmax + 1 < sweep.rows.size())
        std::cerr << "note: " << sweep.model_label[c]
                  << " beta-hat peaks at y_value = " << sweep.rows[kmax].y_value
                  << " (+/- " << step << ")\n";
    }
  }
  write_output(a.output, robreg::sweep_csv(sweep));
  return 0;
}

struct ConvergeArgs {
  std::string data = "table1";
  double y11 = 85.0;
  std::vector<std::string> outliers = {"11:+"};
  std::string omegas = "1e2,1e3,1e4,1e5,1e6";
  std::string model = "lptn";
  double theta = 0.5;
  std::string prior = "flat";
  int threads = 0;
  std::string output;
};

int run_converge(const ConvergeArgs& a) {
  const robreg::Dataset data = load_dataset(a.data, a.y11);
  robreg::ModelConfig config;
  config.theta = a.theta;
  config.error = spec_for_token(a.model);
  config.prior = prior_for_token(a.prior);

  std::vector<std::size_t> indices;
  std::vector<int> directions;
  for (const std::string& spec : a.outliers) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos || colon + 2 != spec.size() ||
        (spec[colon + 1] != '+' && spec[colon + 1] != '-'))
      throw robreg::parameter_error(
          "converge: outliers must look like ROW:+ or ROW:- (1-based row)");
    const long row = std::stol(spec.substr(0, colon));
    if (row < 1 || static_cast<std::size_t>(row) > data.size())
      throw robreg::parameter_error("converge: outlier row out of range");
    indices.push_back(static_cast<std::size_t>(row - 1));
    directions.push_back(spec[colon + 1] == '+' ? 1 : -1);
  }

  std::vector<double> omegas;
  for (const std::string& tok : split_list(a.omegas)) omegas.push_back(std::stod(tok));

  const robreg::ConvergenceTrace trace = robreg::convergence_trace(
      config, data, indices, directions, omegas, a.threads);
  write_output(a.output, robreg::trace_csv(trace));
  return 0;
}

struct SimulateArgs {
  std::size_t reps = 2000;
  std::uint64_t seed = 12345;
  std::string scenarios = "paper3";
  std::string models = "normal,student,lptn";
  double theta = 0.5;
  bool full_scale = false;
  int threads = 0;
  std::string output;
};

int run_simulate(const SimulateArgs& a) {
  robreg::StudyConfig cfg = robreg::default_study_config();
  cfg.reps = a.full_scale ? 50000 : a.reps;
  cfg.seed = a.seed;
  cfg.theta = a.theta;
  cfg.models.clear();
  cfg.model_label.clear();
  for (const std::string& token : split_list(a.models)) {
    robreg::ModelConfig c;
    c.theta = a.theta;
    c.error = spec_for_token(token);
    c.prior = robreg::PriorKind::Flat;
    cfg.models.push_back(c);
    cfg.model_label.push_back(token);
  }

  std::vector<robreg::ScenarioSpec> scenarios;
  const std::vector<robreg::ScenarioSpec> all = robreg::default_scenarios();
  for (const std::string& token : split_list(a.scenarios)) {
    if (token == "paper3" || token == "all") {
      scenarios = all;
      break;
    }
    bool found = false;
    for (const robreg::ScenarioSpec& s : all) {
      if (token == "clean" && s.label == "clean") found = true;
      else if (token == "scale" && s.label == "scale_contaminated") found = true;
      else if (token == "location" && s.label == "location_contaminated") found = true;
      if (found) {
        scenarios.push_back(s);
        break;
      }
    }
    if (!found)
      throw robreg::parameter_error(
          "simulate: unknown scenario '" + token +
          "' (expected paper3, clean, scale or location)");
  }

  const robreg::MseTable table = robreg::run_mse_study(cfg, scenarios, a.threads);
  write_output(a.output, robreg::mse_csv(table));
  return 0;
}

struct DataArgs {
  std::string name;
  double y11 = 85.0;
  std::string output;
};

int run_data(const DataArgs& a) {
  if (a.name != "table1" && a.name != "table2")
    throw robreg::parameter_error("data: unknown dataset '" + a.name +
                                  "' (expected table1 or table2)");
  const robreg::Dataset d = load_dataset(a.name, a.y11);
  write_output(a.output, robreg::dataset_csv(d));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "robreg: robust Bayesian regression through the origin with "
      "heteroscedastic errors and finite-population ratio estimation"};
  app.require_subcommand(1);

  FitArgs fit;
  CLI::App* cmd_fit = app.add_subcommand(
      "fit", "Fit a model and emit the posterior summary as JSON");
  cmd_fit->add_option("--data", fit.data, "table1, table2 or a CSV path")
      ->required();
  cmd_fit->add_option("--model", fit.model, "normal, student or lptn");
  cmd_fit->add_option("--prior", fit.prior, "flat or inv-sigma");
  cmd_fit->add_option("--theta", fit.theta, "heteroscedasticity exponent");
  cmd_fit->add_option("--level", fit.level, "HPD mass level");
  cmd_fit->add_option("--y11", fit.y11, "value for table1's free row 11");
  cmd_fit->add_option("--mu-x", fit.mu_x,
                      "population mean of x; adds ratio and population-mean "
                      "blocks to the output");
  cmd_fit->add_option("--ratio-point", fit.ratio_point,
                      "point estimate for the ratio block: median or map");
  cmd_fit->add_option("--exclude", fit.exclude,
                      "comma list of 1-based rows to drop before fitting");
  cmd_fit->add_option("--cells", fit.cells, "grid cells per axis");
  cmd_fit->add_option("--threads", fit.threads, "worker threads (0 = auto)");
  cmd_fit->add_option("--output", fit.output, "output path (default stdout)");

  SweepArgs sweep;
  CLI::App* cmd_sweep = app.add_subcommand(
      "sweep", "MAP estimates while one response value moves across a range");
  cmd_sweep->add_option("--data", sweep.data, "table1, table2 or a CSV path");
  cmd_sweep->add_option("--y11", sweep.y11, "value for table1's free row 11");
  cmd_sweep->add_option("--index", sweep.index, "1-based row to move");
  cmd_sweep->add_option("--from", sweep.from, "first swept value");
  cmd_sweep->add_option("--to", sweep.to, "last swept value");
  cmd_sweep->add_option("--steps", sweep.steps, "number of sweep points");
  cmd_sweep->add_option("--models", sweep.models, "comma list of models");
  cmd_sweep->add_option("--theta", sweep.theta, "heteroscedasticity exponent");
  cmd_sweep->add_option("--prior", sweep.prior, "flat or inv-sigma");
  cmd_sweep->add_flag("--serial", sweep.serial,
                      "run points in order, warm-starting from the previous "
                      "optimum");
  cmd_sweep->add_option("--threads", sweep.threads, "worker threads (0 = auto)");
  cmd_sweep->add_option("--output", sweep.output, "output path");

  ConvergeArgs conv;
  CLI::App* cmd_conv = app.add_subcommand(
      "converge",
      "L1 and marginal-ratio trace as outliers are driven to +/- omega");
  cmd_conv->add_option("--data", conv.data, "table1, table2 or a CSV path");
  cmd_conv->add_option("--y11", conv.y11, "value for table1's free row 11");
  cmd_conv->add_option("--outliers", conv.outliers,
                       "outlier rows as ROW:+ or ROW:- (1-based)");
  cmd_conv->add_option("--omegas", conv.omegas, "comma list of omega values");
  cmd_conv->add_option("--model", conv.model, "normal, student or lptn");
  cmd_conv->add_option("--theta", conv.theta, "heteroscedasticity exponent");
  cmd_conv->add_option("--prior", conv.prior, "flat or inv-sigma");
  cmd_conv->add_option("--threads", conv.threads, "worker threads (0 = auto)");
  cmd_conv->add_option("--output", conv.output, "output path");

  SimulateArgs sim;
  CLI::App* cmd_sim = app.add_subcommand(
      "simulate", "Monte Carlo MSE study across contamination scenarios");
  cmd_sim->add_option("--reps", sim.reps, "replicates per scenario");
  cmd_sim->add_option("--seed", sim.seed, "RNG seed");
  cmd_sim->add_option("--scenarios", sim.scenarios,
                      "paper3 or comma list of clean, scale, location");
  cmd_sim->add_option("--models", sim.models, "comma list of models");
  cmd_sim->add_option("--theta", sim.theta, "heteroscedasticity exponent");
  cmd_sim->add_flag("--full-scale", sim.full_scale,
                    "run the full 50,000-replicate study");
  cmd_sim->add_option("--threads", sim.threads, "worker threads (0 = auto)");
  cmd_sim->add_option("--output", sim.output, "output path");

  DataArgs dat;
  CLI::App* cmd_data =
      app.add_subcommand("data", "Emit an embedded dataset as CSV");
  cmd_data->add_option("--name", dat.name, "table1 or table2")->required();
  cmd_data->add_option("--y11", dat.y11, "value for table1's free row 11");
  cmd_data->add_option("--output", dat.output, "output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (cmd_fit->parsed()) return run_fit(fit);
    if (cmd_sweep->parsed()) return run_sweep(sweep);
    if (cmd_conv->parsed()) return run_converge(conv);
    if (cmd_sim->parsed()) return run_simulate(sim);
    if (cmd_data->parsed()) return run_data(dat);
  } catch (const robreg::parameter_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const robreg::dataset_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const robreg::csv_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return 0;
}
