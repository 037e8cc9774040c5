#include "robreg/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <set>

#include "robreg/errors.hpp"
#include "robreg/parallel.hpp"

namespace robreg {

Dataset exclude(const Dataset& data, const std::vector<std::size_t>& indices) {
  data.validate();
  std::set<std::size_t> drop(indices.begin(), indices.end());
  for (std::size_t i : drop)
    if (i >= data.size())
      throw parameter_error("exclude: index out of range");
  if (drop.size() >= data.size())
    throw parameter_error("exclude: cannot remove every row");
  Dataset out;
  out.x.reserve(data.size() - drop.size());
  out.y.reserve(data.size() - drop.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (drop.count(i)) continue;
    out.x.push_back(data.x[i]);
    out.y.push_back(data.y[i]);
  }
  return out;
}

namespace {

void require_strictly_increasing(const std::vector<double>& v,
                                 const char* what) {
  for (std::size_t i = 0; i + 1 < v.size(); ++i)
    if (!(v[i] < v[i + 1]))
      throw parameter_error(std::string(what) +
                            " must be strictly increasing");
}

}  // namespace

SweepResult threshold_sweep(const std::vector<ModelConfig>& configs,
                            const Dataset& data, std::size_t index,
                            const std::vector<double>& values, int n_threads,
                            bool chain_serial) {
  data.validate();
  if (configs.empty()) throw parameter_error("threshold_sweep: no models given");
  if (index >= data.size())
    throw parameter_error("threshold_sweep: index out of range");
  if (values.empty()) throw parameter_error("threshold_sweep: no sweep values");
  for (double v : values)
    if (!std::isfinite(v))
      throw parameter_error("threshold_sweep: sweep values must be finite");
  require_strictly_increasing(values, "threshold_sweep: sweep values");

  SweepResult out;
  out.model_label.reserve(configs.size());
  for (const ModelConfig& c : configs) out.model_label.push_back(c.error.label());
  out.rows.assign(values.size(), SweepRow{});

  const auto fit_point = [&](double v, const ModelConfig& config,
                             std::optional<ParamPoint> warm) {
    Dataset d = data;
    d.y[index] = v;
    return map_estimate(config, d, warm);
  };

  if (chain_serial) {
    std::vector<std::optional<ParamPoint>> warm(configs.size());
    for (std::size_t k = 0; k < values.size(); ++k) {
      out.rows[k].y_value = values[k];
      out.rows[k].estimate.resize(configs.size());
      for (std::size_t c = 0; c < configs.size(); ++c) {
        const ParamPoint p = fit_point(values[k], configs[c], warm[c]);
        out.rows[k].estimate[c] = p;
        warm[c] = p;
      }
    }
  } else {
    parallel_for(values.size(), n_threads, [&](std::size_t k) {
      out.rows[k].y_value = values[k];
      out.rows[k].estimate.resize(configs.size());
      for (std::size_t c = 0; c < configs.size(); ++c)
        out.rows[k].estimate[c] = fit_point(values[k], configs[c], std::nullopt);
    });
  }
  return out;
}

ConvergenceTrace convergence_trace(const ModelConfig& config,
                                   const Dataset& data,
                                   const std::vector<std::size_t>& outlier_indices,
                                   const std::vector<int>& directions,
                                   const std::vector<double>& omegas,
                                   int n_threads) {
  data.validate();
  if (outlier_indices.size() != directions.size())
    throw parameter_error("convergence_trace: one direction per outlier index");
  for (int d : directions)
    if (d != 1 && d != -1)
      throw parameter_error("convergence_trace: directions must be +1 or -1");
  if (omegas.empty()) throw parameter_error("convergence_trace: no omegas");
  for (double w : omegas)
    if (!(w > 0.0) || !std::isfinite(w))
      throw parameter_error("convergence_trace: omegas must be positive");
  require_strictly_increasing(omegas, "convergence_trace: omegas");
  std::set<std::size_t> unique_idx(outlier_indices.begin(),
                                   outlier_indices.end());
  if (unique_idx.size() != outlier_indices.size())
    throw parameter_error("convergence_trace: duplicate outlier index");

  // negative vs positive slope outliers: dir/x sign decides the pull
  std::size_t m = 0, p = 0;
  for (std::size_t k = 0; k < outlier_indices.size(); ++k) {
    if (outlier_indices[k] >= data.size())
      throw parameter_error("convergence_trace: outlier index out of range");
    const bool pulls_up = (directions[k] > 0) == (data.x[outlier_indices[k]] > 0.0);
    (pulls_up ? p : m) += 1;
  }
  const std::size_t nonoutliers = data.size() - outlier_indices.size();
  if (nonoutliers <= std::max(m, p))
    std::cerr << "warning: convergence_trace: nonoutliers (" << nonoutliers
              << ") do not outnumber each outlier type (m=" << m << ", p=" << p
              << "); the limit results need not hold\n";

  const Dataset reduced = exclude(data, outlier_indices);
  const ParamPoint reduced_map = map_estimate(config, reduced);
  const PosteriorGrid reduced_grid =
      build_posterior_grid(config, reduced, std::nullopt, n_threads, reduced_map);
  const DensityEvaluator err_density(config.error);

  ConvergenceTrace trace;
  trace.rows.resize(omegas.size());
  for (std::size_t k = 0; k < omegas.size(); ++k) {
    const double omega = omegas[k];
    Dataset shifted = data;
    double outlier_log_f = 0.0;
    for (std::size_t j = 0; j < outlier_indices.size(); ++j) {
      const double yv = directions[j] * omega;
      shifted.y[outlier_indices[j]] = yv;
      outlier_log_f += err_density.log_density(yv);
    }
    const ParamPoint full_map = map_estimate(config, shifted, reduced_map);
    const PosteriorGrid full_grid =
        build_posterior_grid(config, shifted, std::nullopt, n_threads, full_map);
    TraceRow& row = trace.rows[k];
    row.omega = omega;
    row.l1 = l1_distance(full_grid, reduced_grid, n_threads);
    row.log_marginal_ratio = full_grid.log_norm_const - outlier_log_f -
                             reduced_grid.log_norm_const;
  }
  return trace;
}

}  // namespace robreg
