#ifndef ROBREG_ROBUSTNESS_HPP
#define ROBREG_ROBUSTNESS_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "robreg/posterior.hpp"

namespace robreg {

// MAP estimates per model along a sweep of one response value.
struct SweepRow {
  double y_value = 0.0;
  std::vector<ParamPoint> estimate;  // one per config, in input order
};

struct SweepResult {
  std::vector<std::string> model_label;
  std::vector<SweepRow> rows;  // y_value strictly increasing
};

// Convergence diagnostics against the reduced-data posterior:
//   l1                  — L1 distance between the two posteriors;
//   log_marginal_ratio  — log m(full) - sum of outlier log f(y_i)
//                         - log m(reduced).
struct TraceRow {
  double omega = 0.0;
  double l1 = 0.0;
  double log_marginal_ratio = 0.0;
};

struct ConvergenceTrace {
  std::vector<TraceRow> rows;  // omega strictly increasing
};

// Removes the given rows (0-based), preserving the order of survivors.
Dataset exclude(const Dataset& data, const std::vector<std::size_t>& indices);

// Replaces y[index] by each value in turn and records the MAP under
// every config. Sweep points run in parallel with the standard
// multi-starts; chain_serial runs them in order, adding the previous
// optimum as a warm start.
SweepResult threshold_sweep(const std::vector<ModelConfig>& configs,
                            const Dataset& data, std::size_t index,
                            const std::vector<double>& values,
                            int n_threads = 0, bool chain_serial = false);

// Drives the outlier rows to direction * omega and traces the posterior
// against the posterior with those rows excluded. directions hold +1/-1
// per outlier index. Warns (stderr) when the nonoutliers do not
// outnumber each outlier type.
ConvergenceTrace convergence_trace(const ModelConfig& config,
                                   const Dataset& data,
                                   const std::vector<std::size_t>& outlier_indices,
                                   const std::vector<int>& directions,
                                   const std::vector<double>& omegas,
                                   int n_threads = 0);

}  // namespace robreg

#endif  // ROBREG_ROBUSTNESS_HPP
