#ifndef ROBREG_POSTERIOR_HPP
#define ROBREG_POSTERIOR_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "robreg/model.hpp"

namespace robreg {

// Bounds and resolution of the (beta, sigma) discretization. The sigma
// axis is log-spaced when the grid is built.
struct GridSpec {
  double beta_lo = 0.0;
  double beta_hi = 0.0;
  double sigma_lo = 0.0;
  double sigma_hi = 0.0;
  int n_beta = 512;
  int n_sigma = 512;

  void validate() const;  // throws parameter_error
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// One-dimensional discretized density: ascending cell centers with the
// probability mass and width of each cell.
struct DiscreteDensity {
  std::vector<double> value;
  std::vector<double> prob;
  std::vector<double> width;
};

// Normalized posterior over the (beta, sigma) lattice. Retains the model
// and data so a grid can be re-evaluated on a common bounding box.
// log_norm_const is the log-sum-exp quadrature estimate of the
// normalizing constant, i.e. the log marginal likelihood.
struct PosteriorGrid {
  GridSpec spec;
  ModelConfig config;
  Dataset data;
  std::vector<double> beta_center;   // n_beta entries
  std::vector<double> sigma_center;  // n_sigma entries, log-spaced
  std::vector<double> sigma_edge;    // n_sigma + 1 entries
  std::vector<double> log_unnorm;    // row-major [i_beta * n_sigma + j]
  std::vector<double> cell_prob;     // same layout, sums to 1
  double log_norm_const = 0.0;

  double beta_width() const noexcept {
    return (spec.beta_hi - spec.beta_lo) / spec.n_beta;
  }
};

enum class Axis { Beta, Sigma };

struct FitSummary {
  ParamPoint map;
  double median_beta = 0.0;
  double median_sigma = 0.0;
  Interval hpd_beta;
  Interval hpd_sigma;
  double level = 0.95;
  double log_marginal = 0.0;
  GridSpec grid_spec_used;
};

// The optimizer failed on every start; carries the best point seen.
class optimization_error : public std::runtime_error {
public:
  optimization_error(const std::string& what, ParamPoint best, double value)
      : std::runtime_error(what), best_(best), value_(value) {}
  ParamPoint best() const noexcept { return best_; }
  double value() const noexcept { return value_; }

private:
  ParamPoint best_;
  double value_;
};

// A marginal failed the unimodality gate; carries the HPD region set.
class multimodal_error : public std::runtime_error {
public:
  multimodal_error(const std::string& what, std::vector<Interval> regions)
      : std::runtime_error(what), regions_(std::move(regions)) {}
  const std::vector<Interval>& regions() const noexcept { return regions_; }

private:
  std::vector<Interval> regions_;
};

// Auto-bracketing could not push the boundary density 30 nats below the
// MAP within 40 doublings: the posterior looks non-integrable.
class non_integrable_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Joint maximizer of the unnormalized log posterior, found by
// Nelder-Mead in (beta, ln sigma) from multiple deterministic starts:
// the caller's init when given, the classical estimator, the unweighted
// mean of y_i/x_i, and the median of y_i/x_i, each paired with a
// median-residual sigma. Ties within 1e-9 in objective break to the
// lexicographically smallest (beta, ln sigma).
ParamPoint map_estimate(const ModelConfig& config, const Dataset& data,
                        std::optional<ParamPoint> init = std::nullopt);

// The auto-bracketed grid bounds: centered at the MAP, each side doubled
// until the edge log-density drops 30 nats below the MAP value.
GridSpec auto_grid_spec(const ModelConfig& config, const Dataset& data,
                        std::optional<ParamPoint> map_hint = std::nullopt,
                        int n_beta = 512, int n_sigma = 512);

// Evaluates the posterior on the (given or auto-bracketed) grid and
// normalizes by log-sum-exp over cell masses. Cell values are
// independent of the worker count; the reduction order is fixed.
PosteriorGrid build_posterior_grid(const ModelConfig& config,
                                   const Dataset& data,
                                   std::optional<GridSpec> spec = std::nullopt,
                                   int n_threads = 0,
                                   std::optional<ParamPoint> map_hint = std::nullopt);

DiscreteDensity marginal(const PosteriorGrid& grid, Axis which);

// Linear interpolation of the discrete CDF at level p in (0,1).
double quantile(const DiscreteDensity& marg, double p);

// CDF of the discretized density at v (same polyline quantile inverts).
double cdf(const DiscreteDensity& marg, double v);

// Shortest interval of mass >= level, located by bisecting a density
// threshold and interpolating the crossing points. Requires a unimodal
// marginal (after light smoothing); otherwise throws multimodal_error
// with the full region set.
Interval hpd_interval(const DiscreteDensity& marg, double level);

// Integral of |pi_a - pi_b| over the union bounding box, re-evaluating
// both unnormalized posteriors there at the finer of the two
// resolutions. Lies in [0, 2].
double l1_distance(const PosteriorGrid& a, const PosteriorGrid& b,
                   int n_threads = 0);

// The quadrature estimate of log m(y).
double log_marginal_likelihood(const PosteriorGrid& grid);

// MAP + grid + marginal summaries in one call.
FitSummary fit_model(const ModelConfig& config, const Dataset& data,
                     double level = 0.95,
                     std::optional<GridSpec> spec = std::nullopt,
                     int n_threads = 0);

}  // namespace robreg

#endif  // ROBREG_POSTERIOR_HPP
