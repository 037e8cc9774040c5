#ifndef ROBREG_MODEL_HPP
#define ROBREG_MODEL_HPP

#include <cstddef>
#include <vector>

#include "robreg/densities.hpp"

namespace robreg {

// Paired observations for regression through the origin. Explanatory
// values must be nonzero; both vectors finite and of equal length.
struct Dataset {
  std::vector<double> x;
  std::vector<double> y;

  std::size_t size() const noexcept { return x.size(); }
  void validate() const;  // throws dataset_error
};

enum class PriorKind {
  Flat,          // pi(beta, sigma) proportional to 1
  InverseSigma,  // pi(beta, sigma) proportional to 1/sigma
};

// Y_i = beta x_i + eps_i with error scale sigma |x_i|^theta. theta is a
// known constant; both prior choices keep min(sigma,1) pi(beta,sigma)
// bounded.
struct ModelConfig {
  double theta = 0.0;
  ErrorDensitySpec error{};
  PriorKind prior = PriorKind::Flat;
};

struct ParamPoint {
  double beta = 0.0;
  double sigma = 1.0;
};

// Per-dataset precomputation (|x_i|^theta and the log-scale constant)
// for repeated likelihood evaluation on grids and inside optimizers.
// Immutable after construction; safe to share across threads.
class LikelihoodEvaluator {
public:
  LikelihoodEvaluator(const ModelConfig& config, const Dataset& data);

  double log_likelihood(double beta, double sigma) const noexcept;
  double log_posterior_unnorm(double beta, double sigma) const noexcept;

  std::size_t n() const noexcept { return x_.size(); }
  const ModelConfig& config() const noexcept { return config_; }

private:
  ModelConfig config_;
  DensityEvaluator density_;
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> x_scale_;  // |x_i|^theta
  double const_term_ = 0.0;      // -theta * sum log|x_i|
};

// Sum over i of [ -ln sigma - theta ln|x_i|
//                 + ln f((y_i - beta x_i) / (sigma |x_i|^theta)) ].
double log_likelihood(const ModelConfig& config, const Dataset& data,
                      const ParamPoint& p);

// log_likelihood plus the log prior term (0 for Flat, -ln sigma for
// InverseSigma). Excludes the marginal normalizer.
double log_posterior_unnorm(const ModelConfig& config, const Dataset& data,
                            const ParamPoint& p);

// w_i proportional to |x_i|^(2(1-theta)), normalized to sum to one.
std::vector<double> classical_weights(double theta,
                                      const std::vector<double>& x);

// Weighted average of the y_i / x_i with classical_weights. For
// theta = 1/2 and positive x this is the ratio estimator sum(y)/sum(x).
double classical_beta_hat(double theta, const Dataset& data);

// Lower guard for the sigma axis: 1e-8 times the data scale
// (median |y_i / x_i|, or 1 when degenerate).
double sigma_floor(const Dataset& data);

}  // namespace robreg

#endif  // ROBREG_MODEL_HPP
