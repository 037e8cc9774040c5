#include "robreg/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "robreg/errors.hpp"

namespace robreg {

void Dataset::validate() const {
  if (x.size() != y.size())
    throw dataset_error("Dataset: x and y must have equal length");
  if (x.empty()) throw dataset_error("Dataset: at least one observation required");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
      std::ostringstream msg;
      msg << "Dataset: non-finite entry at row " << i;
      throw dataset_error(msg.str());
    }
    if (x[i] == 0.0) {
      std::ostringstream msg;
      msg << "Dataset: x must be nonzero (row " << i << ")";
      throw dataset_error(msg.str());
    }
  }
}

LikelihoodEvaluator::LikelihoodEvaluator(const ModelConfig& config,
                                         const Dataset& data)
    : config_(config), density_(config.error), x_(data.x), y_(data.y) {
  data.validate();
  x_scale_.resize(x_.size());
  const_term_ = 0.0;
  for (std::size_t i = 0; i < x_.size(); ++i) {
    const double ax = std::fabs(x_[i]);
    x_scale_[i] = std::pow(ax, config_.theta);
    const_term_ -= config_.theta * std::log(ax);
  }
}

double LikelihoodEvaluator::log_likelihood(double beta,
                                           double sigma) const noexcept {
  const double inv_sigma = 1.0 / sigma;
  double total = const_term_ - static_cast<double>(x_.size()) * std::log(sigma);
  for (std::size_t i = 0; i < x_.size(); ++i) {
    const double z = (y_[i] - beta * x_[i]) * inv_sigma / x_scale_[i];
    total += density_.log_density(z);
  }
  return total;
}

double LikelihoodEvaluator::log_posterior_unnorm(double beta,
                                                 double sigma) const noexcept {
  double lp = log_likelihood(beta, sigma);
  if (config_.prior == PriorKind::InverseSigma) lp -= std::log(sigma);
  return lp;
}

double log_likelihood(const ModelConfig& config, const Dataset& data,
                      const ParamPoint& p) {
  if (!(p.sigma > 0.0) || !std::isfinite(p.sigma))
    throw parameter_error("log_likelihood: sigma must be positive");
  return LikelihoodEvaluator(config, data).log_likelihood(p.beta, p.sigma);
}

double log_posterior_unnorm(const ModelConfig& config, const Dataset& data,
                            const ParamPoint& p) {
  if (!(p.sigma > 0.0) || !std::isfinite(p.sigma))
    throw parameter_error("log_posterior_unnorm: sigma must be positive");
  return LikelihoodEvaluator(config, data).log_posterior_unnorm(p.beta, p.sigma);
}

std::vector<double> classical_weights(double theta,
                                      const std::vector<double>& x) {
  if (x.empty()) throw dataset_error("classical_weights: empty x");
  std::vector<double> w(x.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0 || !std::isfinite(x[i]))
      throw dataset_error("classical_weights: x must be nonzero and finite");
    w[i] = std::pow(std::fabs(x[i]), 2.0 * (1.0 - theta));
    sum += w[i];
  }
  for (double& wi : w) wi /= sum;
  return w;
}

double classical_beta_hat(double theta, const Dataset& data) {
  data.validate();
  const std::vector<double> w = classical_weights(theta, data.x);
  double beta = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i)
    beta += w[i] * (data.y[i] / data.x[i]);
  return beta;
}

double sigma_floor(const Dataset& data) {
  data.validate();
  std::vector<double> r(data.size());
  for (std::size_t i = 0; i < data.size(); ++i)
    r[i] = std::fabs(data.y[i] / data.x[i]);
  std::nth_element(r.begin(), r.begin() + r.size() / 2, r.end());
  double scale = r[r.size() / 2];
  if (!(scale > 0.0) || !std::isfinite(scale)) scale = 1.0;
  return 1e-8 * scale;
}

}  // namespace robreg
