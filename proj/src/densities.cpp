#include "robreg/densities.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "robreg/errors.hpp"
#include "robreg/quadrature.hpp"

namespace robreg {
namespace {

constexpr double kPi = 3.14159265358979323846;
const double kLogSqrt2Pi = 0.5 * std::log(2.0 * kPi);

}  // namespace

ErrorDensitySpec ErrorDensitySpec::standard_normal() {
  return ErrorDensitySpec{};
}

ErrorDensitySpec ErrorDensitySpec::scaled_student(double df, double scale) {
  ErrorDensitySpec s;
  s.family = ErrorFamily::ScaledStudent;
  s.df = df;
  s.scale = scale;
  s.validate();
  return s;
}

ErrorDensitySpec ErrorDensitySpec::log_pareto_tailed_normal(double alpha,
                                                            double phi) {
  ErrorDensitySpec s;
  s.family = ErrorFamily::LogParetoTailedNormal;
  s.alpha = alpha;
  s.phi = phi;
  s.validate();
  return s;
}

void ErrorDensitySpec::validate() const {
  switch (family) {
    case ErrorFamily::StandardNormal:
      return;
    case ErrorFamily::ScaledStudent:
      if (!(df > 0.0) || !std::isfinite(df))
        throw parameter_error("ScaledStudent: df must be a positive real");
      if (!(scale > 0.0) || !std::isfinite(scale))
        throw parameter_error("ScaledStudent: scale must be a positive real");
      return;
    case ErrorFamily::LogParetoTailedNormal:
      if (!(alpha > 1.0) || !std::isfinite(alpha))
        throw parameter_error("LogParetoTailedNormal: alpha must exceed 1");
      if (!(phi > 1.0) || !std::isfinite(phi))
        throw parameter_error("LogParetoTailedNormal: phi must exceed 1");
      return;
  }
  throw parameter_error("ErrorDensitySpec: unknown family");
}

std::string ErrorDensitySpec::label() const {
  switch (family) {
    case ErrorFamily::StandardNormal:
      return "normal";
    case ErrorFamily::ScaledStudent:
      return "student";
    case ErrorFamily::LogParetoTailedNormal:
      return "lptn";
  }
  return "unknown";
}

ErrorDensitySpec calibrated_normal() { return ErrorDensitySpec::standard_normal(); }

ErrorDensitySpec calibrated_student() {
  return ErrorDensitySpec::scaled_student(10.0, 0.88);
}

ErrorDensitySpec calibrated_lptn() {
  const double alpha = 1.96;
  return ErrorDensitySpec::log_pareto_tailed_normal(alpha, solve_phi(alpha));
}

DensityEvaluator::DensityEvaluator(const ErrorDensitySpec& spec) : spec_(spec) {
  spec_.validate();
  switch (spec_.family) {
    case ErrorFamily::StandardNormal:
      c0_ = -kLogSqrt2Pi;
      break;
    case ErrorFamily::ScaledStudent:
      inv_scale_ = 1.0 / spec_.scale;
      c0_ = std::lgamma(0.5 * (spec_.df + 1.0)) - std::lgamma(0.5 * spec_.df) -
            0.5 * std::log(spec_.df * kPi) - std::log(spec_.scale);
      break;
    case ErrorFamily::LogParetoTailedNormal:
      log_alpha_ = std::log(spec_.alpha);
      c0_ = -kLogSqrt2Pi;
      // tail constant: ln[(2pi)^(-1/2) e^(-a^2/2) a] + phi ln(ln a)
      c1_ = -kLogSqrt2Pi - 0.5 * spec_.alpha * spec_.alpha + log_alpha_ +
            spec_.phi * std::log(log_alpha_);
      break;
  }
}

double DensityEvaluator::log_density(double z) const noexcept {
  const double az = std::fabs(z);
  switch (spec_.family) {
    case ErrorFamily::StandardNormal:
      return c0_ - 0.5 * az * az;
    case ErrorFamily::ScaledStudent: {
      const double u = az * inv_scale_;
      return c0_ - 0.5 * (spec_.df + 1.0) * std::log1p(u * u / spec_.df);
    }
    case ErrorFamily::LogParetoTailedNormal:
      if (az <= spec_.alpha) return c0_ - 0.5 * az * az;
      return c1_ - std::log(az) - spec_.phi * std::log(std::log(az));
  }
  return -std::numeric_limits<double>::infinity();
}

double DensityEvaluator::log_density_from_log_abs(double la) const noexcept {
  switch (spec_.family) {
    case ErrorFamily::StandardNormal: {
      if (2.0 * la > 709.0) return -std::numeric_limits<double>::infinity();
      return c0_ - 0.5 * std::exp(2.0 * la);
    }
    case ErrorFamily::ScaledStudent: {
      const double ls = la - std::log(spec_.scale);
      if (2.0 * ls > 690.0) {
        // log1p(u^2/df) ~ 2 ls - log df for huge u
        return c0_ - 0.5 * (spec_.df + 1.0) * (2.0 * ls - std::log(spec_.df));
      }
      const double u = std::exp(ls);
      return c0_ - 0.5 * (spec_.df + 1.0) * std::log1p(u * u / spec_.df);
    }
    case ErrorFamily::LogParetoTailedNormal: {
      if (la <= log_alpha_) {
        const double z = std::exp(la);
        return c0_ - 0.5 * z * z;
      }
      return c1_ - la - spec_.phi * std::log(la);
    }
  }
  return -std::numeric_limits<double>::infinity();
}

double log_density(const ErrorDensitySpec& spec, double z) {
  if (!std::isfinite(z)) throw parameter_error("log_density: z must be finite");
  return DensityEvaluator(spec).log_density(z);
}

double density(const ErrorDensitySpec& spec, double z) {
  return std::exp(log_density(spec, z));
}

double std_normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double solve_phi(double alpha) {
  if (!(alpha > 1.0) || !std::isfinite(alpha))
    throw parameter_error("solve_phi: alpha must exceed 1");
  const double pdf_at_alpha = std::exp(-kLogSqrt2Pi - 0.5 * alpha * alpha);
  const double upper_tail = 0.5 * std::erfc(alpha / std::sqrt(2.0));
  return 1.0 + pdf_at_alpha * alpha * std::log(alpha) / upper_tail;
}

double total_mass(const ErrorDensitySpec& spec) {
  spec.validate();
  const DensityEvaluator f(spec);

  double split = 8.0;
  if (spec.family == ErrorFamily::ScaledStudent)
    split = std::max(8.0 * spec.scale, 1e-3);
  else if (spec.family == ErrorFamily::LogParetoTailedNormal)
    split = spec.alpha;

  const auto dens = [&](double z) { return std::exp(f.log_density(z)); };
  const QuadratureResult core = integrate_adaptive(dens, 0.0, split, 1e-13);

  // Tail under u = log z: integrand f(e^u) e^u on [log split, inf),
  // integrated over doubling windows until the contributions vanish.
  const auto tail_integrand = [&](double u) {
    return std::exp(f.log_density_from_log_abs(u) + u);
  };
  const double u0 = std::log(split);
  double tail_sum = 0.0;
  double tail_bound = 0.0;
  double prev = -1.0;
  double last = -1.0;
  double lo = u0;
  double width = 1.0;
  bool tail_done = false;
  while (lo < 700.0) {
    const double hi = std::min(lo + width, 700.0);
    const QuadratureResult seg = integrate_adaptive(tail_integrand, lo, hi, 1e-14);
    tail_sum += seg.value;
    tail_bound += seg.error_bound;
    prev = last;
    last = seg.value;
    if (last < 1e-13 && (prev < 0.0 || last <= prev)) {
      tail_done = true;
      break;
    }
    lo = hi;
    width *= 2.0;
  }
  double remainder = 0.0;
  if (!tail_done && prev > 0.0 && last < prev) {
    const double r = last / prev;
    remainder = last * r / (1.0 - r);
  }
  tail_bound += remainder;

  const double mass = 2.0 * (core.value + tail_sum);
  const double bound = 2.0 * (core.error_bound + tail_bound);
  if (!core.converged || (!tail_done && !(remainder < 1e-9))) {
    std::ostringstream msg;
    msg << "total_mass: integration did not converge (estimate " << mass
        << ", bound " << bound << ")";
    throw numerical_error(msg.str(), mass, bound);
  }
  return mass;
}

double tail_ratio_diagnostic(const ErrorDensitySpec& spec, double z, double nu) {
  spec.validate();
  if (!(nu > 0.0) || !std::isfinite(nu))
    throw parameter_error("tail_ratio_diagnostic: nu must be a positive real");
  double tail_start = std::exp(1.0);
  if (spec.family == ErrorFamily::LogParetoTailedNormal)
    tail_start = std::max(tail_start, spec.alpha);
  if (!(z > tail_start) || !std::isfinite(z))
    throw parameter_error(
        "tail_ratio_diagnostic: z must lie in the tail (z > max(alpha, e))");

  const DensityEvaluator f(spec);
  const double lz = std::log(z);
  // log g(z) = log z + log f(z), evaluated from log|z| so z^nu never
  // overflows.
  const double lg_base = lz + f.log_density_from_log_abs(lz);
  const double lg_pow = nu * lz + f.log_density_from_log_abs(nu * lz);
  return std::exp(lg_pow - lg_base);
}

namespace {

double student_cdf_upper(double u, double df) {
  // P(T <= u) for u >= 0 via numerical integration of the density.
  const DensityEvaluator f(ErrorDensitySpec::scaled_student(df, 1.0));
  const auto dens = [&](double t) { return std::exp(f.log_density(t)); };
  return 0.5 + integrate_adaptive(dens, 0.0, u, 1e-13).value;
}

}  // namespace

double student_scale_for_quantile(double df, double q, double target) {
  if (!(df > 0.0)) throw parameter_error("student_scale_for_quantile: df must be positive");
  if (!(q > 0.0) || !(q < 1.0) || q == 0.5)
    throw parameter_error("student_scale_for_quantile: q must lie in (0,1) and differ from 0.5");
  const double p = q > 0.5 ? q : 1.0 - q;
  double lo = 0.0, hi = 1.0;
  while (student_cdf_upper(hi, df) < p) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (student_cdf_upper(mid, df) < p ? lo : hi) = mid;
  }
  const double quant = 0.5 * (lo + hi);
  const double signed_quant = q > 0.5 ? quant : -quant;
  return target / signed_quant;
}

}  // namespace robreg
