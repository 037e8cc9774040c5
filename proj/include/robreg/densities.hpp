#ifndef ROBREG_DENSITIES_HPP
#define ROBREG_DENSITIES_HPP

#include <string>

namespace robreg {

enum class ErrorFamily {
  StandardNormal,
  ScaledStudent,
  LogParetoTailedNormal,
};

// Symmetric error density for the regression error term. One of:
//   StandardNormal          — no parameters;
//   ScaledStudent           — Student-t with `df` degrees of freedom,
//                             rescaled by a known `scale`;
//   LogParetoTailedNormal   — standard normal on [-alpha, alpha], tails
//                             proportional to (1/|z|) (log|z|)^(-phi).
//
// The log-Pareto-tailed normal is only a probability density for one phi
// per alpha; see solve_phi().
struct ErrorDensitySpec {
  ErrorFamily family = ErrorFamily::StandardNormal;
  double df = 0.0;     // ScaledStudent
  double scale = 0.0;  // ScaledStudent
  double alpha = 0.0;  // LogParetoTailedNormal, > 1
  double phi = 0.0;    // LogParetoTailedNormal, > 1

  static ErrorDensitySpec standard_normal();
  static ErrorDensitySpec scaled_student(double df, double scale);
  static ErrorDensitySpec log_pareto_tailed_normal(double alpha, double phi);

  // Throws parameter_error if the parameters are outside their domain.
  void validate() const;

  // Token used by the CLI and CSV output: "normal", "student", "lptn".
  std::string label() const;
};

// The three calibrated members used throughout: standard normal,
// Student(10) with scale 0.88, and log-Pareto-tailed normal with
// alpha = 1.96 and phi = solve_phi(1.96). All three put ~95% of their
// mass on [-1.96, 1.96].
ErrorDensitySpec calibrated_normal();
ErrorDensitySpec calibrated_student();
ErrorDensitySpec calibrated_lptn();

// Precomputes the normalization constants of a spec so that repeated
// log-density evaluation stays cheap in hot loops. Immutable and
// thread-safe.
class DensityEvaluator {
public:
  explicit DensityEvaluator(const ErrorDensitySpec& spec);

  double log_density(double z) const noexcept;

  // Same density evaluated from log|z|; usable when |z| itself would
  // overflow a double (tail diagnostics at z^nu).
  double log_density_from_log_abs(double log_abs_z) const noexcept;

  const ErrorDensitySpec& spec() const noexcept { return spec_; }

private:
  ErrorDensitySpec spec_;
  double c0_ = 0.0;  // family-specific constants
  double c1_ = 0.0;
  double inv_scale_ = 1.0;
  double log_alpha_ = 0.0;
};

// ln f(z). All arithmetic in the log domain; finite for all finite z
// except where the density truly underflows past double range.
double log_density(const ErrorDensitySpec& spec, double z);

// f(z) = exp(log_density).
double density(const ErrorDensitySpec& spec, double z);

// The unique phi > 1 for which the log-Pareto-tailed normal with the
// given alpha integrates to one:
//   phi = 1 + f_N(alpha) * alpha * log(alpha) / (1 - Phi(alpha)),
// with f_N and Phi the standard normal pdf/cdf.
double solve_phi(double alpha);

// Numerically integrates the density over the real line. Splits the
// domain at a family-dependent point and integrates the tail under the
// substitution u = log z. Throws numerical_error (with the achieved
// estimate and bound) if the tail fails to converge.
double total_mass(const ErrorDensitySpec& spec);

// g(z^nu) / g(z) for g(z) = z f(z). For a log-regularly varying family
// this approaches nu^(-rho) as z grows; for the log-Pareto-tailed normal
// rho = phi. Requires z beyond the tail split (z > max(alpha, e)).
double tail_ratio_diagnostic(const ErrorDensitySpec& spec, double z, double nu);

// Standard normal CDF via the complementary error function.
double std_normal_cdf(double x);

// Calibration helper: the scale s such that a Student-t(df) stretched by
// s has its q-th quantile at `target`.
double student_scale_for_quantile(double df, double q, double target);

}  // namespace robreg

#endif  // ROBREG_DENSITIES_HPP
