#ifndef ROBREG_ERRORS_HPP
#define ROBREG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace robreg {

// Invalid distribution or model parameters.
class parameter_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Invalid dataset: zero x values, length mismatch, non-finite entries.
class dataset_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// A numerical routine failed to reach its tolerance. Carries the best
// estimate achieved and a bound on its error.
class numerical_error : public std::runtime_error {
public:
  numerical_error(const std::string& what, double estimate, double error_bound)
      : std::runtime_error(what), estimate_(estimate), error_bound_(error_bound) {}

  double estimate() const noexcept { return estimate_; }
  double error_bound() const noexcept { return error_bound_; }

private:
  double estimate_;
  double error_bound_;
};

}  // namespace robreg

#endif  // ROBREG_ERRORS_HPP
