#ifndef ROBREG_QUADRATURE_HPP
#define ROBREG_QUADRATURE_HPP

#include <functional>

namespace robreg {

struct QuadratureResult {
  double value = 0.0;
  double error_bound = 0.0;
  bool converged = false;
};

// Adaptive Simpson on a finite interval. abs_tol is the target absolute
// error for the whole interval; the bound returned is the accumulated
// Richardson estimate.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b, double abs_tol,
                                    int max_depth = 40);

}  // namespace robreg

#endif  // ROBREG_QUADRATURE_HPP
