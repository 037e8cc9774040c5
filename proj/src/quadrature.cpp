#include "robreg/quadrature.hpp"

#include <cmath>

namespace robreg {
namespace {

struct SimpsonState {
  const std::function<double(double)>* f;
  double abs_tol_used = 0.0;
  bool converged = true;
};

double simpson(const std::function<double(double)>& f, double a, double fa,
               double b, double fb, double* fm_out) {
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  *fm_out = fm;
  return (b - a) * (fa + 4.0 * fm + fb) / 6.0;
}

double recurse(SimpsonState& st, double a, double fa, double m, double fm,
               double b, double fb, double whole, double tol, int depth,
               double* err_acc) {
  double fl, fr;
  const double left = simpson(*st.f, a, fa, m, fm, &fl);
  const double right = simpson(*st.f, m, fm, b, fb, &fr);
  const double diff = left + right - whole;
  if (depth <= 0 || std::fabs(diff) < 15.0 * tol) {
    if (depth <= 0 && std::fabs(diff) >= 15.0 * tol) st.converged = false;
    *err_acc += std::fabs(diff) / 15.0;
    return left + right + diff / 15.0;
  }
  const double ml = 0.5 * (a + m);
  const double mr = 0.5 * (m + b);
  return recurse(st, a, fa, ml, fl, m, fm, left, 0.5 * tol, depth - 1, err_acc) +
         recurse(st, m, fm, mr, fr, b, fb, right, 0.5 * tol, depth - 1, err_acc);
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b, double abs_tol,
                                    int max_depth) {
  QuadratureResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  SimpsonState st{&f};
  const double fa = f(a);
  const double fb = f(b);
  double fm;
  const double whole = simpson(f, a, fa, b, fb, &fm);
  double err = 0.0;
  out.value = recurse(st, a, fa, 0.5 * (a + b), fm, b, fb, whole, abs_tol,
                      max_depth, &err);
  out.error_bound = err;
  out.converged = st.converged;
  return out;
}

}  // namespace robreg
