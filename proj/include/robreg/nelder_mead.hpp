#ifndef ROBREG_NELDER_MEAD_HPP
#define ROBREG_NELDER_MEAD_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace robreg {

struct NelderMeadResult {
  std::vector<double> x;
  double fmin = std::numeric_limits<double>::infinity();
  int evaluations = 0;
  bool converged = false;
};

// Downhill simplex with standard coefficients. Converged when the
// simplex diameter (max coordinate spread) drops below diameter_tol or
// the evaluation budget is exhausted.
inline NelderMeadResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& start, const std::vector<double>& step,
    double diameter_tol, int max_evals) {
  const std::size_t dim = start.size();
  NelderMeadResult out;

  std::vector<std::vector<double>> verts(dim + 1, start);
  for (std::size_t i = 0; i < dim; ++i) verts[i + 1][i] += step[i];
  std::vector<double> fv(dim + 1);
  for (std::size_t i = 0; i <= dim; ++i) {
    fv[i] = f(verts[i]);
    ++out.evaluations;
  }

  auto order = [&]() {
    std::vector<std::size_t> idx(dim + 1);
    for (std::size_t i = 0; i <= dim; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      if (fv[a] != fv[b]) return fv[a] < fv[b];
      return a < b;
    });
    std::vector<std::vector<double>> v2(dim + 1);
    std::vector<double> f2(dim + 1);
    for (std::size_t k = 0; k <= dim; ++k) {
      v2[k] = verts[idx[k]];
      f2[k] = fv[idx[k]];
    }
    verts.swap(v2);
    fv.swap(f2);
  };

  auto diameter = [&]() {
    double d = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      double lo = verts[0][i], hi = verts[0][i];
      for (std::size_t k = 1; k <= dim; ++k) {
        lo = std::min(lo, verts[k][i]);
        hi = std::max(hi, verts[k][i]);
      }
      d = std::max(d, hi - lo);
    }
    return d;
  };

  while (out.evaluations < max_evals) {
    order();
    if (diameter() < diameter_tol) {
      out.converged = true;
      break;
    }

    std::vector<double> centroid(dim, 0.0);
    for (std::size_t k = 0; k < dim; ++k)
      for (std::size_t i = 0; i < dim; ++i) centroid[i] += verts[k][i] / dim;

    auto blend = [&](double t) {
      std::vector<double> p(dim);
      for (std::size_t i = 0; i < dim; ++i)
        p[i] = centroid[i] + t * (centroid[i] - verts[dim][i]);
      return p;
    };

    const std::vector<double> xr = blend(1.0);
    const double fr = f(xr);
    ++out.evaluations;

    if (fr < fv[0]) {
      const std::vector<double> xe = blend(2.0);
      const double fe = f(xe);
      ++out.evaluations;
      if (fe < fr) {
        verts[dim] = xe;
        fv[dim] = fe;
      } else {
        verts[dim] = xr;
        fv[dim] = fr;
      }
    } else if (fr < fv[dim - 1]) {
      verts[dim] = xr;
      fv[dim] = fr;
    } else {
      const bool outside = fr < fv[dim];
      const std::vector<double> xc = blend(outside ? 0.5 : -0.5);
      const double fc = f(xc);
      ++out.evaluations;
      if (fc < (outside ? fr : fv[dim])) {
        verts[dim] = xc;
        fv[dim] = fc;
      } else {
        for (std::size_t k = 1; k <= dim; ++k) {
          for (std::size_t i = 0; i < dim; ++i)
            verts[k][i] = verts[0][i] + 0.5 * (verts[k][i] - verts[0][i]);
          fv[k] = f(verts[k]);
          ++out.evaluations;
        }
      }
    }
  }

  order();
  out.x = verts[0];
  out.fmin = fv[0];
  return out;
}

}  // namespace robreg

#endif  // ROBREG_NELDER_MEAD_HPP
