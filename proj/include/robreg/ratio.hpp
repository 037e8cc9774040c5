#ifndef ROBREG_RATIO_HPP
#define ROBREG_RATIO_HPP

#include <optional>

#include "robreg/posterior.hpp"

namespace robreg {

// Known facts about the finite population behind a sample. N is
// informational only.
struct PopulationContext {
  double mu_x = 0.0;  // known population mean of the auxiliary variable
  std::optional<long long> population_size;
};

struct PointInterval {
  double point = 0.0;
  Interval interval;
};

// Population ratio read off a fit. Convention: the fit should come from
// theta = 1/2 with positive x, where the slope is the population ratio.
// point is the posterior median unless map_point is set.
inline PointInterval ratio_summary(const FitSummary& fit,
                                   bool map_point = false) {
  PointInterval r;
  r.point = map_point ? fit.map.beta : fit.median_beta;
  r.interval = fit.hpd_beta;
  return r;
}

// mu_y = beta * mu_x: point and both HPD endpoints scaled by mu_x, with
// the endpoints flipped when mu_x is negative.
inline PointInterval population_mean_estimate(const FitSummary& fit,
                                              const PopulationContext& ctx,
                                              bool map_point = false) {
  const PointInterval r = ratio_summary(fit, map_point);
  PointInterval out;
  out.point = r.point * ctx.mu_x;
  out.interval.lo = r.interval.lo * ctx.mu_x;
  out.interval.hi = r.interval.hi * ctx.mu_x;
  if (ctx.mu_x < 0.0) std::swap(out.interval.lo, out.interval.hi);
  return out;
}

}  // namespace robreg

#endif  // ROBREG_RATIO_HPP
