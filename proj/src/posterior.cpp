#include "robreg/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>
#include <sstream>

#include "robreg/errors.hpp"
#include "robreg/nelder_mead.hpp"
#include "robreg/parallel.hpp"

namespace robreg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEdgeDropNats = 30.0;
constexpr int kMaxDoublings = 40;
constexpr int kEdgeSamples = 65;

double median_of(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    std::nth_element(v.begin(), v.begin() + mid - 1, v.end());
    m = 0.5 * (m + v[mid - 1]);
  }
  return m;
}

double residual_sigma_start(const ModelConfig& config, const Dataset& data,
                            double beta, double floor) {
  std::vector<double> r(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double ax = std::fabs(data.x[i]);
    r[i] = std::fabs(data.y[i] - beta * data.x[i]) / std::pow(ax, config.theta);
  }
  const double s = median_of(std::move(r)) / 0.6745;
  return std::max(s, floor);
}

struct Candidate {
  double beta = 0.0;
  double log_sigma = 0.0;
  double fmin = kInf;
  bool converged = false;
};

Candidate run_simplex(const std::function<double(const std::vector<double>&)>& obj,
                      double beta0, double u0) {
  const double step_b = beta0 != 0.0 ? 0.05 * std::fabs(beta0) : 0.1;
  NelderMeadResult first =
      nelder_mead(obj, {beta0, u0}, {step_b, 0.25}, 1e-9, 10000);
  // polish from the found vertex with a fresh small simplex
  const double rb = std::max(1e-4 * (1.0 + std::fabs(first.x[0])), 1e-7);
  NelderMeadResult second =
      nelder_mead(obj, first.x, {rb, 1e-4}, 1e-9, 10000);
  const NelderMeadResult& best = second.fmin <= first.fmin ? second : first;
  Candidate c;
  c.beta = best.x[0];
  c.log_sigma = best.x[1];
  c.fmin = best.fmin;
  c.converged = first.converged || second.converged;
  return c;
}

// Shared grid evaluation: log posterior at cell centers plus the
// log-sum-exp normalization over cell masses, reduced in index order.
struct GridFill {
  std::vector<double> beta_center;
  std::vector<double> sigma_center;
  std::vector<double> sigma_edge;
  std::vector<double> log_area;  // per sigma column
  std::vector<double> log_unnorm;
  std::vector<double> cell_prob;
  double log_norm_const = 0.0;
};

GridFill fill_grid(const GridSpec& spec, const ModelConfig& config,
                   const Dataset& data, int n_threads) {
  const int nb = spec.n_beta;
  const int ns = spec.n_sigma;
  GridFill g;
  g.beta_center.resize(nb);
  g.sigma_center.resize(ns);
  g.sigma_edge.resize(ns + 1);
  g.log_area.resize(ns);
  g.log_unnorm.assign(static_cast<std::size_t>(nb) * ns, 0.0);

  const double dbeta = (spec.beta_hi - spec.beta_lo) / nb;
  for (int i = 0; i < nb; ++i)
    g.beta_center[i] = spec.beta_lo + (i + 0.5) * dbeta;

  const double lsl = std::log(spec.sigma_lo);
  const double du = (std::log(spec.sigma_hi) - lsl) / ns;
  for (int j = 0; j <= ns; ++j) g.sigma_edge[j] = std::exp(lsl + j * du);
  g.sigma_edge[0] = spec.sigma_lo;
  g.sigma_edge[ns] = spec.sigma_hi;
  for (int j = 0; j < ns; ++j) {
    g.sigma_center[j] = std::exp(lsl + (j + 0.5) * du);
    g.log_area[j] = std::log(dbeta * (g.sigma_edge[j + 1] - g.sigma_edge[j]));
  }

  const LikelihoodEvaluator like(config, data);
  parallel_for(static_cast<std::size_t>(nb), n_threads, [&](std::size_t i) {
    double* row = g.log_unnorm.data() + i * ns;
    const double b = g.beta_center[i];
    for (int j = 0; j < ns; ++j)
      row[j] = like.log_posterior_unnorm(b, g.sigma_center[j]);
  });

  // two-pass log-sum-exp in fixed index order
  double lmax = -kInf;
  for (int i = 0; i < nb; ++i)
    for (int j = 0; j < ns; ++j)
      lmax = std::max(lmax, g.log_unnorm[static_cast<std::size_t>(i) * ns + j] +
                                g.log_area[j]);
  if (!std::isfinite(lmax))
    throw numerical_error("fill_grid: posterior vanished on the whole grid",
                          lmax, kInf);
  double sum = 0.0;
  for (int i = 0; i < nb; ++i)
    for (int j = 0; j < ns; ++j)
      sum += std::exp(g.log_unnorm[static_cast<std::size_t>(i) * ns + j] +
                      g.log_area[j] - lmax);
  g.log_norm_const = lmax + std::log(sum);

  g.cell_prob.resize(g.log_unnorm.size());
  double total = 0.0;
  for (std::size_t k = 0; k < g.cell_prob.size(); ++k) {
    g.cell_prob[k] = std::exp(g.log_unnorm[k] + g.log_area[k % ns] -
                              g.log_norm_const);
    total += g.cell_prob[k];
  }
  for (double& p : g.cell_prob) p /= total;
  return g;
}

void check_propriety(const ModelConfig& config, const Dataset& data) {
  if (config.prior == PriorKind::Flat && data.size() < 3)
    throw dataset_error(
        "build_posterior_grid: flat prior needs n > 2 for a proper posterior");
  if (config.prior == PriorKind::InverseSigma && data.size() < 2)
    throw dataset_error(
        "build_posterior_grid: 1/sigma prior needs n >= 2 for a proper posterior");
}

}  // namespace

void GridSpec::validate() const {
  if (!(beta_lo < beta_hi))
    throw parameter_error("GridSpec: beta_lo must be below beta_hi");
  if (!(sigma_lo > 0.0) || !(sigma_lo < sigma_hi))
    throw parameter_error("GridSpec: need 0 < sigma_lo < sigma_hi");
  if (n_beta < 16 || n_sigma < 16)
    throw parameter_error("GridSpec: cell counts must be at least 16");
}

ParamPoint map_estimate(const ModelConfig& config, const Dataset& data,
                        std::optional<ParamPoint> init) {
  data.validate();
  if (config.prior == PriorKind::Flat && data.size() <= 2)
    std::cerr << "warning: map_estimate with a flat prior and n <= 2; the "
                 "posterior is improper\n";

  const LikelihoodEvaluator like(config, data);
  const double floor = sigma_floor(data);
  const double u_floor = std::log(floor);

  const auto objective = [&](const std::vector<double>& v) {
    double u = v[1];
    double penalty = 0.0;
    if (u < u_floor) {
      penalty = (u_floor - u) * 1e6;
      u = u_floor;
    } else if (u > 700.0) {
      penalty = (u - 700.0) * 1e6;
      u = 700.0;
    }
    const double lp = like.log_posterior_unnorm(v[0], std::exp(u));
    if (std::isnan(lp)) return kInf;
    return -lp + penalty;
  };

  std::vector<ParamPoint> starts;
  if (init) {
    if (!(init->sigma > 0.0))
      throw parameter_error("map_estimate: init.sigma must be positive");
    starts.push_back(*init);
  }
  std::vector<double> ratios(data.size());
  for (std::size_t i = 0; i < data.size(); ++i)
    ratios[i] = data.y[i] / data.x[i];
  const double beta_classical = classical_beta_hat(config.theta, data);
  const double beta_mean =
      std::accumulate(ratios.begin(), ratios.end(), 0.0) / ratios.size();
  const double beta_median = median_of(ratios);
  for (double b : {beta_classical, beta_mean, beta_median})
    starts.push_back({b, residual_sigma_start(config, data, b, floor)});

  std::vector<Candidate> found;
  found.reserve(starts.size());
  for (const ParamPoint& s : starts)
    found.push_back(
        run_simplex(objective, s.beta, std::log(std::max(s.sigma, floor))));

  const Candidate* best = &found[0];
  for (const Candidate& c : found) {
    if (c.fmin < best->fmin - 1e-9) {
      best = &c;
    } else if (std::fabs(c.fmin - best->fmin) <= 1e-9) {
      if (c.beta < best->beta ||
          (c.beta == best->beta && c.log_sigma < best->log_sigma))
        best = &c;
    }
  }

  const ParamPoint result{best->beta,
                          std::max(std::exp(best->log_sigma), floor)};
  const bool any_converged =
      std::any_of(found.begin(), found.end(),
                  [](const Candidate& c) { return c.converged; });
  if (!any_converged)
    throw optimization_error("map_estimate: no start converged", result,
                             -best->fmin);
  return result;
}

GridSpec auto_grid_spec(const ModelConfig& config, const Dataset& data,
                        std::optional<ParamPoint> map_hint, int n_beta,
                        int n_sigma) {
  const ParamPoint map = map_hint ? *map_hint : map_estimate(config, data);
  const LikelihoodEvaluator like(config, data);
  const double floor = sigma_floor(data);
  const double sigma_map = std::max(map.sigma, floor);
  const double u_map = std::log(sigma_map);
  const double lmap = like.log_posterior_unnorm(map.beta, sigma_map);
  const double target = lmap - kEdgeDropNats;

  double wb_lo = std::max(1e-3 * (1.0 + std::fabs(map.beta)), 1e-12);
  double wb_hi = wb_lo;
  double wu_lo = 0.25;
  double wu_hi = 0.25;
  int doublings[4] = {0, 0, 0, 0};

  const auto edge_max_beta = [&](double beta_fixed) {
    double m = -kInf;
    for (int k = 0; k < kEdgeSamples; ++k) {
      const double u =
          u_map - wu_lo + (wu_hi + wu_lo) * k / (kEdgeSamples - 1);
      m = std::max(m, like.log_posterior_unnorm(
                          beta_fixed, std::max(std::exp(u), floor)));
    }
    return m;
  };
  const auto edge_max_sigma = [&](double sigma_fixed) {
    double m = -kInf;
    for (int k = 0; k < kEdgeSamples; ++k) {
      const double b =
          map.beta - wb_lo + (wb_hi + wb_lo) * k / (kEdgeSamples - 1);
      m = std::max(m, like.log_posterior_unnorm(b, sigma_fixed));
    }
    return m;
  };

  while (true) {
    bool all_ok = true;
    if (edge_max_beta(map.beta - wb_lo) > target) {
      wb_lo *= 2.0;
      ++doublings[0];
      all_ok = false;
    }
    if (edge_max_beta(map.beta + wb_hi) > target) {
      wb_hi *= 2.0;
      ++doublings[1];
      all_ok = false;
    }
    const double sigma_bottom = std::exp(u_map - wu_lo);
    if (sigma_bottom > floor && edge_max_sigma(sigma_bottom) > target) {
      wu_lo *= 2.0;
      ++doublings[2];
      all_ok = false;
    }
    if (edge_max_sigma(std::exp(u_map + wu_hi)) > target) {
      wu_hi *= 2.0;
      ++doublings[3];
      all_ok = false;
    }
    if (all_ok) break;
    for (int d : doublings)
      if (d > kMaxDoublings)
        throw non_integrable_error(
            "auto_grid_spec: bracket expansion exceeded 40 doublings; the "
            "posterior appears non-integrable");
  }

  GridSpec spec;
  spec.beta_lo = map.beta - wb_lo;
  spec.beta_hi = map.beta + wb_hi;
  spec.sigma_lo = std::max(std::exp(u_map - wu_lo), floor);
  spec.sigma_hi = std::exp(u_map + wu_hi);
  spec.n_beta = n_beta;
  spec.n_sigma = n_sigma;
  spec.validate();
  return spec;
}

PosteriorGrid build_posterior_grid(const ModelConfig& config,
                                   const Dataset& data,
                                   std::optional<GridSpec> spec, int n_threads,
                                   std::optional<ParamPoint> map_hint) {
  data.validate();
  check_propriety(config, data);
  GridSpec gs;
  if (spec) {
    spec->validate();
    gs = *spec;
  } else {
    gs = auto_grid_spec(config, data, map_hint);
  }

  GridFill fill = fill_grid(gs, config, data, n_threads);
  PosteriorGrid grid;
  grid.spec = gs;
  grid.config = config;
  grid.data = data;
  grid.beta_center = std::move(fill.beta_center);
  grid.sigma_center = std::move(fill.sigma_center);
  grid.sigma_edge = std::move(fill.sigma_edge);
  grid.log_unnorm = std::move(fill.log_unnorm);
  grid.cell_prob = std::move(fill.cell_prob);
  grid.log_norm_const = fill.log_norm_const;
  return grid;
}

DiscreteDensity marginal(const PosteriorGrid& grid, Axis which) {
  const int nb = grid.spec.n_beta;
  const int ns = grid.spec.n_sigma;
  DiscreteDensity m;
  if (which == Axis::Beta) {
    m.value = grid.beta_center;
    m.prob.assign(nb, 0.0);
    m.width.assign(nb, grid.beta_width());
    for (int i = 0; i < nb; ++i) {
      double s = 0.0;
      for (int j = 0; j < ns; ++j)
        s += grid.cell_prob[static_cast<std::size_t>(i) * ns + j];
      m.prob[i] = s;
    }
  } else {
    m.value = grid.sigma_center;
    m.prob.assign(ns, 0.0);
    m.width.resize(ns);
    for (int j = 0; j < ns; ++j)
      m.width[j] = grid.sigma_edge[j + 1] - grid.sigma_edge[j];
    for (int j = 0; j < ns; ++j) {
      double s = 0.0;
      for (int i = 0; i < nb; ++i)
        s += grid.cell_prob[static_cast<std::size_t>(i) * ns + j];
      m.prob[j] = s;
    }
  }
  return m;
}

namespace {

void check_marginal(const DiscreteDensity& m) {
  if (m.value.empty() || m.value.size() != m.prob.size() ||
      m.value.size() != m.width.size())
    throw parameter_error("discretized density: inconsistent field lengths");
  const double total = std::accumulate(m.prob.begin(), m.prob.end(), 0.0);
  if (std::fabs(total - 1.0) > 1e-9)
    throw parameter_error("discretized density: probabilities must sum to 1");
}

// CDF polyline: (lo edge, 0), (center_i, cum_i - p_i/2)..., (hi edge, 1).
void cdf_polyline(const DiscreteDensity& m, std::vector<double>& px,
                  std::vector<double>& pc) {
  const std::size_t n = m.value.size();
  px.resize(n + 2);
  pc.resize(n + 2);
  px[0] = m.value.front() - 0.5 * m.width.front();
  pc[0] = 0.0;
  double cum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    px[i + 1] = m.value[i];
    pc[i + 1] = cum + 0.5 * m.prob[i];
    cum += m.prob[i];
  }
  px[n + 1] = m.value.back() + 0.5 * m.width.back();
  pc[n + 1] = 1.0;
}

}  // namespace

double quantile(const DiscreteDensity& marg, double p) {
  if (!(p > 0.0) || !(p < 1.0))
    throw parameter_error("quantile: p must lie in (0, 1)");
  check_marginal(marg);
  std::vector<double> px, pc;
  cdf_polyline(marg, px, pc);
  const auto it = std::upper_bound(pc.begin(), pc.end(), p);
  const std::size_t hi = std::min<std::size_t>(it - pc.begin(), pc.size() - 1);
  const std::size_t lo = hi - 1;
  const double span = pc[hi] - pc[lo];
  if (span <= 0.0) return px[lo];
  return px[lo] + (p - pc[lo]) / span * (px[hi] - px[lo]);
}

double cdf(const DiscreteDensity& marg, double v) {
  check_marginal(marg);
  std::vector<double> px, pc;
  cdf_polyline(marg, px, pc);
  if (v <= px.front()) return 0.0;
  if (v >= px.back()) return 1.0;
  const auto it = std::upper_bound(px.begin(), px.end(), v);
  const std::size_t hi = it - px.begin();
  const std::size_t lo = hi - 1;
  const double span = px[hi] - px[lo];
  if (span <= 0.0) return pc[lo];
  return pc[lo] + (v - px[lo]) / span * (pc[hi] - pc[lo]);
}

namespace {

// Piecewise-linear density through the cell centers, extended flat onto
// the outer half-cells.
struct DensityPolyline {
  std::vector<double> x;
  std::vector<double> d;

  explicit DensityPolyline(const DiscreteDensity& m) {
    const std::size_t n = m.value.size();
    x.resize(n + 2);
    d.resize(n + 2);
    x[0] = m.value.front() - 0.5 * m.width.front();
    d[0] = m.prob.front() / m.width.front();
    for (std::size_t i = 0; i < n; ++i) {
      x[i + 1] = m.value[i];
      d[i + 1] = m.prob[i] / m.width[i];
    }
    x[n + 1] = m.value.back() + 0.5 * m.width.back();
    d[n + 1] = m.prob.back() / m.width.back();
  }

  double total() const {
    double t = 0.0;
    for (std::size_t s = 0; s + 1 < x.size(); ++s)
      t += 0.5 * (d[s] + d[s + 1]) * (x[s + 1] - x[s]);
    return t;
  }

  // Mass of {v : density(v) >= t} and the corresponding region set.
  double mass_above(double t, std::vector<Interval>* regions) const {
    double mass = 0.0;
    if (regions) regions->clear();
    bool open = false;
    double open_lo = 0.0;
    const auto close_region = [&](double hi) {
      if (regions && open) regions->push_back({open_lo, hi});
      open = false;
    };
    for (std::size_t s = 0; s + 1 < x.size(); ++s) {
      const double a = x[s], b = x[s + 1];
      const double da = d[s], db = d[s + 1];
      if (da >= t && db >= t) {
        mass += 0.5 * (da + db) * (b - a);
        if (!open) {
          open = true;
          open_lo = a;
        }
      } else if (da < t && db < t) {
        close_region(a);
      } else {
        const double frac = (t - da) / (db - da);
        const double xc = a + frac * (b - a);
        if (da >= t) {
          mass += 0.5 * (da + t) * (xc - a);
          if (!open) {
            open = true;
            open_lo = a;
          }
          close_region(xc);
        } else {
          mass += 0.5 * (t + db) * (b - xc);
          open = true;
          open_lo = xc;
        }
      }
    }
    close_region(x.back());
    return mass;
  }
};

bool is_unimodal_after_smoothing(const DiscreteDensity& m) {
  const std::size_t n = m.prob.size();
  std::vector<double> dens(n);
  for (std::size_t i = 0; i < n; ++i) dens[i] = m.prob[i] / m.width[i];
  std::vector<double> smooth(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = dens[i];
    int c = 1;
    if (i > 0) {
      s += dens[i - 1];
      ++c;
    }
    if (i + 1 < n) {
      s += dens[i + 1];
      ++c;
    }
    smooth[i] = s / c;
  }
  bool decreasing_seen = false;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (smooth[i + 1] < smooth[i]) {
      decreasing_seen = true;
    } else if (smooth[i + 1] > smooth[i] && decreasing_seen) {
      return false;
    }
  }
  return true;
}

std::vector<Interval> threshold_regions(const DensityPolyline& poly,
                                        double level, double total) {
  double t_lo = 0.0;
  double t_hi = *std::max_element(poly.d.begin(), poly.d.end());
  for (int it = 0; it < 200; ++it) {
    const double t = 0.5 * (t_lo + t_hi);
    const double mass = poly.mass_above(t, nullptr);
    if (mass > level * total)
      t_lo = t;
    else
      t_hi = t;
    if (t_hi - t_lo < 1e-15 * std::max(1.0, t_hi)) break;
  }
  std::vector<Interval> regions;
  poly.mass_above(t_lo, &regions);
  return regions;
}

}  // namespace

Interval hpd_interval(const DiscreteDensity& marg, double level) {
  if (!(level > 0.0) || !(level < 1.0))
    throw parameter_error("hpd_interval: level must lie in (0, 1)");
  check_marginal(marg);
  if (marg.value.size() == 1) {
    const double half = 0.5 * marg.width[0];
    return {marg.value[0] - half, marg.value[0] + half};
  }

  const DensityPolyline poly(marg);
  const double total = poly.total();
  std::vector<Interval> regions = threshold_regions(poly, level, total);

  if (!is_unimodal_after_smoothing(marg))
    throw multimodal_error("hpd_interval: marginal is multimodal", regions);

  // merge hairline gaps left by quadrature noise
  const double max_gap =
      *std::max_element(marg.width.begin(), marg.width.end());
  std::vector<Interval> merged;
  for (const Interval& r : regions) {
    if (!merged.empty() && r.lo - merged.back().hi <= max_gap)
      merged.back().hi = r.hi;
    else
      merged.push_back(r);
  }
  if (merged.size() != 1)
    throw multimodal_error("hpd_interval: disjoint density regions", merged);
  return merged.front();
}

double l1_distance(const PosteriorGrid& a, const PosteriorGrid& b,
                   int n_threads) {
  GridSpec u;
  u.beta_lo = std::min(a.spec.beta_lo, b.spec.beta_lo);
  u.beta_hi = std::max(a.spec.beta_hi, b.spec.beta_hi);
  u.sigma_lo = std::min(a.spec.sigma_lo, b.spec.sigma_lo);
  u.sigma_hi = std::max(a.spec.sigma_hi, b.spec.sigma_hi);
  u.n_beta = std::max(a.spec.n_beta, b.spec.n_beta);
  u.n_sigma = std::max(a.spec.n_sigma, b.spec.n_sigma);
  u.validate();

  const GridFill fa = fill_grid(u, a.config, a.data, n_threads);
  const GridFill fb = fill_grid(u, b.config, b.data, n_threads);
  double l1 = 0.0;
  for (std::size_t k = 0; k < fa.cell_prob.size(); ++k)
    l1 += std::fabs(fa.cell_prob[k] - fb.cell_prob[k]);
  return l1;
}

double log_marginal_likelihood(const PosteriorGrid& grid) {
  return grid.log_norm_const;
}

FitSummary fit_model(const ModelConfig& config, const Dataset& data,
                     double level, std::optional<GridSpec> spec,
                     int n_threads) {
  if (!(level > 0.0) || !(level < 1.0))
    throw parameter_error("fit_model: level must lie in (0, 1)");
  const ParamPoint map = map_estimate(config, data);
  const PosteriorGrid grid =
      build_posterior_grid(config, data, spec, n_threads, map);
  const DiscreteDensity mb = marginal(grid, Axis::Beta);
  const DiscreteDensity ms = marginal(grid, Axis::Sigma);

  FitSummary fit;
  fit.map = map;
  fit.median_beta = quantile(mb, 0.5);
  fit.median_sigma = quantile(ms, 0.5);
  fit.hpd_beta = hpd_interval(mb, level);
  fit.hpd_sigma = hpd_interval(ms, level);
  fit.level = level;
  fit.log_marginal = grid.log_norm_const;
  fit.grid_spec_used = grid.spec;
  return fit;
}

}  // namespace robreg
