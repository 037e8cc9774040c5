#ifndef ROBREG_IO_HPP
#define ROBREG_IO_HPP

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "robreg/model.hpp"
#include "robreg/posterior.hpp"
#include "robreg/ratio.hpp"
#include "robreg/robustness.hpp"
#include "robreg/sim_study.hpp"

namespace robreg {

// CSV input did not parse; the message carries the offending line number.
class csv_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Shortest decimal form that round-trips to the same double.
std::string format_roundtrip(double v);

// 17 significant digits.
std::string format_full(double v);

// Reads `x,y` rows under a mandatory `x,y` header. Throws csv_error with
// the line number on malformed input; zero x values are rejected as
// dataset_error with their row index.
Dataset parse_dataset_csv(std::istream& in);

std::string dataset_csv(const Dataset& data);
std::string sweep_csv(const SweepResult& sweep);
std::string trace_csv(const ConvergenceTrace& trace);
std::string mse_csv(const MseTable& table);

// Fit summary as a JSON document:
//   { "map": {"beta", "sigma"}, "median": {"beta", "sigma"},
//     "hpd95": {"beta": [lo, hi], "sigma": [lo, hi]},
//     "log_marginal", "grid": {...} }
// plus optional "ratio" / "population_mean" blocks.
std::string fit_summary_json(const FitSummary& fit,
                             const PointInterval* ratio = nullptr,
                             const PointInterval* population_mean = nullptr);

}  // namespace robreg

#endif  // ROBREG_IO_HPP
