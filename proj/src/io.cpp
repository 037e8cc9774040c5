#include "robreg/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <sstream>

#include "robreg/errors.hpp"

#include <json.hpp>

namespace robreg {

std::string format_roundtrip(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string format_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::string strip(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& field, std::size_t line_no) {
  const std::string t = strip(field);
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc{} || res.ptr != t.data() + t.size()) {
    std::ostringstream msg;
    msg << "csv: line " << line_no << ": cannot parse number '" << t << "'";
    throw csv_error(msg.str());
  }
  return v;
}

}  // namespace

Dataset parse_dataset_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line))
    throw csv_error("csv: empty input, expected an 'x,y' header");
  ++line_no;
  if (strip(line) != "x,y") {
    std::ostringstream msg;
    msg << "csv: line 1: expected header 'x,y', got '" << strip(line) << "'";
    throw csv_error(msg.str());
  }

  Dataset d;
  while (std::getline(in, line)) {
    ++line_no;
    if (strip(line).empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      std::ostringstream msg;
      msg << "csv: line " << line_no << ": expected 'x,y' pair";
      throw csv_error(msg.str());
    }
    const double x = parse_number(line.substr(0, comma), line_no);
    const double y = parse_number(line.substr(comma + 1), line_no);
    if (x == 0.0) {
      std::ostringstream msg;
      msg << "csv: line " << line_no << " (row " << d.size() + 1
          << "): x must be nonzero";
      throw dataset_error(msg.str());
    }
    d.x.push_back(x);
    d.y.push_back(y);
  }
  if (d.size() == 0) throw csv_error("csv: no data rows");
  d.validate();
  return d;
}

std::string dataset_csv(const Dataset& data) {
  std::ostringstream out;
  out << "x,y\n";
  for (std::size_t i = 0; i < data.size(); ++i)
    out << format_roundtrip(data.x[i]) << "," << format_roundtrip(data.y[i])
        << "\n";
  return out.str();
}

std::string sweep_csv(const SweepResult& sweep) {
  std::ostringstream out;
  out << "y_value,model,beta_hat,sigma_hat\n";
  for (const SweepRow& row : sweep.rows)
    for (std::size_t c = 0; c < sweep.model_label.size(); ++c)
      out << format_full(row.y_value) << "," << sweep.model_label[c] << ","
          << format_full(row.estimate[c].beta) << ","
          << format_full(row.estimate[c].sigma) << "\n";
  return out.str();
}

std::string trace_csv(const ConvergenceTrace& trace) {
  std::ostringstream out;
  out << "omega,l1,log_marginal_ratio\n";
  for (const TraceRow& row : trace.rows)
    out << format_full(row.omega) << "," << format_full(row.l1) << ","
        << format_full(row.log_marginal_ratio) << "\n";
  return out.str();
}

std::string mse_csv(const MseTable& table) {
  std::ostringstream out;
  out << "scenario,model,parameter,mse,mc_se,failures,reps\n";
  for (std::size_t s = 0; s < table.scenario_label.size(); ++s) {
    for (std::size_t m = 0; m < table.model_label.size(); ++m) {
      const auto emit = [&](const char* param, const MseCell& cell) {
        out << table.scenario_label[s] << "," << table.model_label[m] << ","
            << param << "," << format_full(cell.mse) << ","
            << format_full(cell.mc_se) << "," << cell.failures << ","
            << cell.reps_used << "\n";
      };
      emit("beta", table.beta[s][m]);
      emit("sigma", table.sigma[s][m]);
    }
  }
  return out.str();
}

std::string fit_summary_json(const FitSummary& fit, const PointInterval* ratio,
                             const PointInterval* population_mean) {
  nlohmann::ordered_json j;
  j["map"] = {{"beta", fit.map.beta}, {"sigma", fit.map.sigma}};
  j["median"] = {{"beta", fit.median_beta}, {"sigma", fit.median_sigma}};
  j["hpd95"] = {{"beta", {fit.hpd_beta.lo, fit.hpd_beta.hi}},
                {"sigma", {fit.hpd_sigma.lo, fit.hpd_sigma.hi}}};
  j["log_marginal"] = fit.log_marginal;
  j["grid"] = {{"beta_lo", fit.grid_spec_used.beta_lo},
               {"beta_hi", fit.grid_spec_used.beta_hi},
               {"sigma_lo", fit.grid_spec_used.sigma_lo},
               {"sigma_hi", fit.grid_spec_used.sigma_hi},
               {"n_beta", fit.grid_spec_used.n_beta},
               {"n_sigma", fit.grid_spec_used.n_sigma}};
  if (ratio)
    j["ratio"] = {{"point", ratio->point},
                  {"interval", {ratio->interval.lo, ratio->interval.hi}}};
  if (population_mean)
    j["population_mean"] = {
        {"point", population_mean->point},
        {"interval",
         {population_mean->interval.lo, population_mean->interval.hi}}};
  return j.dump(2) + "\n";
}

}  // namespace robreg
