#pragma once

#include <json.hpp>
#include <string>
#include <vector>

namespace mgt {

// How measured and predicted values are compared.
//   TwoSided:   |measured - predicted| <= tolerance
//   UpperBound: measured <= predicted + tolerance (the estimates are upper bounds)
//   ExpDecay:   measured exponential rate < predicted (a negative threshold)
//   Bounded:    measured (sup ratio / ratio at the first time) < predicted
enum class RateMode { TwoSided, UpperBound, ExpDecay, Bounded };

const char* to_string(RateMode m);

struct RateReport {
  std::string experiment;
  std::vector<double> times;
  std::vector<double> norms;
  double measured_slope = 0.0;
  double predicted_slope = 0.0;
  double slope_tolerance = 0.15;
  RateMode mode = RateMode::UpperBound;
  bool pass = false;
  // Measured decay clearly faster than predicted (upper-bound mode only).
  bool not_saturated = false;
  bool two_sided_agreement = false;
  double fit_r_squared = 0.0;
  double fit_max_residual = 0.0;
  std::vector<std::string> warnings;
  nlohmann::json metadata = nlohmann::json::object();

  // Recompute pass / agreement flags from the numbers and the mode.
  void evaluate();
};

// Fits log norm against log t (power modes) or t (ExpDecay) and fills the
// slope, fit diagnostics and verdict.  Norms below 1e-300 are dropped with a
// saturation warning.
void finalize_rate_report(RateReport& r);

nlohmann::json to_json(const RateReport& r,
                       const nlohmann::json& config_echo = nlohmann::json::object());

// Columns: t,norm,predicted_slope,measured_slope
std::string to_csv(const RateReport& r);

// Write through a temporary file in the same directory and rename it into
// place, so readers never observe a partial file.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace mgt
