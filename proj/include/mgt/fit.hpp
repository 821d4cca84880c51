#pragma once

#include <cstddef>
#include <vector>

namespace mgt {

struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double r_squared = 0.0;
  double max_abs_residual = 0.0;
  std::size_t points = 0;
};

// Ordinary least squares y = intercept + slope * x.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Fit of log y against log x; all values must be positive.
LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

// Fit of log y against x (exponential rate).
LineFit fit_loglinear(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace mgt
