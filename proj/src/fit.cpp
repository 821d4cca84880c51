#include "mgt/fit.hpp"

#include <boost/math/statistics/linear_regression.hpp>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mgt/errors.hpp"

namespace mgt {

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw FitError("fit: x and y differ in length");
  if (x.size() < 2) {
    std::ostringstream os;
    os << "fit: need at least 2 points, got " << x.size();
    throw FitError(os.str());
  }
  LineFit f;
  try {
    auto [c0, c1, r2] =
        boost::math::statistics::simple_ordinary_least_squares_with_R_squared(x, y);
    f.intercept = c0;
    f.slope = c1;
    f.r_squared = r2;
  } catch (const std::domain_error& e) {
    throw FitError(std::string("fit: ") + e.what());
  }
  f.points = x.size();
  for (std::size_t i = 0; i < x.size(); ++i) {
    f.max_abs_residual =
        std::max(f.max_abs_residual, std::abs(f.intercept + f.slope * x[i] - y[i]));
  }
  return f;
}

LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(i < y.size() && y[i] > 0.0)) {
      throw FitError("fit_loglog: values must be positive");
    }
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  return fit_line(lx, ly);
}

LineFit fit_loglinear(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> ly(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!(y[i] > 0.0)) throw FitError("fit_loglinear: values must be positive");
    ly[i] = std::log(y[i]);
  }
  return fit_line(x, ly);
}

}  // namespace mgt
