#include "mgt/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <system_error>

#include "mgt/errors.hpp"
#include "mgt/fit.hpp"

namespace mgt {

const char* to_string(RateMode m) {
  switch (m) {
    case RateMode::TwoSided: return "two-sided";
    case RateMode::UpperBound: return "upper-bound";
    case RateMode::ExpDecay: return "exp-decay";
    case RateMode::Bounded: return "bounded";
  }
  return "?";
}

void RateReport::evaluate() {
  const double diff = measured_slope - predicted_slope;
  two_sided_agreement = std::isfinite(diff) && std::abs(diff) <= slope_tolerance;
  not_saturated = false;
  switch (mode) {
    case RateMode::TwoSided:
      pass = two_sided_agreement;
      break;
    case RateMode::UpperBound:
      pass = std::isfinite(diff) && diff <= slope_tolerance;
      not_saturated = pass && diff < -slope_tolerance;
      break;
    case RateMode::ExpDecay:
    case RateMode::Bounded:
      pass = std::isfinite(measured_slope) && measured_slope < predicted_slope;
      break;
  }
}

void finalize_rate_report(RateReport& r) {
  if (r.times.size() != r.norms.size()) {
    throw UsageError("rate report: times and norms differ in length");
  }
  for (std::size_t i = 1; i < r.times.size(); ++i) {
    if (!(r.times[i] > r.times[i - 1])) {
      throw UsageError("rate report: times must be strictly increasing");
    }
  }
  std::vector<double> t, v;
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    if (r.norms[i] < 1e-300) {
      std::ostringstream os;
      os << "norm underflow at t=" << r.times[i] << " (saturated, point dropped)";
      r.warnings.push_back(os.str());
      continue;
    }
    t.push_back(r.times[i]);
    v.push_back(r.norms[i]);
  }
  if (t.size() < 2) {
    throw FitError("rate report '" + r.experiment + "': fewer than 2 usable points");
  }
  const LineFit f = r.mode == RateMode::ExpDecay ? fit_loglinear(t, v) : fit_loglog(t, v);
  r.measured_slope = f.slope;
  r.fit_r_squared = f.r_squared;
  r.fit_max_residual = f.max_abs_residual;
  if (t.size() >= 3 && f.max_abs_residual > 0.1) {
    std::ostringstream os;
    os << (r.mode == RateMode::ExpDecay ? "non-exponential" : "non-power-law")
       << " behaviour: max log residual " << f.max_abs_residual
       << ", R^2 " << f.r_squared;
    r.warnings.push_back(os.str());
  }
  r.evaluate();
}

nlohmann::json to_json(const RateReport& r, const nlohmann::json& config_echo) {
  nlohmann::json j;
  j["experiment"] = r.experiment;
  j["config_echo"] = config_echo;
  j["predicted"] = r.predicted_slope;
  j["measured"] = r.measured_slope;
  j["tolerance"] = r.slope_tolerance;
  j["mode"] = to_string(r.mode);
  j["pass"] = r.pass;
  j["two_sided_agreement"] = r.two_sided_agreement;
  j["not_saturated"] = r.not_saturated;
  j["fit"] = {{"r_squared", r.fit_r_squared}, {"max_log_residual", r.fit_max_residual}};
  j["times"] = r.times;
  j["norms"] = r.norms;
  j["warnings"] = r.warnings;
  j["metadata"] = r.metadata;
  return j;
}

std::string to_csv(const RateReport& r) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "t,norm,predicted_slope,measured_slope\n";
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    os << r.times[i] << ',' << r.norms[i] << ',' << r.predicted_slope << ','
       << r.measured_slope << '\n';
  }
  return os.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
  }
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) {
      out.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error("cannot rename into " + target.string());
  }
}

}  // namespace mgt
