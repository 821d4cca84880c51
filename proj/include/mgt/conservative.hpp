#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mgt/dissipative.hpp"
#include "mgt/kernels.hpp"
#include "mgt/radial.hpp"
#include "mgt/report.hpp"

namespace mgt {

// Exact rational with a positive denominator, always in lowest terms.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  // Best continued-fraction approximation with denominator <= max_den.
  static Rational from_double(double x, std::int64_t max_den = 1000000);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b);
  friend bool operator<(const Rational& a, const Rational& b);
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }

 private:
  static Rational make(__int128 num, __int128 den);
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

// The point (1/p, 1/q).
struct ExponentPair {
  double inv_p = 0.5;
  double inv_q = 0.5;
  int n = 3;

  void validate() const;
  // Vertices "P1" ... "P5" of the admissible triangle and trapezoid.
  static ExponentPair vertex(int n, const std::string& label);
};

struct RationalPoint {
  Rational x, y;
};

enum class Region { Triangle, Trapezoid };
const char* to_string(Region r);

RationalPoint vertex_exact(int n, const std::string& label);
// Vertices in boundary order.
std::vector<std::string> region_vertex_labels(Region r);

bool admissible_region(const ExponentPair& point, Region region);

// 1 - n (1/p - 1/q) computed exactly; throws DomainError outside the triangle.
Rational conservative_exponent_exact(const ExponentPair& point);
double conservative_predicted_exponent(const ExponentPair& point);

struct WaveState {
  RadialFunction u_hat;
  RadialFunction ut_hat;
  double t = 0.0;

  void validate() const;
};

// tau * phi_t + phi, pointwise on a shared grid.
RadialFunction good_unknown(const RadialFunction& phi_t_hat, const RadialFunction& phi_hat,
                            double tau);
// Initial state u(0) = tau phi1 + phi0, u_t(0) = tau phi2 + phi1.
WaveState good_unknown_initial(const DataTriple& data, double tau);

// Free wave evolution by the elapsed time t >= 0.
WaveState wave_evolve(const WaveState& state0, double t);

using WaveTrajectory = std::function<RadialFunction(double)>;

struct DuhamelOptions {
  // Relative agreement required between 8- and 16-point panel rules.
  double tolerance = 1e-10;
  double panel_width = 0.0;  // 0: min(tau/4, 2 pi / rho_max)
};

// phi(t) = (1/tau) int_0^t e^{-(t-eta)/tau} u(eta) d eta + e^{-t/tau} phi0.
RadialFunction duhamel_recover(const WaveTrajectory& u_traj, const RadialFunction& phi0_hat,
                               double tau, double t, const DuhamelOptions& opt = {});

struct IBoundResult {
  bool bounded = false;
  double exponent = 0.0;
  double sup_ratio = 0.0;
  double sup_ratio_refined = 0.0;
  std::vector<double> times;
  std::vector<double> ratios;
};

// I(t) = int_0^t e^{-(t-eta)/tau} eta^a d eta for a > -1.
double I_integral(double tau, double a, double t);
IBoundResult check_I_bound_exponent(double tau, double a, const std::vector<double>& t_grid);
IBoundResult check_I_bound(double tau, const ExponentPair& point,
                           const std::vector<double>& t_grid);

RateReport run_conservative_experiment(double tau, const FrequencyData& data,
                                       const ExponentPair& point, double s,
                                       const std::vector<double>& times,
                                       const LabOptions& opt = {});

}  // namespace mgt
