#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "mgt/radial.hpp"
#include "mgt/roots.hpp"

namespace mgt {

enum class KernelPart { Exp, Cos, Sin, Total };

struct KernelId {
  int ell = 0;
  KernelPart part = KernelPart::Total;
};

struct KernelEvalContext {
  MgtParams params;
  RootTriple roots;
  double Lambda0 = 0.0;
  double rho = 0.0;

  static KernelEvalContext at(const MgtParams& p, double rho);
  static double lambda0_of(const RootTriple& r);

  // True when the printed representation cannot be used: three real roots,
  // |muI| < 1e-8, or |Lambda0| < 1e-12 (1 + lambda1^2 + muI^2)^2.
  bool degenerate() const;
  // Throws DegenerateConfigurationError naming rho when degenerate().
  void require_printed() const;
};

// K^_ell = e * exp(lambda1 t) + c * cos(muI t) exp(muR t) + s * sin(muI t) exp(muR t)
struct KernelCoefficients {
  double e = 0.0;
  double c = 0.0;
  double s = 0.0;
};

KernelCoefficients kernel_coefficients(int ell, const KernelEvalContext& ctx);

double eval_kernel_hat(const KernelId& id, double t, const KernelEvalContext& ctx);
double eval_kernel_hat(const KernelId& id, double t, double rho, const MgtParams& p);

// d^order/dt^order of the kernel, evaluated analytically.
double eval_kernel_derivative(const KernelId& id, int order, double t,
                              const KernelEvalContext& ctx);

// Kernel from the general solution with three distinct (possibly all real)
// roots; used where the printed formula does not apply.
double eval_kernel_general(int ell, double t, const KernelEvalContext& ctx);

// sin(rho t)/rho * exp(-delta rho^2 t / 2), equal to t at rho = 0.
double eval_profile_J(double t, double rho, double delta);

// Coefficient [2 - ell + (ell - 1) tau] of the profile subtracted from K^_ell.
double profile_weight(int ell, double tau);

struct DataTriple {
  RadialFunction phi0, phi1, phi2;

  void validate() const;
  const RadialFunction& operator[](int ell) const;
};

enum class KernelFormula { PrintedOnly, AllowGeneral };

RadialFunction eval_solution_hat(const DataTriple& data, double t, const MgtParams& p,
                                 KernelFormula formula = KernelFormula::PrintedOnly);

struct OdeTrajectory {
  std::vector<double> t;
  std::vector<std::array<double, 3>> y;  // (phi, phi_t, phi_tt)
};

struct OracleOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  double initial_dt = 1e-3;
};

// Adaptive Dormand-Prince integration of
// tau y''' + y'' + (delta+tau) rho^2 y' + rho^2 y = 0, reported at `times`
// (ascending, non-negative).
OdeTrajectory ode_oracle(const std::array<double, 3>& y0, double rho,
                         const std::vector<double>& times, const MgtParams& p,
                         const OracleOptions& opt = {});

// rho^2 u^2 + u_t^2 for the good unknown u = tau y' + y; conserved when delta = 0.
double good_unknown_energy(const std::array<double, 3>& y, double rho, double tau);

}  // namespace mgt
