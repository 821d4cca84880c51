#include "mgt/kernels.hpp"

#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <complex>
#include <sstream>

#include "mgt/errors.hpp"

namespace mgt {

KernelEvalContext KernelEvalContext::at(const MgtParams& p, double rho) {
  KernelEvalContext ctx;
  ctx.params = p;
  ctx.rho = rho;
  ctx.roots = solve_characteristic(p, rho);
  ctx.Lambda0 = lambda0_of(ctx.roots);
  return ctx;
}

double KernelEvalContext::lambda0_of(const RootTriple& r) {
  return 2.0 * r.muR * r.lambda1 - r.muI * r.muI - r.muR * r.muR - r.lambda1 * r.lambda1;
}

bool KernelEvalContext::degenerate() const {
  if (roots.three_real) return true;
  if (std::abs(roots.muI) < 1e-8) return true;
  const double sc = 1.0 + roots.lambda1 * roots.lambda1 + roots.muI * roots.muI;
  return std::abs(Lambda0) < 1e-12 * sc * sc;
}

void KernelEvalContext::require_printed() const {
  if (!degenerate()) return;
  std::ostringstream os;
  os << "degenerate root configuration at rho=" << rho << " (lambda1=" << roots.lambda1
     << ", muR=" << roots.muR << ", muI=" << roots.muI << ", Lambda0=" << Lambda0 << ")";
  throw DegenerateConfigurationError(os.str(), rho);
}

namespace {

void check_ell(int ell) {
  if (ell < 0 || ell > 2) throw DomainError("kernel index ell must be 0, 1 or 2");
}

}  // namespace

KernelCoefficients kernel_coefficients(int ell, const KernelEvalContext& ctx) {
  check_ell(ell);
  ctx.require_printed();
  const double l = ctx.roots.lambda1, mr = ctx.roots.muR, mi = ctx.roots.muI;
  const double L = ctx.Lambda0;
  KernelCoefficients k;
  switch (ell) {
    case 0:
      k.e = -(mi * mi + mr * mr) / L;
      k.c = (2.0 * mr * l - l * l) / L;
      k.s = l * (mr * l + mi * mi - mr * mr) / (mi * L);
      break;
    case 1:
      k.e = 2.0 * mr / L;
      k.c = -2.0 * mr / L;
      k.s = (mr * mr - mi * mi - l * l) / (mi * L);
      break;
    default:
      k.e = -1.0 / L;
      k.c = 1.0 / L;
      k.s = -(mr - l) / (mi * L);
      break;
  }
  return k;
}

double eval_kernel_derivative(const KernelId& id, int order, double t,
                              const KernelEvalContext& ctx) {
  if (order < 0) throw DomainError("derivative order must be >= 0");
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("kernel time must be >= 0");
  const KernelCoefficients k = kernel_coefficients(id.ell, ctx);
  const std::complex<double> z(ctx.roots.muR, ctx.roots.muI);
  const std::complex<double> w = std::pow(z, order) * std::exp(z * t);
  const double ex = std::pow(ctx.roots.lambda1, order) * std::exp(ctx.roots.lambda1 * t);
  switch (id.part) {
    case KernelPart::Exp: return k.e * ex;
    case KernelPart::Cos: return k.c * w.real();
    case KernelPart::Sin: return k.s * w.imag();
    case KernelPart::Total: return k.e * ex + k.c * w.real() + k.s * w.imag();
  }
  return 0.0;
}

double eval_kernel_hat(const KernelId& id, double t, const KernelEvalContext& ctx) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("kernel time must be >= 0");
  const KernelCoefficients k = kernel_coefficients(id.ell, ctx);
  const double er = std::exp(ctx.roots.muR * t);
  const double arg = ctx.roots.muI * t;
  switch (id.part) {
    case KernelPart::Exp: return k.e * std::exp(ctx.roots.lambda1 * t);
    case KernelPart::Cos: return k.c * std::cos(arg) * er;
    case KernelPart::Sin: return k.s * std::sin(arg) * er;
    case KernelPart::Total:
      return k.e * std::exp(ctx.roots.lambda1 * t) +
             (k.c * std::cos(arg) + k.s * std::sin(arg)) * er;
  }
  return 0.0;
}

double eval_kernel_hat(const KernelId& id, double t, double rho, const MgtParams& p) {
  return eval_kernel_hat(id, t, KernelEvalContext::at(p, rho));
}

double eval_kernel_general(int ell, double t, const KernelEvalContext& ctx) {
  check_ell(ell);
  using C = std::complex<double>;
  const RootTriple& r = ctx.roots;
  C roots[3];
  roots[0] = r.lambda1;
  if (r.three_real) {
    roots[1] = r.muR - r.real_pair_split;
    roots[2] = r.muR + r.real_pair_split;
  } else {
    roots[1] = C(r.muR, r.muI);
    roots[2] = C(r.muR, -r.muI);
  }
  C sum = 0.0;
  for (int j = 0; j < 3; ++j) {
    const C a = roots[(j + 1) % 3], b = roots[(j + 2) % 3];
    const C den = (roots[j] - a) * (roots[j] - b);
    const double scale = 1.0 + std::norm(roots[j]);
    if (std::abs(den) < 1e-12 * scale) {
      std::ostringstream os;
      os << "confluent characteristic roots at rho=" << ctx.rho;
      throw DegenerateConfigurationError(os.str(), ctx.rho);
    }
    C coef;
    switch (ell) {
      case 0: coef = a * b / den; break;
      case 1: coef = -(a + b) / den; break;
      default: coef = 1.0 / den; break;
    }
    sum += coef * std::exp(roots[j] * t);
  }
  return sum.real();
}

double eval_profile_J(double t, double rho, double delta) {
  if (rho == 0.0) return t;
  return std::sin(rho * t) / rho * std::exp(-0.5 * delta * rho * rho * t);
}

double profile_weight(int ell, double tau) {
  check_ell(ell);
  return 2.0 - ell + (ell - 1.0) * tau;
}

void DataTriple::validate() const {
  if (!phi0.grid || !phi1.grid || !phi2.grid) throw DomainError("data triple without grid");
  if (phi0.grid != phi1.grid || phi0.grid != phi2.grid) {
    throw DomainError("data triple components must share one grid");
  }
}

const RadialFunction& DataTriple::operator[](int ell) const {
  check_ell(ell);
  return ell == 0 ? phi0 : (ell == 1 ? phi1 : phi2);
}

RadialFunction eval_solution_hat(const DataTriple& data, double t, const MgtParams& p,
                                 KernelFormula formula) {
  data.validate();
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("solution time must be >= 0");
  const auto& nodes = data.phi0.grid->nodes();
  std::vector<double> out(nodes.size());
  if (t == 0.0) return data.phi0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const KernelEvalContext ctx = KernelEvalContext::at(p, nodes[i]);
    double v = 0.0;
    if (!ctx.degenerate()) {
      for (int ell = 0; ell < 3; ++ell) {
        const double d = data[ell].values[i];
        if (d != 0.0) v += eval_kernel_hat({ell, KernelPart::Total}, t, ctx) * d;
      }
    } else if (formula == KernelFormula::AllowGeneral) {
      for (int ell = 0; ell < 3; ++ell) {
        const double d = data[ell].values[i];
        if (d != 0.0) v += eval_kernel_general(ell, t, ctx) * d;
      }
    } else {
      ctx.require_printed();
    }
    out[i] = v;
  }
  return RadialFunction(data.phi0.grid, std::move(out));
}

OdeTrajectory ode_oracle(const std::array<double, 3>& y0, double rho,
                         const std::vector<double>& times, const MgtParams& p,
                         const OracleOptions& opt) {
  namespace ode = boost::numeric::odeint;
  p.validate();
  for (double v : y0) {
    if (!std::isfinite(v)) throw DomainError("oracle initial values must be finite");
  }
  if (!(rho >= 0.0) || !std::isfinite(rho)) throw DomainError("oracle rho must be >= 0");
  if (times.empty()) throw UsageError("oracle needs at least one output time");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0) || (i > 0 && !(times[i] > times[i - 1]))) {
      throw UsageError("oracle times must be non-negative and strictly increasing");
    }
  }
  using State = std::array<double, 3>;
  const double x = rho * rho;
  const double a1 = (p.delta + p.tau) * x / p.tau, a0 = x / p.tau, a2 = 1.0 / p.tau;
  auto rhs = [&](const State& y, State& dy, double) {
    dy[0] = y[1];
    dy[1] = y[2];
    dy[2] = -(a2 * y[2] + a1 * y[1] + a0 * y[0]);
  };
  std::vector<double> grid;
  const bool prepend = times.front() > 0.0;
  if (prepend) grid.push_back(0.0);
  grid.insert(grid.end(), times.begin(), times.end());

  OdeTrajectory out;
  State y = y0;
  auto stepper = ode::make_dense_output(opt.abs_tol, opt.rel_tol, ode::runge_kutta_dopri5<State>());
  try {
    if (grid.size() == 1) {
      out.t.push_back(grid[0]);
      out.y.push_back(y);
      return out;
    }
    ode::integrate_times(stepper, rhs, y, grid.begin(), grid.end(), opt.initial_dt,
                         [&](const State& s, double t) {
                           out.t.push_back(t);
                           out.y.push_back(s);
                         });
  } catch (const std::exception& e) {
    throw IntegrationFailure(std::string("ODE oracle failed: ") + e.what());
  }
  if (prepend) {
    out.t.erase(out.t.begin());
    out.y.erase(out.y.begin());
  }
  for (const State& s : out.y) {
    for (double v : s) {
      if (!std::isfinite(v)) throw IntegrationFailure("ODE oracle produced non-finite values");
    }
  }
  return out;
}

double good_unknown_energy(const std::array<double, 3>& y, double rho, double tau) {
  const double u = tau * y[1] + y[0];
  const double ut = tau * y[2] + y[1];
  return rho * rho * u * u + ut * ut;
}

}  // namespace mgt
