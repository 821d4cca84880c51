#include "mgt/roots.hpp"

#include <algorithm>
#include <array>
#include <cfloat>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <vector>

#include "mgt/errors.hpp"
#include "mgt/fit.hpp"

namespace mgt {

void MgtParams::validate() const {
  if (!std::isfinite(tau) || !std::isfinite(delta)) {
    throw DomainError("tau and delta must be finite");
  }
  if (!(tau > 0.0)) {
    std::ostringstream os;
    os << "tau must be positive (got " << tau << ")";
    throw DomainError(os.str());
  }
  if (delta < 0.0) {
    std::ostringstream os;
    os << "delta must be non-negative (got " << delta << ")";
    throw DomainError(os.str());
  }
}

const char* to_string(Zone z) {
  return z == Zone::SmallFreq ? "small" : "large";
}

const char* to_string(RootComponent c) {
  switch (c) {
    case RootComponent::Lambda1: return "lambda1";
    case RootComponent::MuR: return "muR";
    case RootComponent::MuI: return "muI";
  }
  return "?";
}

double discriminant(const MgtParams& p, double rho) {
  const double x = rho * rho;
  const double s = p.delta + p.tau;
  const double B = s * s + 18.0 * p.tau * s - 27.0 * p.tau * p.tau;
  return x * (-4.0 + x * (B - 4.0 * p.tau * s * s * s * x));
}

std::optional<RealRootWindow> real_root_window(const MgtParams& p) {
  p.validate();
  const double s = p.delta + p.tau;
  const double B = s * s + 18.0 * p.tau * s - 27.0 * p.tau * p.tau;
  const double A = 4.0 * p.tau * s * s * s;
  const double disc = B * B - 16.0 * A;
  if (B <= 0.0 || disc <= 0.0) return std::nullopt;
  const double sq = std::sqrt(disc);
  // x_lo * x_hi = 4 / A; the product form avoids cancellation in x_lo.
  const double x_hi = (B + sq) / (2.0 * A);
  const double x_lo = 4.0 / (A * x_hi);
  return RealRootWindow{std::sqrt(x_lo), std::sqrt(x_hi)};
}

namespace {

template <class T>
struct Cubic {
  T a3, a2, a1, a0;

  Cubic(const MgtParams& p, T rho) {
    const T x = rho * rho;
    a3 = static_cast<T>(p.tau);
    a2 = 1;
    a1 = (static_cast<T>(p.delta) + static_cast<T>(p.tau)) * x;
    a0 = x;
  }

  template <class Z>
  Z value(Z z) const { return ((a3 * z + a2) * z + a1) * z + a0; }
  template <class Z>
  Z deriv(Z z) const { return (T(3) * a3 * z + T(2) * a2) * z + a1; }

  template <class Z>
  T scale(Z z) const {
    const T m = std::abs(z);
    return ((a3 * m + a2) * m + a1) * m + a0;
  }
};

template <class T>
T newton_real(const Cubic<T>& c, T x, int max_steps) {
  T best = x;
  T best_f = std::abs(c.value(x));
  for (int k = 0; k < max_steps && best_f > 0; ++k) {
    const T d = c.deriv(x);
    if (d == 0) break;
    const T nx = x - c.value(x) / d;
    const T nf = std::abs(c.value(nx));
    x = nx;
    if (nf < best_f) {
      best = nx;
      best_f = nf;
    } else {
      break;
    }
  }
  return best;
}

template <class T>
std::complex<T> newton_complex(const Cubic<T>& c, std::complex<T> z,
                               int max_steps) {
  std::complex<T> best = z;
  T best_f = std::abs(c.value(z));
  for (int k = 0; k < max_steps && best_f > 0; ++k) {
    const std::complex<T> d = c.deriv(z);
    if (d == std::complex<T>(0)) break;
    const std::complex<T> nz = z - c.value(z) / d;
    const T nf = std::abs(c.value(nz));
    z = nz;
    if (nf < best_f) {
      best = nz;
      best_f = nf;
    } else {
      break;
    }
  }
  return best;
}

// Three real roots of the monic cubic x^3 + b x^2 + c x + d, ascending.
std::array<double, 3> trig_roots(double b, double c, double d) {
  const double Q = (b * b - 3.0 * c) / 9.0;
  const double R = (2.0 * b * b * b - 9.0 * b * c + 27.0 * d) / 54.0;
  const double sq = std::sqrt(std::max(Q, 0.0));
  double arg = sq > 0 ? R / (sq * sq * sq) : 0.0;
  arg = std::clamp(arg, -1.0, 1.0);
  const double th = std::acos(arg);
  std::array<double, 3> r{
      -2.0 * sq * std::cos(th / 3.0) - b / 3.0,
      -2.0 * sq * std::cos((th + 2.0 * M_PI) / 3.0) - b / 3.0,
      -2.0 * sq * std::cos((th - 2.0 * M_PI) / 3.0) - b / 3.0};
  std::sort(r.begin(), r.end());
  return r;
}

// Unique real root of the monic cubic when the discriminant is negative.
double cardano_root(double b, double c, double d) {
  const double Q = (b * b - 3.0 * c) / 9.0;
  const double R = (2.0 * b * b * b - 9.0 * b * c + 27.0 * d) / 54.0;
  const double disc = R * R - Q * Q * Q;
  const double A =
      -std::copysign(std::cbrt(std::abs(R) + std::sqrt(std::max(disc, 0.0))), R);
  const double B = A != 0.0 ? Q / A : 0.0;
  return A + B - b / 3.0;
}

// Whether lambda1 is the smallest root inside the three-real window; decided
// at the window entry where the conjugate pair collapses into a double root.
bool lambda1_is_leftmost(const MgtParams& p, const RealRootWindow& w) {
  const double x = w.rho_lo * w.rho_lo;
  const double a = p.tau, b = 1.0, c = (p.delta + p.tau) * x, d = x;
  const double den = b * b - 3.0 * a * c;
  const double dbl = (9.0 * a * d - b * c) / (2.0 * den);
  const double simple = (4.0 * a * b * c - 9.0 * a * a * d - b * b * b) / (a * den);
  return simple < dbl;
}

void fill_pair_from_lambda1(const MgtParams& p, double rho, RootTriple& r) {
  const Cubic<double> cub(p, rho);
  r.muR = 0.5 * (-1.0 / p.tau - r.lambda1);
  const double prod = -rho * rho / (p.tau * r.lambda1);
  const double m2 = prod - r.muR * r.muR;
  r.muI = std::sqrt(std::max(m2, 0.0));
  if (r.muI > 0.0) {
    const std::complex<double> z =
        newton_complex(cub, std::complex<double>(r.muR, r.muI), 3);
    r.muR = z.real();
    r.muI = std::abs(z.imag());
  }
}

}  // namespace

RootTriple solve_characteristic(const MgtParams& p, double rho) {
  p.validate();
  if (!std::isfinite(rho) || rho < 0.0) {
    std::ostringstream os;
    os << "rho must be finite and non-negative (got " << rho << ")";
    throw DomainError(os.str());
  }
  RootTriple r;
  const double x = rho * rho;
  if (x == 0.0) {
    r.lambda1 = -1.0 / p.tau;
    r.near_degenerate = true;  // double root at 0
    return r;
  }
  r.discriminant = discriminant(p, rho);
  if (p.delta == 0.0) {
    // (tau l + 1)(l^2 + rho^2) factorization
    r.lambda1 = -1.0 / p.tau;
    r.muR = 0.0;
    r.muI = rho;
    return r;
  }

  const Cubic<double> cub(p, rho);
  const double b = 1.0 / p.tau;
  const double c = (p.delta + p.tau) * x / p.tau;
  const double d = x / p.tau;
  const auto window = real_root_window(p);
  const bool in_window = window && rho > window->rho_lo && rho < window->rho_hi &&
                         r.discriminant > 0.0;
  if (!in_window) {
    r.lambda1 = newton_real(cub, cardano_root(b, c, d), 6);
    fill_pair_from_lambda1(p, rho, r);
  } else {
    auto roots = trig_roots(b, c, d);
    for (double& v : roots) v = newton_real(cub, v, 6);
    std::sort(roots.begin(), roots.end());
    const bool left = lambda1_is_leftmost(p, *window);
    r.lambda1 = left ? roots[0] : roots[2];
    const double u = left ? roots[1] : roots[0];
    const double v = left ? roots[2] : roots[1];
    r.muR = 0.5 * (u + v);
    r.muI = 0.0;
    r.real_pair_split = 0.5 * (v - u);
    r.three_real = true;
  }

  const double scale = std::max({1.0, std::abs(r.lambda1), std::abs(r.muR),
                                 std::abs(r.muI)});
  const double gap_pair = r.three_real ? 2.0 * r.real_pair_split : 2.0 * r.muI;
  const double gap_l1 = std::hypot(r.lambda1 - r.muR,
                                   r.three_real ? r.real_pair_split : r.muI);
  r.near_degenerate = std::min(gap_pair, gap_l1) < 1e-7 * scale;
  return r;
}

double scaled_residual(const MgtParams& p, double rho, const RootTriple& r) {
  const Cubic<long double> cub(p, rho);
  auto rel = [&](std::complex<long double> z) -> double {
    const long double s = cub.scale(z);
    const long double v = std::abs(cub.value(z));
    if (s == 0) return static_cast<double>(v);
    return static_cast<double>(v / s);
  };
  double worst = rel({r.lambda1, 0.0L});
  if (r.three_real) {
    worst = std::max(worst, rel({static_cast<long double>(r.muR) + r.real_pair_split, 0}));
    worst = std::max(worst, rel({static_cast<long double>(r.muR) - r.real_pair_split, 0}));
  } else {
    worst = std::max(worst, rel({r.muR, r.muI}));
  }
  return worst;
}

namespace {

template <class T>
std::array<T, 3> small_terms(const MgtParams& p, T rho, int terms) {
  const T t = p.tau, d = p.delta, x = rho * rho;
  if (terms == 1) return {-1 / t, -d / 2 * x, rho};
  return {-1 / t + d * x,
          -d / 2 * x - t * d * (d - t) / 2 * x * x,
          rho + d * (4 * t - d) / 8 * x * rho};
}

template <class T>
std::array<T, 3> large_terms(const MgtParams& p, T rho, int terms) {
  const T t = p.tau, d = p.delta, s = t + d;
  const T s4 = s * s * s * s;
  const T w = std::sqrt(s / t);
  std::array<T, 3> r{-1 / s, -d / (2 * t * s), w * rho};
  if (terms >= 2) {
    const T inv2 = 1 / (rho * rho);
    r[0] -= d / s4 * inv2;
    r[1] += d / (2 * s4) * inv2;
    r[2] -= d * (d + 4 * t) / (8 * t * s * s * s) * w / rho;
  }
  return r;
}

void check_order(const ExpansionOrder& order, Zone want) {
  if (order.zone != want) {
    throw UsageError(want == Zone::SmallFreq
                         ? "small_freq_expansion needs a SmallFreq order"
                         : "large_freq_expansion needs a LargeFreq order");
  }
  if (order.terms < 1 || order.terms > 2) {
    throw UsageError("the printed expansions have 1 or 2 terms");
  }
}

}  // namespace

RootTriple small_freq_expansion(const MgtParams& p, double rho,
                                const ExpansionOrder& order) {
  p.validate();
  check_order(order, Zone::SmallFreq);
  if (!std::isfinite(rho) || rho < 0.0) throw DomainError("rho must be >= 0");
  const auto v = small_terms<double>(p, rho, order.terms);
  RootTriple r;
  r.lambda1 = v[0];
  r.muR = v[1];
  r.muI = v[2];
  r.discriminant = discriminant(p, rho);
  return r;
}

RootTriple large_freq_expansion(const MgtParams& p, double rho,
                                const ExpansionOrder& order) {
  p.validate();
  check_order(order, Zone::LargeFreq);
  if (!std::isfinite(rho) || !(rho > 0.0)) {
    throw DomainError("large-frequency expansion needs rho > 0");
  }
  const auto v = large_terms<double>(p, rho, order.terms);
  RootTriple r;
  r.lambda1 = v[0];
  r.muR = v[1];
  r.muI = v[2];
  r.discriminant = discriminant(p, rho);
  return r;
}

int printed_remainder_order(Zone zone, RootComponent component, int terms) {
  if (terms < 1 || terms > 2) throw UsageError("terms must be 1 or 2");
  if (zone == Zone::SmallFreq) {
    switch (component) {
      case RootComponent::Lambda1: return terms == 1 ? 2 : 4;
      case RootComponent::MuR: return terms == 1 ? 4 : 6;
      case RootComponent::MuI: return terms == 1 ? 3 : 5;
    }
  } else {
    switch (component) {
      case RootComponent::Lambda1: return terms == 1 ? -2 : -4;
      case RootComponent::MuR: return terms == 1 ? -2 : -4;
      case RootComponent::MuI: return terms == 1 ? -1 : -3;
    }
  }
  return 0;
}

namespace {

// Roots refined in extended precision, used as the exact reference.
struct LongRoots {
  long double lambda1, muR, muI;
};

LongRoots exact_roots_ld(const MgtParams& p, double rho) {
  const RootTriple r = solve_characteristic(p, rho);
  if (r.three_real) throw DomainError("expansion check inside a three-real-root window");
  const Cubic<long double> cub(p, rho);
  LongRoots out;
  out.lambda1 = newton_real<long double>(cub, r.lambda1, 8);
  if (p.delta == 0.0) {
    out.lambda1 = -1.0L / p.tau;
    out.muR = 0;
    out.muI = rho;
    return out;
  }
  const long double rr = rho;
  long double muR = 0.5L * (-1.0L / p.tau - out.lambda1);
  long double prod = -rr * rr / (static_cast<long double>(p.tau) * out.lambda1);
  long double muI = std::sqrt(std::max(prod - muR * muR, 0.0L));
  auto z = newton_complex<long double>(cub, {muR, muI}, 8);
  out.muR = z.real();
  out.muI = std::abs(z.imag());
  return out;
}

}  // namespace

OrderCheckResult expansion_order_check(const MgtParams& p, Zone zone,
                                       RootComponent component,
                                       const OrderCheckOptions& opt) {
  p.validate();
  if (opt.levels < 2) throw UsageError("expansion_order_check needs >= 2 levels");
  const double rho0 = opt.rho0 > 0.0 ? opt.rho0 : (zone == Zone::SmallFreq ? 0.1 : 10.0);
  const ExpansionOrder order{zone, opt.terms};
  check_order(order, zone);
  std::vector<double> xs, ys;
  OrderCheckResult res;
  bool all_zero = true;
  for (int k = 0; k < opt.levels; ++k) {
    const double rho = zone == Zone::SmallFreq ? std::ldexp(rho0, -k) : std::ldexp(rho0, k);
    const LongRoots ex = exact_roots_ld(p, rho);
    const auto ap = zone == Zone::SmallFreq
                        ? small_terms<long double>(p, rho, order.terms)
                        : large_terms<long double>(p, rho, order.terms);
    long double exact = 0, approx = 0;
    switch (component) {
      case RootComponent::Lambda1: exact = ex.lambda1; approx = ap[0]; break;
      case RootComponent::MuR: exact = ex.muR; approx = ap[1]; break;
      case RootComponent::MuI: exact = ex.muI; approx = ap[2]; break;
    }
    ++res.points_total;
    const long double resid = std::abs(exact - approx);
    if (resid != 0) all_zero = false;
    const long double floor =
        64.0L * std::numeric_limits<long double>::epsilon() * std::max(1.0L, std::abs(exact));
    if (resid > floor) {
      xs.push_back(rho);
      ys.push_back(static_cast<double>(resid));
    }
  }
  res.points_used = xs.size();
  if (all_zero) {
    res.exact = true;
    res.saturated = true;
    res.slope = std::numeric_limits<double>::quiet_NaN();
    return res;
  }
  if (xs.size() < 3) {
    res.saturated = true;
    res.slope = std::numeric_limits<double>::quiet_NaN();
    return res;
  }
  res.slope = fit_loglog(xs, ys).slope;
  return res;
}

}  // namespace mgt
