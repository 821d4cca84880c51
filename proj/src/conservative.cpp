#include "mgt/conservative.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "mgt/errors.hpp"

namespace mgt {

namespace {

__int128 abs128(__int128 v) { return v < 0 ? -v : v; }

__int128 gcd128(__int128 a, __int128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    const __int128 r = a % b;
    a = b;
    b = r;
  }
  return a;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) { *this = make(num, den); }

Rational Rational::make(__int128 num, __int128 den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const __int128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  constexpr __int128 lim = std::numeric_limits<std::int64_t>::max();
  if (abs128(num) > lim || den > lim) throw DomainError("rational arithmetic overflow");
  Rational r;
  r.num_ = static_cast<std::int64_t>(num);
  r.den_ = static_cast<std::int64_t>(den);
  return r;
}

Rational Rational::from_double(double x, std::int64_t max_den) {
  if (!std::isfinite(x)) throw DomainError("cannot convert a non-finite value to a rational");
  if (max_den < 1) throw DomainError("maximum denominator must be >= 1");
  __int128 h1 = 1, h2 = 0, k1 = 0, k2 = 1;
  long double frac = x;
  Rational best = make(static_cast<__int128>(std::floor(x)), 1);
  for (int it = 0; it < 64; ++it) {
    const long double a = std::floor(frac);
    if (std::abs(a) > 9.0e18L) break;
    const __int128 ai = static_cast<__int128>(a);
    const __int128 h = ai * h1 + h2;
    const __int128 k = ai * k1 + k2;
    if (k > max_den) break;
    best = make(h, k);
    h2 = h1;
    h1 = h;
    k2 = k1;
    k1 = k;
    const long double rem = frac - a;
    if (rem < 1e-12L) break;
    frac = 1.0L / rem;
  }
  return best;
}

std::string Rational::str() const {
  std::ostringstream os;
  os << num_;
  if (den_ != 1) os << "/" << den_;
  return os.str();
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational::make(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                        static_cast<__int128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  return Rational::make(static_cast<__int128>(a.num_) * b.den_ - static_cast<__int128>(b.num_) * a.den_,
                        static_cast<__int128>(a.den_) * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  return Rational::make(static_cast<__int128>(a.num_) * b.num_,
                        static_cast<__int128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw DomainError("rational division by zero");
  return Rational::make(static_cast<__int128>(a.num_) * b.den_,
                        static_cast<__int128>(a.den_) * b.num_);
}

bool operator==(const Rational& a, const Rational& b) {
  return a.num_ == b.num_ && a.den_ == b.den_;
}

bool operator<(const Rational& a, const Rational& b) {
  return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
}

void ExponentPair::validate() const {
  if (n < 1) throw DomainError("dimension n must be >= 1");
  if (!(inv_p >= 0.0 && inv_p <= 1.0)) throw DomainError("1/p must lie in [0, 1]");
  if (!(inv_q >= 0.0 && inv_q <= 1.0)) throw DomainError("1/q must lie in [0, 1]");
}

const char* to_string(Region r) { return r == Region::Triangle ? "triangle" : "trapezoid"; }

RationalPoint vertex_exact(int n, const std::string& label) {
  if (n < 1) throw DomainError("dimension n must be >= 1");
  const Rational half(1, 2);
  if (label == "P1") return {half + Rational(1, n + 1), half - Rational(1, n + 1)};
  if (label == "P2") {
    if (n <= 2) return {Rational(0), Rational(0)};
    const Rational v = half - Rational(1, n - 1);
    return {v, v};
  }
  if (label == "P3") {
    if (n <= 2) return {Rational(1), Rational(1)};
    const Rational v = half + Rational(1, n - 1);
    return {v, v};
  }
  if (label == "P4") return {half + Rational(1, n), half};
  if (label == "P5") return {half, half - Rational(1, n)};
  throw UsageError("unknown vertex label '" + label + "'");
}

ExponentPair ExponentPair::vertex(int n, const std::string& label) {
  const RationalPoint v = vertex_exact(n, label);
  return {v.x.to_double(), v.y.to_double(), n};
}

std::vector<std::string> region_vertex_labels(Region r) {
  if (r == Region::Triangle) return {"P1", "P2", "P3"};
  return {"P2", "P5", "P4", "P3"};
}

namespace {

RationalPoint snap(const ExponentPair& p) {
  return {Rational::from_double(p.inv_p), Rational::from_double(p.inv_q)};
}

bool inside_closed(const std::vector<RationalPoint>& poly, const RationalPoint& p) {
  int pos = 0, neg = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const RationalPoint& a = poly[i];
    const RationalPoint& b = poly[(i + 1) % poly.size()];
    const Rational cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
    if (cross.sign() > 0) ++pos;
    if (cross.sign() < 0) ++neg;
  }
  return pos == 0 || neg == 0;
}

}  // namespace

bool admissible_region(const ExponentPair& point, Region region) {
  point.validate();
  std::vector<RationalPoint> poly;
  for (const auto& l : region_vertex_labels(region)) poly.push_back(vertex_exact(point.n, l));
  return inside_closed(poly, snap(point));
}

Rational conservative_exponent_exact(const ExponentPair& point) {
  if (!admissible_region(point, Region::Triangle)) {
    std::ostringstream os;
    os << "point (1/p, 1/q) = (" << point.inv_p << ", " << point.inv_q
       << ") lies outside the admissible triangle P1 P2 P3 for n=" << point.n;
    throw DomainError(os.str());
  }
  const RationalPoint r = snap(point);
  return Rational(1) - Rational(point.n) * (r.x - r.y);
}

double conservative_predicted_exponent(const ExponentPair& point) {
  return conservative_exponent_exact(point).to_double();
}

void WaveState::validate() const {
  if (!u_hat.grid || u_hat.grid != ut_hat.grid) {
    throw DomainError("wave state components must share one grid");
  }
  if (!(t >= 0.0)) throw DomainError("wave state time must be >= 0");
}

RadialFunction good_unknown(const RadialFunction& phi_t_hat, const RadialFunction& phi_hat,
                            double tau) {
  if (!(tau > 0.0)) throw DomainError("tau must be > 0");
  if (!phi_hat.grid || phi_hat.grid != phi_t_hat.grid) {
    throw DomainError("good unknown: grid mismatch between phi and phi_t");
  }
  std::vector<double> v(phi_hat.values.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = tau * phi_t_hat.values[i] + phi_hat.values[i];
  return RadialFunction(phi_hat.grid, std::move(v));
}

WaveState good_unknown_initial(const DataTriple& data, double tau) {
  data.validate();
  return {good_unknown(data.phi1, data.phi0, tau), good_unknown(data.phi2, data.phi1, tau), 0.0};
}

WaveState wave_evolve(const WaveState& s0, double t) {
  s0.validate();
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("wave evolution time must be >= 0");
  if (t == 0.0) return s0;
  const auto& nodes = s0.u_hat.grid->nodes();
  std::vector<double> u(nodes.size()), ut(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double rho = nodes[i];
    const double c = std::cos(rho * t), sn = std::sin(rho * t);
    const double sinc = rho == 0.0 ? t : sn / rho;
    const double a = s0.u_hat.values[i], b = s0.ut_hat.values[i];
    u[i] = c * a + sinc * b;
    ut[i] = -rho * sn * a + c * b;
  }
  return {RadialFunction(s0.u_hat.grid, std::move(u)), RadialFunction(s0.u_hat.grid, std::move(ut)),
          s0.t + t};
}

RadialFunction duhamel_recover(const WaveTrajectory& u_traj, const RadialFunction& phi0_hat,
                               double tau, double t, const DuhamelOptions& opt) {
  if (!(tau > 0.0)) throw DomainError("tau must be > 0");
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("Duhamel time must be >= 0");
  if (!phi0_hat.grid) throw DomainError("phi0 without grid");
  if (t == 0.0) return phi0_hat;
  if (!u_traj) throw UsageError("Duhamel recovery needs a trajectory");
  const GridPtr& g = phi0_hat.grid;
  const std::size_t m = g->size();
  const double rho_max = std::max(g->extent(), 1e-12);
  const double h = opt.panel_width > 0.0 ? opt.panel_width
                                         : std::min(tau / 4.0, 2.0 * M_PI / rho_max);
  // Contributions older than the window carry weight below 1e-17 / (1 + t).
  const double window = tau * std::log(1e17 * (1.0 + t));
  const double a = std::max(0.0, t - window);
  const std::size_t panels = static_cast<std::size_t>(std::ceil((t - a) / h));
  const double w = (t - a) / static_cast<double>(panels);

  using G16 = boost::math::quadrature::gauss<double, 16>;
  using G8 = boost::math::quadrature::gauss<double, 8>;
  std::vector<double> s16(m, 0.0), s8(m, 0.0);
  auto accumulate = [&](std::vector<double>& acc, double eta, double weight) {
    const RadialFunction u = u_traj(eta);
    if (u.grid != g && (u.values.size() != m)) {
      throw DomainError("Duhamel trajectory grid differs from phi0 grid");
    }
    const double f = weight * std::exp(-(t - eta) / tau);
    for (std::size_t i = 0; i < m; ++i) acc[i] += f * u.values[i];
  };
  auto rule = [&](auto tag, std::vector<double>& acc, double x0, double x1) {
    using Rule = decltype(tag);
    const auto& ab = Rule::abscissa();
    const auto& wt = Rule::weights();
    const double c = 0.5 * (x0 + x1), r = 0.5 * (x1 - x0);
    for (std::size_t k = 0; k < ab.size(); ++k) {
      if (ab[k] == 0.0) {
        accumulate(acc, c, r * wt[k]);
      } else {
        accumulate(acc, c - r * ab[k], r * wt[k]);
        accumulate(acc, c + r * ab[k], r * wt[k]);
      }
    }
  };
  for (std::size_t j = 0; j < panels; ++j) {
    const double x0 = a + j * w, x1 = (j + 1 == panels) ? t : a + (j + 1) * w;
    rule(G16{}, s16, x0, x1);
    rule(G8{}, s8, x0, x1);
  }
  const double decay = std::exp(-t / tau);
  std::vector<double> out(m);
  double scale = 0.0, diff = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    out[i] = s16[i] / tau + decay * phi0_hat.values[i];
    scale = std::max(scale, std::abs(out[i]));
    diff = std::max(diff, std::abs(s16[i] - s8[i]) / tau);
  }
  if (diff > opt.tolerance * std::max(scale, 1e-300)) {
    std::ostringstream os;
    os << "Duhamel quadrature: 8/16-point panel rules differ by " << diff << " (scale " << scale
       << ") with " << panels << " panels";
    throw ResolutionError(os.str(), 2.0 * panels);
  }
  return RadialFunction(g, std::move(out));
}

double I_integral(double tau, double a, double t) {
  if (!(tau > 0.0)) throw DomainError("tau must be > 0");
  if (!(a > -1.0)) {
    throw DomainError("exponent must exceed -1 (the integral diverges at eta = 0)");
  }
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("t must be >= 0");
  if (t == 0.0) return 0.0;
  auto f = [=](double eta) { return std::exp(-(t - eta) / tau) * std::pow(eta, a); };
  boost::math::quadrature::tanh_sinh<double> ts;
  const double first = std::min(t, 1.0);
  double sum = ts.integrate(f, 0.0, first);
  if (t > 1.0) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    const double split = std::max(1.0, t - 40.0 * tau);
    if (split > 1.0) sum += GK::integrate(f, 1.0, split, 15, 1e-13);
    sum += GK::integrate(f, split, t, 15, 1e-13);
  }
  return sum;
}

IBoundResult check_I_bound_exponent(double tau, double a, const std::vector<double>& t_grid) {
  if (t_grid.empty()) throw UsageError("empty time grid");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] >= 1.0 && t_grid[i] <= 1e3)) {
      throw UsageError("I(t) grid must lie in [1, 1000]");
    }
    if (i > 0 && !(t_grid[i] > t_grid[i - 1])) throw UsageError("times must be increasing");
  }
  IBoundResult r;
  r.exponent = a;
  r.times = t_grid;
  for (double t : t_grid) {
    const double ratio = I_integral(tau, a, t) / std::pow(t, a);
    r.ratios.push_back(ratio);
    r.sup_ratio = std::max(r.sup_ratio, ratio);
  }
  r.sup_ratio_refined = r.sup_ratio;
  for (std::size_t i = 0; i + 1 < t_grid.size(); ++i) {
    const double t = std::sqrt(t_grid[i] * t_grid[i + 1]);
    r.sup_ratio_refined = std::max(r.sup_ratio_refined, I_integral(tau, a, t) / std::pow(t, a));
  }
  r.bounded = std::isfinite(r.sup_ratio_refined) && r.sup_ratio > 0.0 &&
              std::abs(r.sup_ratio_refined - r.sup_ratio) < 0.01 * r.sup_ratio;
  return r;
}

IBoundResult check_I_bound(double tau, const ExponentPair& point,
                           const std::vector<double>& t_grid) {
  return check_I_bound_exponent(tau, conservative_predicted_exponent(point), t_grid);
}

RateReport run_conservative_experiment(double tau, const FrequencyData& data,
                                       const ExponentPair& point, double s,
                                       const std::vector<double>& times, const LabOptions& opt) {
  if (!(tau > 0.0)) throw DomainError("tau must be > 0");
  data.validate();
  if (!(s >= 0.0)) throw DomainError("s must be >= 0");
  if (times.empty()) throw UsageError("no times given");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0)) throw UsageError("the estimate holds for t > 0; t = 0 is excluded");
    if (i > 0 && !(times[i] > times[i - 1])) throw UsageError("times must be increasing");
  }
  RateReport r;
  r.experiment = "conservative";
  r.predicted_slope = conservative_predicted_exponent(point);
  r.slope_tolerance = opt.slope_tolerance;
  r.mode = opt.mode;
  const double q = point.inv_q > 0.0 ? 1.0 / point.inv_q : std::numeric_limits<double>::infinity();

  for (double t : times) {
    SpectralProfile sp;
    sp.breakpoints = {0.0};
    for (double b : data.breakpoints) {
      if (b > 0.0 && b < data.support) sp.breakpoints.push_back(b);
    }
    sp.breakpoints.push_back(data.support);
    std::sort(sp.breakpoints.begin(), sp.breakpoints.end());
    sp.phase_rate = t;
    sp.physical_extent = t + 40.0;
    sp.sample = [&, t](const GridPtr& g) {
      DataTriple d{RadialFunction::sample(g, data.phi[0]), RadialFunction::sample(g, data.phi[1]),
                   RadialFunction::sample(g, data.phi[2])};
      const WaveState w0 = good_unknown_initial(d, tau);
      const WaveTrajectory traj = [&w0](double eta) { return wave_evolve(w0, eta).u_hat; };
      RadialFunction phi = duhamel_recover(traj, d.phi0, tau, t);
      return homogeneous_derivative(phi, s);
    };
    const PhysicalNorms pn = physical_norms(point.n, sp, {q}, opt.engine);
    r.times.push_back(t);
    r.norms.push_back(pn.values[0]);
    for (const auto& w : pn.warnings) r.warnings.push_back("t=" + std::to_string(t) + ": " + w);
    r.metadata["extents"].push_back(pn.extent);
  }
  const Rational e = conservative_exponent_exact(point);
  r.metadata["tau"] = tau;
  r.metadata["n"] = point.n;
  r.metadata["inv_p"] = point.inv_p;
  r.metadata["inv_q"] = point.inv_q;
  r.metadata["s"] = s;
  r.metadata["exponent_exact"] = e.str();
  r.metadata["region"] = "triangle";
  std::vector<std::string> hits;
  for (const auto& l : region_vertex_labels(Region::Trapezoid)) {
    const RationalPoint v = vertex_exact(point.n, l);
    const RationalPoint p{Rational::from_double(point.inv_p), Rational::from_double(point.inv_q)};
    if (v.x == p.x && v.y == p.y) hits.push_back(l);
  }
  {
    const RationalPoint v = vertex_exact(point.n, "P1");
    if (Rational::from_double(point.inv_p) == v.x && Rational::from_double(point.inv_q) == v.y) {
      hits.push_back("P1");
    }
  }
  r.metadata["vertex_labels"] = hits;
  r.metadata["in_trapezoid"] = admissible_region(point, Region::Trapezoid);
  finalize_rate_report(r);
  return r;
}

}  // namespace mgt
