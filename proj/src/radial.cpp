#include "mgt/radial.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <limits>
#include <sstream>

#include "mgt/errors.hpp"
#include "mgt/parallel.hpp"
#include "mgt/report.hpp"

namespace mgt {

namespace {

constexpr double kSqrt2OverPi = 0.79788456080286535588;

struct GaussRule {
  std::vector<double> x;  // on [-1, 1], ascending
  std::vector<double> w;
};

const GaussRule& gauss16() {
  static const GaussRule rule = [] {
    using G = boost::math::quadrature::gauss<double, RadialGrid::kPanelOrder>;
    const auto& a = G::abscissa();
    const auto& w = G::weights();
    GaussRule r;
    for (std::size_t i = a.size(); i-- > 0;) {
      r.x.push_back(-a[i]);
      r.w.push_back(w[i]);
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
      r.x.push_back(a[i]);
      r.w.push_back(w[i]);
    }
    return r;
  }();
  return rule;
}

void check_dimension(int n) {
  if (n < 1) throw DomainError("dimension must be >= 1");
}

}  // namespace

std::shared_ptr<const RadialGrid> RadialGrid::from_edges(int dimension,
                                                         std::vector<double> edges) {
  check_dimension(dimension);
  if (edges.size() < 2) throw DomainError("grid needs at least one panel");
  if (!(edges.front() >= 0.0)) throw DomainError("grid edges must be non-negative");
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (!(edges[i] > edges[i - 1]) || !std::isfinite(edges[i])) {
      throw DomainError("grid edges must be finite and strictly increasing");
    }
  }
  auto g = std::shared_ptr<RadialGrid>(new RadialGrid());
  g->dim_ = dimension;
  g->edges_ = std::move(edges);
  const GaussRule& rule = gauss16();
  const std::size_t panels = g->edges_.size() - 1;
  g->nodes_.reserve(panels * rule.x.size());
  g->weights_.reserve(panels * rule.x.size());
  for (std::size_t p = 0; p < panels; ++p) {
    const double a = g->edges_[p], b = g->edges_[p + 1];
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (std::size_t k = 0; k < rule.x.size(); ++k) {
      const double r = mid + half * rule.x[k];
      g->nodes_.push_back(r);
      g->weights_.push_back(half * rule.w[k] * std::pow(r, dimension - 1));
    }
  }
  return g;
}

std::shared_ptr<const RadialGrid> RadialGrid::gauss_panels(int dimension,
                                                           std::vector<double> breakpoints,
                                                           double max_panel_width) {
  if (!(max_panel_width > 0.0)) throw DomainError("panel width must be positive");
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());
  if (breakpoints.size() < 2) throw DomainError("grid needs two distinct breakpoints");
  std::vector<double> edges{breakpoints.front()};
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    const double a = breakpoints[i - 1], b = breakpoints[i];
    const auto m = static_cast<std::size_t>(std::ceil((b - a) / max_panel_width - 1e-12));
    const std::size_t panels = std::max<std::size_t>(m, 1);
    for (std::size_t k = 1; k < panels; ++k) {
      edges.push_back(a + (b - a) * static_cast<double>(k) / static_cast<double>(panels));
    }
    edges.push_back(b);
  }
  return from_edges(dimension, std::move(edges));
}

RadialFunction::RadialFunction(GridPtr g, std::vector<double> v)
    : grid(std::move(g)), values(std::move(v)) {
  if (!grid) throw DomainError("radial function without a grid");
  if (values.size() != grid->size()) {
    std::ostringstream os;
    os << "radial function has " << values.size() << " values for " << grid->size()
       << " nodes";
    throw DomainError(os.str());
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      std::ostringstream os;
      os << "non-finite value at node " << grid->nodes()[i];
      throw DomainError(os.str());
    }
  }
}

double sphere_area(int n) {
  check_dimension(n);
  const double h = 0.5 * n;
  return 2.0 * std::pow(M_PI, h) / std::tgamma(h);
}

double modified_bessel(double mu, double s) {
  if (!(mu >= -0.5) || std::abs(2.0 * mu - std::round(2.0 * mu)) > 1e-12) {
    throw DomainError("modified_bessel: order must be an integer or half-integer >= -1/2");
  }
  if (!(s >= 0.0) || !std::isfinite(s)) throw DomainError("modified_bessel: s must be >= 0");
  if (mu == -0.5) return kSqrt2OverPi * std::cos(s);
  if (mu == 0.5) return s == 0.0 ? kSqrt2OverPi : kSqrt2OverPi * std::sin(s) / s;
  if (s < 1.0) {
    // sum_k (-1)^k (s/2)^{2k} / (2^mu k! Gamma(mu+k+1))
    const double q = 0.25 * s * s;
    double term = 1.0 / (std::pow(2.0, mu) * boost::math::tgamma(mu + 1.0));
    double sum = term;
    for (int k = 1; k < 30; ++k) {
      term *= -q / (k * (mu + k));
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  return boost::math::cyl_bessel_j(mu, s) / std::pow(s, mu);
}

namespace {

// Fast evaluators of the transform kernel for a fixed dimension.
struct KernelOdd1 {
  double operator()(double x) const { return kSqrt2OverPi * std::cos(x); }
};
struct KernelOdd3 {
  double operator()(double x) const {
    return x == 0.0 ? kSqrt2OverPi : kSqrt2OverPi * std::sin(x) / x;
  }
};
struct KernelEven2 {
  double operator()(double x) const { return boost::math::cyl_bessel_j(0, x); }
};
struct KernelEven4 {
  double operator()(double x) const {
    return x < 1e-4 ? 0.5 - x * x / 16.0 : boost::math::cyl_bessel_j(1, x) / x;
  }
};
struct KernelGeneral {
  double mu;
  double operator()(double x) const { return modified_bessel(mu, x); }
};

template <class K>
void transform_rows(const K& kern, const std::vector<double>& src_nodes,
                    const std::vector<double>& wf, const std::vector<double>& targets,
                    std::vector<double>& out, unsigned workers) {
  parallel_for(targets.size(), workers, [&](std::size_t b, std::size_t e) {
    for (std::size_t j = b; j < e; ++j) {
      const double r = targets[j];
      double acc = 0.0;
      for (std::size_t i = 0; i < src_nodes.size(); ++i) acc += wf[i] * kern(r * src_nodes[i]);
      out[j] = acc;
    }
  });
}

void transform_dispatch(int n, const std::vector<double>& src_nodes,
                        const std::vector<double>& wf, const std::vector<double>& targets,
                        std::vector<double>& out, unsigned workers) {
  switch (n) {
    case 1: transform_rows(KernelOdd1{}, src_nodes, wf, targets, out, workers); return;
    case 2: transform_rows(KernelEven2{}, src_nodes, wf, targets, out, workers); return;
    case 3: transform_rows(KernelOdd3{}, src_nodes, wf, targets, out, workers); return;
    case 4: transform_rows(KernelEven4{}, src_nodes, wf, targets, out, workers); return;
    default:
      transform_rows(KernelGeneral{0.5 * n - 1.0}, src_nodes, wf, targets, out, workers);
  }
}

void check_resolution(const RadialGrid& g, double max_target, double min_ppp) {
  if (max_target <= 0.0) return;
  const double period = 2.0 * M_PI / max_target;
  const auto& e = g.panel_edges();
  double widest = 0.0;
  for (std::size_t p = 1; p < e.size(); ++p) widest = std::max(widest, e[p] - e[p - 1]);
  const double ppp = RadialGrid::kPanelOrder * period / widest;
  if (ppp < min_ppp) {
    const double need = min_ppp * max_target / (2.0 * M_PI);
    std::ostringstream os;
    os << "radial transform under-resolved: " << ppp << " points per period, need "
       << min_ppp << " (node density >= " << need << " per unit length)";
    throw ResolutionError(os.str(), need);
  }
}

}  // namespace

std::vector<double> radial_fourier_at(const RadialFunction& f,
                                      const std::vector<double>& targets, Direction,
                                      const TransformOptions& opt) {
  const RadialGrid& g = *f.grid;
  double max_target = 0.0;
  for (double r : targets) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("transform targets must be >= 0");
    max_target = std::max(max_target, r);
  }
  check_resolution(g, max_target, opt.min_points_per_period);
  std::vector<double> wf(g.size());
  for (std::size_t i = 0; i < wf.size(); ++i) wf[i] = g.weights()[i] * f.values[i];
  std::vector<double> out(targets.size());
  transform_dispatch(g.dimension(), g.nodes(), wf, targets, out, opt.workers);
  return out;
}

RadialFunction radial_fourier(const RadialFunction& f, const GridPtr& target, Direction dir,
                              const TransformOptions& opt) {
  if (target->dimension() != f.dimension()) {
    throw DomainError("radial_fourier: source and target dimensions differ");
  }
  return RadialFunction(target, radial_fourier_at(f, target->nodes(), dir, opt));
}

double lq_norm(const RadialFunction& f, double q) {
  if (std::isinf(q)) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::abs(v));
    return m;
  }
  if (!(q >= 1.0)) throw DomainError("lq_norm: q must be >= 1");
  const auto& w = f.grid->weights();
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double a = std::abs(f.values[i]);
    if (a != 0.0) acc += w[i] * (q == 1.0 ? a : std::pow(a, q));
  }
  return std::pow(sphere_area(f.dimension()) * acc, 1.0 / q);
}

namespace {

double smoothstep5(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return x * x * x * (x * (6.0 * x - 15.0) + 10.0);
}

}  // namespace

void CutoffSpec::validate() const {
  if (!(eps0 > 0.0) || !(N0 > 0.0) || !std::isfinite(eps0) || !std::isfinite(N0)) {
    throw DomainError("cutoff: eps0 and N0 must be positive");
  }
  if (!(2.0 * eps0 < N0)) {
    std::ostringstream os;
    os << "cutoff: need 2*eps0 < N0 (eps0=" << eps0 << ", N0=" << N0 << ")";
    throw DomainError(os.str());
  }
}

double CutoffSpec::chi1(double rho) const { return 1.0 - smoothstep5((rho - eps0) / eps0); }
double CutoffSpec::chi3(double rho) const { return smoothstep5((rho - N0) / N0); }
double CutoffSpec::chi2(double rho) const { return 1.0 - chi1(rho) - chi3(rho); }

double CutoffSpec::chi(int which, double rho) const {
  switch (which) {
    case 1: return chi1(rho);
    case 2: return chi2(rho);
    case 3: return chi3(rho);
    default: throw UsageError("cutoff index must be 1, 2 or 3");
  }
}

CutoffSpec CutoffSpec::defaults_for(const MgtParams& p) {
  p.validate();
  const double s = p.delta + p.tau;
  CutoffSpec c;
  c.eps0 = 0.1 * std::min(1.0, 1.0 / s);
  c.N0 = 10.0 * std::max(1.0, s);
  return c;
}

CutoffValidation validate_by_discriminant(const CutoffSpec& spec, const MgtParams& p,
                                          int samples) {
  spec.validate();
  p.validate();
  CutoffValidation v;
  auto scan = [&](double a, double b) {
    for (int k = 0; k <= samples && v.ok; ++k) {
      const double rho = a + (b - a) * k / samples;
      if (rho <= 0.0) continue;
      if (!(discriminant(p, rho) < 0.0)) {
        v.ok = false;
        v.first_bad_rho = rho;
        std::ostringstream os;
        os << "discriminant is not negative at rho=" << rho;
        v.message = os.str();
      }
    }
  };
  scan(0.0, 2.0 * spec.eps0);
  scan(spec.N0, 8.0 * spec.N0);
  return v;
}

RadialFunction cutoff_apply(const RadialFunction& f, const CutoffSpec& spec, int which) {
  spec.validate();
  std::vector<double> v(f.values.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = f.values[i] * spec.chi(which, f.grid->nodes()[i]);
  }
  return RadialFunction(f.grid, std::move(v));
}

RadialFunction homogeneous_derivative(const RadialFunction& f, double s) {
  if (!(s >= 0.0) || !std::isfinite(s)) {
    throw OutOfScopeError("homogeneous_derivative: negative orders are out of scope");
  }
  if (s == 0.0) return f;
  std::vector<double> v(f.values.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = f.values[i] * std::pow(f.grid->nodes()[i], s);
  }
  return RadialFunction(f.grid, std::move(v));
}

void write_radial_csv(const std::string& path, const RadialFunction& f) {
  std::ostringstream os;
  os << std::setprecision(17) << "node,value\n";
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    os << f.grid->nodes()[i] << ',' << f.values[i] << '\n';
  }
  nlohmann::json side;
  side["dimension"] = f.dimension();
  side["extent"] = f.grid->extent();
  side["panel_order"] = RadialGrid::kPanelOrder;
  side["panel_edges"] = f.grid->panel_edges();
  write_file_atomic(path, os.str());
  write_file_atomic(path + ".json", side.dump(2) + "\n");
}

RadialFunction read_radial_csv(const std::string& path) {
  std::ifstream side(path + ".json");
  if (!side) throw Error("missing sidecar " + path + ".json");
  const nlohmann::json j = nlohmann::json::parse(side);
  if (j.at("panel_order").get<int>() != RadialGrid::kPanelOrder) {
    throw Error("sidecar panel order does not match this build");
  }
  GridPtr g = RadialGrid::from_edges(j.at("dimension").get<int>(),
                                     j.at("panel_edges").get<std::vector<double>>());
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::string line;
  std::getline(in, line);
  std::vector<double> values;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw Error("malformed CSV row in " + path);
    const double node = std::strtod(line.c_str(), nullptr);
    if (row >= g->size() || std::abs(node - g->nodes()[row]) > 1e-12 * (1.0 + node)) {
      throw Error("CSV nodes do not match the sidecar grid in " + path);
    }
    values.push_back(std::strtod(line.c_str() + comma + 1, nullptr));
    ++row;
  }
  return RadialFunction(g, std::move(values));
}

}  // namespace mgt
