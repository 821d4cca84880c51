#include "mgt/dissipative.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mgt/errors.hpp"

namespace mgt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int half_floor(int n) { return n / 2; }

void check_dimension(int n, int min_n) {
  if (n < min_n) {
    throw DomainError("dimension n must be >= " + std::to_string(min_n));
  }
}

void check_s(double s) {
  if (!(s >= 0.0) || !std::isfinite(s)) throw DomainError("s must be a finite real >= 0");
}

}  // namespace

void ExponentQuery::validate() const {
  if (n < 2) throw DomainError("hypothesis n >= 2 violated");
  if (!(p >= 1.0)) throw DomainError("hypothesis 1 <= p violated");
  if (!(p <= q)) throw DomainError("hypothesis p <= q violated");
  if (!std::isfinite(q)) throw DomainError("hypothesis q < infinity violated");
  if (q == 1.0) throw DomainError("hypothesis q != 1 violated");
  check_s(s);
}

double kernel_l1_exponent(int ell, double s, int n, bool subtract) {
  check_s(s);
  check_dimension(n, 1);
  const double f = half_floor(n);
  if (ell == 0) {
    if (subtract) throw UsageError("no profile is subtracted from the ell=0 kernel");
    if (s == 0.0) return (1.0 + f) / 2.0;
    if (s <= 1.0) return (2.0 + f) / 2.0 - s / 2.0;
    return n / 4.0 - s / 2.0;
  }
  if (ell != 1 && ell != 2) throw DomainError("kernel index ell must be 0, 1 or 2");
  if (subtract) {
    if (ell == 1) {
      if (s == 0.0) return (1.0 + f) / 2.0;
      return n / 4.0 - 0.5 - s / 2.0;
    }
    if (s == 0.0) return (1.0 + f) / 2.0;
    if (s <= 1.0) return (2.0 + f) / 2.0 - s / 2.0;
    return n / 4.0 - s / 2.0;
  }
  if (ell == 1) {
    if (s == 1.0 || s > 2.0) return n / 4.0 + 0.5 - s / 2.0;
    return (3.0 + f) / 2.0 - s / 2.0;
  }
  if (s == 1.0) return (1.0 + f) / 2.0;
  if (s > 2.0) return n / 4.0 + 0.5 - s / 2.0;
  return (3.0 + f) / 2.0 - s / 2.0;
}

double kernel_linf_exponent(int ell, double s, int n, bool subtract) {
  check_s(s);
  check_dimension(n, 2);
  if (ell < 0 || ell > 2) throw DomainError("kernel index ell must be 0, 1 or 2");
  if (subtract) {
    if (ell == 0) throw UsageError("no profile is subtracted from the ell=0 kernel");
    return -n / 2.0 - s / 2.0;
  }
  if (ell == 0) return -n / 2.0 - s / 2.0;
  return -n / 2.0 + 0.5 - s / 2.0;
}

double total_l1_exponent(double s, int n, bool subtract) {
  return kernel_l1_exponent(2, s, n, subtract);
}

double total_linf_exponent(double s, int n, bool subtract) {
  check_s(s);
  check_dimension(n, 2);
  return subtract ? -n / 2.0 - s / 2.0 : -n / 2.0 + 0.5 - s / 2.0;
}

double total_lr_exponent(double s, int n, double inv_r, bool subtract) {
  check_s(s);
  check_dimension(n, 2);
  if (!(inv_r >= 0.0 && inv_r <= 1.0)) throw DomainError("1/r must lie in [0, 1]");
  const double f = half_floor(n);
  const double nh = n / 2.0;
  if (subtract) {
    if (s == 0.0) return (0.5 + nh + f / 2.0) * inv_r - nh;
    if (s <= 1.0) return (1.0 + nh + f / 2.0) * inv_r - nh - s / 2.0;
    return 0.75 * n * inv_r - nh - s / 2.0;
  }
  if (s == 1.0) return (0.5 + nh + f / 2.0) * inv_r - nh;
  if (s > 2.0) return 0.75 * n * inv_r - nh + 0.5 - s / 2.0;
  return (1.0 + nh + f / 2.0) * inv_r - nh + 0.5 - s / 2.0;
}

double predicted_exponent(const ExponentQuery& q) {
  q.validate();
  // Young's inequality with 1 + 1/q = 1/r + 1/p.
  const double gap = 1.0 / q.p - 1.0 / q.q;
  return total_lr_exponent(q.s, q.n, 1.0 - gap, q.refined);
}

std::string predicted_branch(const ExponentQuery& q) {
  q.validate();
  if (q.refined) {
    if (q.s == 0.0) return "refined s=0";
    if (q.s <= 1.0) return "refined s in (0,1]";
    return "refined s>1";
  }
  if (q.s == 1.0) return "s=1";
  if (q.s > 2.0) return "s>2";
  return "s in [0,1)u(1,2]";
}

std::vector<double> dyadic_times(int first_level, int last_level) {
  if (last_level < first_level) throw UsageError("empty dyadic time range");
  std::vector<double> t;
  for (int k = first_level; k <= last_level; ++k) t.push_back(std::ldexp(1.0, k));
  return t;
}

const char* to_string(Oscillation o) {
  switch (o) {
    case Oscillation::SincKernel: return "sinc";
    case Oscillation::SinCos: return "sincos";
    case Oscillation::ExpKernel: return "exp";
  }
  return "?";
}

void LemmaQuery::validate() const {
  check_dimension(n, 1);
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw DomainError("beta must be >= 0");
  if (!(c1 > 0.0) || !std::isfinite(c1)) throw DomainError("c1 must be > 0");
  if (!std::isfinite(c2)) throw DomainError("c2 must be finite");
  if (oscillation != Oscillation::ExpKernel && c2 == 0.0) {
    throw DomainError("c2 must be nonzero for oscillating kernels");
  }
}

double lemma_predicted_exponent(const LemmaQuery& q) {
  q.validate();
  const double f = half_floor(q.n);
  switch (q.oscillation) {
    case Oscillation::SincKernel: return (2.0 + f) / 2.0 + 0.5 - q.beta;
    case Oscillation::SinCos:
      if (q.beta == 0.0 || q.beta > 0.5) return q.n / 4.0 - q.beta;
      return (2.0 + f) / 2.0 - q.beta;
    case Oscillation::ExpKernel: break;
  }
  throw UsageError("the exponential kernel has no power-law exponent");
}

double NormSpec::exponent() const {
  switch (kind) {
    case NormKind::L1: return 1.0;
    case NormKind::Linf: return kInf;
    case NormKind::Lr:
      if (!(r >= 1.0)) throw DomainError("L^r norm needs r >= 1");
      return r;
  }
  return 1.0;
}

namespace {

// A frequency-side multiplier at one fixed time.
struct Profile {
  std::function<double(double)> value;
  // Nonnegative majorant of |value|, used to find the numerical support.
  std::function<double(double)> envelope;
  double rho_hi = 0.0;
  std::vector<double> features;
  double speed = 1.0;
  double diffusion = 0.0;
  double feature_scale = 1.0;
};

double numerical_support(const std::function<double(double)>& env, double lo, double hi) {
  const int m = 2000;
  std::vector<double> v(m + 1, 0.0);
  double peak = 0.0;
  for (int i = 1; i <= m; ++i) {
    v[i] = env(lo + (hi - lo) * i / m);
    if (std::isfinite(v[i])) peak = std::max(peak, v[i]);
  }
  if (peak == 0.0) return hi;
  for (int i = m; i >= 1; --i) {
    if (!(v[i] <= 1e-17 * peak)) return std::min(hi, lo + (hi - lo) * (i + 1) / m);
  }
  return hi;
}

PhysicalNorms physical_norms_of(int n, double t, const Profile& pr, const std::vector<double>& qs,
                                const EngineOptions& eng) {
  const double lo = 0.0;
  const double hi = numerical_support(pr.envelope, lo, pr.rho_hi);
  std::vector<double> bp{lo};
  for (int k = 12; k >= 1; --k) bp.push_back(std::ldexp(hi, -k));
  for (double f : pr.features) {
    if (f > 0.0 && f < hi) bp.push_back(f);
  }
  bp.push_back(hi);
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());

  SpectralProfile sp;
  sp.breakpoints = bp;
  sp.phase_rate = pr.speed * t;
  sp.physical_extent = pr.speed * t + 10.0 * std::sqrt(2.0 * pr.diffusion * t) +
                       40.0 / pr.feature_scale;
  auto value = pr.value;
  sp.sample = [value](const GridPtr& g) {
    std::vector<double> v(g->size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = value(g->nodes()[i]);
    return RadialFunction(g, std::move(v));
  };
  return physical_norms(n, sp, qs, eng);
}

double kernel_value(int ell, double t, const KernelEvalContext& ctx) {
  if (ctx.degenerate()) return eval_kernel_general(ell, t, ctx);
  return eval_kernel_hat({ell, KernelPart::Total}, t, ctx);
}

double kernel_envelope(int ell, double t, const KernelEvalContext& ctx) {
  if (ctx.degenerate()) return std::abs(eval_kernel_general(ell, t, ctx)) + 1e-300;
  const KernelCoefficients k = kernel_coefficients(ell, ctx);
  return std::abs(k.e) * std::exp(ctx.roots.lambda1 * t) +
         (std::abs(k.c) + std::abs(k.s)) * std::exp(ctx.roots.muR * t);
}

double j_envelope(double t, double rho, double delta) {
  const double amp = rho > 0.0 ? std::min(t, 1.0 / rho) : t;
  return amp * std::exp(-0.5 * delta * rho * rho * t);
}

double max_phase_speed(const MgtParams& p, double lo, double hi) {
  double v = 0.0;
  const int m = 64;
  for (int i = 1; i <= m; ++i) {
    const double rho = lo + (hi - lo) * i / m;
    if (rho <= 0.0) continue;
    const RootTriple r = solve_characteristic(p, rho);
    if (!r.three_real) v = std::max(v, r.muI / rho);
  }
  return std::max(v, 1e-3);
}

CutoffSpec resolve_cutoffs(const MgtParams& p, const LabOptions& opt, double t_first) {
  CutoffSpec c = CutoffSpec::defaults_for(p);
  if (opt.N0 > 0.0) c.N0 = opt.N0;
  if (opt.eps0 > 0.0) {
    c.eps0 = opt.eps0;
  } else if (p.delta > 0.0 && t_first > 0.0) {
    c.eps0 = std::max(c.eps0, std::sqrt(16.0 / (p.delta * t_first)));
  }
  c.validate();
  return c;
}

void check_times(const std::vector<double>& times) {
  if (times.empty()) throw UsageError("no times given");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0) || !std::isfinite(times[i])) {
      throw UsageError("times must be finite and >= 0");
    }
    if (i > 0 && !(times[i] > times[i - 1])) throw UsageError("times must be strictly increasing");
  }
}

nlohmann::json engine_json(const EngineOptions& e) {
  return {{"nodes_per_period", e.nodes_per_period},
          {"physical_nodes_per_period", e.physical_nodes_per_period},
          {"tail_tolerance", e.tail_tolerance},
          {"max_extensions", e.max_extensions},
          {"extension_factor", e.extension_factor}};
}

nlohmann::json params_json(const MgtParams& p) { return {{"tau", p.tau}, {"delta", p.delta}}; }

void record_norms(RateReport& r, double t, const PhysicalNorms& pn, double norm) {
  r.times.push_back(t);
  r.norms.push_back(norm);
  for (const auto& w : pn.warnings) r.warnings.push_back("t=" + std::to_string(t) + ": " + w);
  r.metadata["extents"].push_back(pn.extent);
  r.metadata["frequency_nodes"].push_back(pn.frequency_nodes);
  r.metadata["physical_nodes"].push_back(pn.physical_nodes);
}

}  // namespace

RateReport lemma_l1_check(const LemmaQuery& q, const std::vector<double>& times,
                          const LabOptions& opt) {
  q.validate();
  check_times(times);
  RateReport r;
  r.experiment = std::string("lemma-") + to_string(q.oscillation);
  r.slope_tolerance = opt.slope_tolerance;
  const double t_first = std::max(times.front(), 1.0);

  CutoffSpec cut;
  cut.N0 = 1e6;
  double shift_rate = 0.0;
  if (q.oscillation == Oscillation::ExpKernel) {
    cut.eps0 = opt.eps0 > 0.0 ? opt.eps0 : (q.c2 > 0.0 ? 0.25 * std::sqrt(q.c1 / q.c2) : 0.25);
    // Largest exponent rate over the support, factored out to avoid underflow.
    shift_rate = -q.c1 + std::max(0.0, q.c2) * 4.0 * cut.eps0 * cut.eps0;
    r.mode = RateMode::Bounded;
    r.predicted_slope = 10.0;
  } else {
    cut.eps0 = opt.eps0 > 0.0 ? opt.eps0 : std::sqrt(8.0 / (q.c1 * t_first));
    r.mode = opt.mode;
    r.predicted_slope = lemma_predicted_exponent(q);
  }
  cut.validate();

  std::vector<double> log_ratio;
  for (double t : times) {
    Profile pr;
    pr.rho_hi = 2.0 * cut.eps0;
    pr.features = {cut.eps0};
    pr.feature_scale = cut.eps0;
    const double beta2 = 2.0 * q.beta;
    switch (q.oscillation) {
      case Oscillation::SincKernel:
        pr.value = [=](double rho) {
          const double a = q.c2 * rho * t;
          const double sinc = a == 0.0 ? t : std::sin(a) / (q.c2 * rho);
          return cut.chi1(rho) * std::exp(-q.c1 * rho * rho * t) * std::pow(rho, beta2) * sinc;
        };
        pr.envelope = [=](double rho) {
          const double amp = rho > 0.0 ? std::min(t, 1.0 / (std::abs(q.c2) * rho)) : t;
          return std::exp(-q.c1 * rho * rho * t) * std::pow(rho, beta2) * amp;
        };
        pr.speed = std::abs(q.c2);
        pr.diffusion = q.c1;
        break;
      case Oscillation::SinCos:
        pr.value = [=](double rho) {
          const double a = q.c2 * rho * t;
          const double g = q.phase == Phase::Sin ? std::sin(a) : std::cos(a);
          return cut.chi1(rho) * std::exp(-q.c1 * rho * rho * t) * std::pow(rho, beta2) * g;
        };
        pr.envelope = [=](double rho) {
          return std::exp(-q.c1 * rho * rho * t) * std::pow(rho, beta2);
        };
        pr.speed = std::abs(q.c2);
        pr.diffusion = q.c1;
        break;
      case Oscillation::ExpKernel:
        pr.value = [=](double rho) {
          const double e = (-q.c1 + q.c2 * rho * rho - shift_rate) * t;
          return cut.chi1(rho) * std::exp(e) * std::pow(rho, beta2);
        };
        pr.envelope = [=](double rho) {
          return std::exp((-q.c1 + q.c2 * rho * rho - shift_rate) * t) * std::pow(rho, beta2);
        };
        pr.speed = 0.0;
        pr.diffusion = std::abs(q.c2);
        break;
    }
    const PhysicalNorms pn = physical_norms_of(q.n, t, pr, {1.0}, opt.engine);
    const double v = pn.values[0];
    if (q.oscillation == Oscillation::ExpKernel) {
      // ||I0|| e^{c1 t/2} = v exp((shift_rate + c1/2) t)
      const double lr = std::log(v) + (shift_rate + q.c1 / 2.0) * t;
      log_ratio.push_back(lr);
      record_norms(r, t, pn, std::exp(lr));
    } else {
      record_norms(r, t, pn, v);
    }
  }
  r.metadata["n"] = q.n;
  r.metadata["beta"] = q.beta;
  r.metadata["c1"] = q.c1;
  r.metadata["c2"] = q.c2;
  r.metadata["oscillation"] = to_string(q.oscillation);
  r.metadata["phase"] = q.phase == Phase::Sin ? "sin" : "cos";
  r.metadata["eps0"] = cut.eps0;
  r.metadata["engine"] = engine_json(opt.engine);
  if (q.oscillation == Oscillation::ExpKernel) {
    // Measured value: sup of the ratio over the value at the first time.
    double sup = -kInf;
    for (double l : log_ratio) sup = std::max(sup, l);
    r.measured_slope = std::exp(sup - log_ratio.front());
    r.metadata["log_ratio"] = log_ratio;
    r.evaluate();
  } else {
    if (q.oscillation == Oscillation::SinCos && q.beta > 0.0 && q.beta <= 0.5) {
      r.metadata["improved_rate_exponent"] = q.n / 4.0 - q.beta;
    }
    finalize_rate_report(r);
    if (q.oscillation == Oscillation::SinCos && q.beta > 0.0 && q.beta <= 0.5) {
      r.metadata["improved_rate_holds"] =
          r.measured_slope <= q.n / 4.0 - q.beta + r.slope_tolerance;
    }
  }
  return r;
}

RateReport kernel_prop_check(int ell, double s, NormSpec norm, bool subtract, int n,
                             const MgtParams& params, const std::vector<double>& times,
                             const LabOptions& opt) {
  params.validate();
  check_times(times);
  check_s(s);
  if (ell < 0 || ell > 2) throw DomainError("kernel index ell must be 0, 1 or 2");
  if (ell == 0 && subtract) throw UsageError("no profile is subtracted from the ell=0 kernel");
  if (!(params.delta > 0.0)) throw DomainError("the dissipative lab needs delta > 0");
  const double qn = norm.exponent();
  RateReport r;
  r.slope_tolerance = opt.slope_tolerance;
  r.mode = opt.mode;
  switch (norm.kind) {
    case NormKind::L1:
      r.predicted_slope = kernel_l1_exponent(ell, s, n, subtract);
      break;
    case NormKind::Linf:
      check_dimension(n, 2);
      r.predicted_slope = kernel_linf_exponent(ell, s, n, subtract);
      break;
    case NormKind::Lr:
      check_dimension(n, 2);
      if (ell != 2) throw UsageError("L^r exponents are tabulated for the whole solution only");
      r.predicted_slope = total_lr_exponent(s, n, 1.0 / qn, subtract);
      break;
  }
  std::ostringstream name;
  name << "kernel-K" << ell << (subtract ? "-minus-profile" : "") << "-L"
       << (std::isinf(qn) ? std::string("inf") : std::to_string(qn));
  r.experiment = name.str();

  const CutoffSpec cut = resolve_cutoffs(params, opt, times.front());
  const double w = subtract ? profile_weight(ell, params.tau) : 0.0;
  const double speed = max_phase_speed(params, 0.0, 2.0 * cut.eps0);
  for (double t : times) {
    Profile pr;
    pr.rho_hi = 2.0 * cut.eps0;
    pr.features = {cut.eps0};
    pr.feature_scale = cut.eps0;
    pr.speed = speed;
    pr.diffusion = params.delta / 2.0;
    pr.value = [=](double rho) {
      const KernelEvalContext ctx = KernelEvalContext::at(params, rho);
      double k = kernel_value(ell, t, ctx);
      if (w != 0.0) k -= w * eval_profile_J(t, rho, params.delta);
      return cut.chi1(rho) * std::pow(rho, s) * k;
    };
    pr.envelope = [=](double rho) {
      const KernelEvalContext ctx = KernelEvalContext::at(params, rho);
      double e = kernel_envelope(ell, t, ctx);
      if (w != 0.0) e += std::abs(w) * j_envelope(t, rho, params.delta);
      return std::pow(rho, s) * e;
    };
    const PhysicalNorms pn = physical_norms_of(n, t, pr, {qn}, opt.engine);
    record_norms(r, t, pn, pn.values[0]);
  }
  r.metadata["ell"] = ell;
  r.metadata["s"] = s;
  r.metadata["n"] = n;
  r.metadata["norm"] = std::isinf(qn) ? nlohmann::json("inf") : nlohmann::json(qn);
  r.metadata["subtract_profile"] = subtract;
  r.metadata["params"] = params_json(params);
  r.metadata["eps0"] = cut.eps0;
  r.metadata["N0"] = cut.N0;
  r.metadata["engine"] = engine_json(opt.engine);
  finalize_rate_report(r);
  return r;
}

void FrequencyData::validate() const {
  for (const auto& f : phi) {
    if (!f) throw UsageError("frequency data component missing");
  }
  if (!(support > 0.0) || !std::isfinite(support)) throw UsageError("data support must be > 0");
}

FrequencyData FrequencyData::gaussian(double a) {
  if (!(a > 0.0)) throw DomainError("Gaussian width parameter must be > 0");
  FrequencyData d;
  auto g = [a](double rho) { return std::exp(-a * rho * rho); };
  d.phi = {g, g, g};
  d.support = std::sqrt(40.0 / a);
  return d;
}

FrequencyData FrequencyData::bump(double lo, double hi) {
  if (!(lo >= 0.0 && hi > lo)) throw DomainError("bump support must satisfy 0 <= lo < hi");
  FrequencyData d;
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  auto b = [mid, half](double rho) {
    const double x = (rho - mid) / half;
    return std::abs(x) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - x * x)) : 0.0;
  };
  d.phi = {b, b, b};
  d.support = hi;
  d.breakpoints = {lo, mid};
  return d;
}

RateReport run_decay_experiment(const MgtParams& params, const FrequencyData& data,
                                const ExponentQuery& query, const std::vector<double>& times,
                                ZoneSelect zone, const LabOptions& opt) {
  params.validate();
  data.validate();
  if (!(params.delta > 0.0)) throw DomainError("the dissipative lab needs delta > 0");
  check_times(times);
  if (times.size() < 2) throw FitError("a slope needs at least two times");
  if (times.front() < 16.0) throw UsageError("decay experiments start at t >= 16");
  if (times.back() / times.front() < 16.0) {
    throw UsageError("decay experiments need at least 5 dyadic levels");
  }
  RateReport r;
  r.predicted_slope = predicted_exponent(query);
  r.slope_tolerance = opt.slope_tolerance;
  r.mode = opt.mode;
  r.experiment = std::string("decay-") + (query.refined ? "refined" : "plain") +
                 (zone == ZoneSelect::SmallOnly ? "-small" : "-full");

  const CutoffSpec cut = resolve_cutoffs(params, opt, times.front());
  const double hi = zone == ZoneSelect::SmallOnly ? std::min(2.0 * cut.eps0, data.support)
                                                  : data.support;
  const double s = query.s;
  const bool refined = query.refined;
  const double speed = max_phase_speed(params, 0.0, hi);
  for (double t : times) {
    Profile pr;
    pr.rho_hi = hi;
    pr.features = data.breakpoints;
    if (zone == ZoneSelect::SmallOnly) pr.features.push_back(cut.eps0);
    pr.feature_scale = zone == ZoneSelect::SmallOnly ? cut.eps0 : 1.0;
    pr.speed = speed;
    pr.diffusion = params.delta / 2.0;
    auto mask = [=](double rho) { return zone == ZoneSelect::SmallOnly ? cut.chi1(rho) : 1.0; };
    pr.value = [=](double rho) {
      const KernelEvalContext ctx = KernelEvalContext::at(params, rho);
      double v = 0.0;
      for (int ell = 0; ell < 3; ++ell) v += kernel_value(ell, t, ctx) * data.phi[ell](rho);
      if (refined) {
        v -= (data.phi[1](rho) + params.tau * data.phi[2](rho)) *
             eval_profile_J(t, rho, params.delta);
      }
      return mask(rho) * std::pow(rho, s) * v;
    };
    pr.envelope = [=](double rho) {
      const KernelEvalContext ctx = KernelEvalContext::at(params, rho);
      double e = 0.0;
      for (int ell = 0; ell < 3; ++ell) {
        e += kernel_envelope(ell, t, ctx) * std::abs(data.phi[ell](rho));
      }
      if (refined) {
        e += std::abs(data.phi[1](rho) + params.tau * data.phi[2](rho)) *
             j_envelope(t, rho, params.delta);
      }
      return std::pow(rho, s) * e;
    };
    const PhysicalNorms pn = physical_norms_of(query.n, t, pr, {query.q}, opt.engine);
    record_norms(r, t, pn, pn.values[0]);
  }
  r.metadata["params"] = params_json(params);
  r.metadata["n"] = query.n;
  r.metadata["p"] = query.p;
  r.metadata["q"] = query.q;
  r.metadata["s"] = query.s;
  r.metadata["refined"] = query.refined;
  r.metadata["branch"] = predicted_branch(query);
  r.metadata["zone"] = zone == ZoneSelect::SmallOnly ? "small" : "full";
  r.metadata["eps0"] = cut.eps0;
  r.metadata["N0"] = cut.N0;
  r.metadata["engine"] = engine_json(opt.engine);
  finalize_rate_report(r);
  return r;
}

FrequencyData band_data(const MgtParams& params, Band band, const LabOptions& opt) {
  CutoffSpec c = CutoffSpec::defaults_for(params);
  if (opt.N0 > 0.0) c.N0 = opt.N0;
  if (band == Band::High) return FrequencyData::bump(c.N0, 4.0 * c.N0);
  return FrequencyData::bump(0.5, 5.0);
}

std::vector<RateReport> high_freq_decay_check(const MgtParams& params, int n,
                                              const std::vector<double>& qs, double s,
                                              const FrequencyData& data, Band band,
                                              const std::vector<double>& times,
                                              const LabOptions& opt) {
  params.validate();
  data.validate();
  check_times(times);
  check_s(s);
  if (!(params.delta > 0.0)) throw DomainError("the dissipative lab needs delta > 0");
  check_dimension(n, 1);
  if (qs.empty()) throw UsageError("no norms requested");
  for (double q : qs) {
    if (!(q > 1.0) || !std::isfinite(q)) throw DomainError("q must lie in (1, infinity)");
  }
  CutoffSpec cut = CutoffSpec::defaults_for(params);
  if (opt.eps0 > 0.0) cut.eps0 = opt.eps0;
  if (opt.N0 > 0.0) cut.N0 = opt.N0;
  cut.validate();
  const int which = band == Band::High ? 3 : 2;
  const double hi = data.support;
  const double speed = max_phase_speed(params, 0.0, hi);

  std::vector<RateReport> out(qs.size());
  for (std::size_t k = 0; k < qs.size(); ++k) {
    out[k].experiment = std::string("exp-decay-") + (band == Band::High ? "high" : "bounded");
    out[k].mode = RateMode::ExpDecay;
    out[k].predicted_slope = -0.01;
    out[k].slope_tolerance = 0.0;
  }
  for (double t : times) {
    Profile pr;
    pr.rho_hi = hi;
    pr.features = data.breakpoints;
    pr.feature_scale = 1.0;
    pr.speed = speed;
    pr.diffusion = 0.0;
    pr.value = [=](double rho) {
      double v;
      if (t == 0.0) {
        v = data.phi[0](rho);
      } else {
        const KernelEvalContext ctx = KernelEvalContext::at(params, rho);
        v = 0.0;
        for (int ell = 0; ell < 3; ++ell) v += kernel_value(ell, t, ctx) * data.phi[ell](rho);
      }
      return cut.chi(which, rho) * std::pow(rho, s) * v;
    };
    pr.envelope = [=](double rho) {
      double e = 0.0;
      for (int ell = 0; ell < 3; ++ell) e += std::abs(data.phi[ell](rho));
      return std::pow(rho, s) * e;
    };
    const PhysicalNorms pn = physical_norms_of(n, t, pr, qs, opt.engine);
    for (std::size_t k = 0; k < qs.size(); ++k) record_norms(out[k], t, pn, pn.values[k]);
  }
  for (std::size_t k = 0; k < qs.size(); ++k) {
    out[k].metadata["params"] = params_json(params);
    out[k].metadata["n"] = n;
    out[k].metadata["q"] = qs[k];
    out[k].metadata["s"] = s;
    out[k].metadata["band"] = band == Band::High ? "high" : "bounded";
    out[k].metadata["eps0"] = cut.eps0;
    out[k].metadata["N0"] = cut.N0;
    out[k].metadata["engine"] = engine_json(opt.engine);
    finalize_rate_report(out[k]);
  }
  return out;
}

const char* to_string(Multiplier m) {
  switch (m) {
    case Multiplier::Profile: return "profile";
    case Multiplier::K2Exp: return "K2-exp";
    case Multiplier::K2Cos: return "K2-cos";
    case Multiplier::K2Sin: return "K2-sin";
    case Multiplier::K1Exp: return "K1-exp";
    case Multiplier::K1Cos: return "K1-cos";
    case Multiplier::K1Sin: return "K1-sin";
    case Multiplier::K0Exp: return "K0-exp";
    case Multiplier::K0Cos: return "K0-cos";
    case Multiplier::K0Sin: return "K0-sin";
  }
  return "?";
}

Multiplier multiplier_from_string(const std::string& name) {
  for (Multiplier m : {Multiplier::Profile, Multiplier::K2Exp, Multiplier::K2Cos,
                       Multiplier::K2Sin, Multiplier::K1Exp, Multiplier::K1Cos,
                       Multiplier::K1Sin, Multiplier::K0Exp, Multiplier::K0Cos,
                       Multiplier::K0Sin}) {
    if (name == to_string(m)) return m;
  }
  throw UsageError("unknown multiplier '" + name + "'");
}

double multiplier_bound_power(Multiplier m) {
  switch (m) {
    case Multiplier::Profile: return 0.0;
    case Multiplier::K2Exp: return -2.0;
    case Multiplier::K2Cos: return -2.0;
    case Multiplier::K2Sin: return -3.0;
    case Multiplier::K1Exp: return -2.0;
    case Multiplier::K1Cos: return -2.0;
    case Multiplier::K1Sin: return -1.0;
    case Multiplier::K0Exp: return 0.0;
    case Multiplier::K0Cos: return -2.0;
    case Multiplier::K0Sin: return -1.0;
  }
  return 0.0;
}

namespace {

KernelId multiplier_kernel(Multiplier m) {
  switch (m) {
    case Multiplier::K2Exp: return {2, KernelPart::Exp};
    case Multiplier::K2Cos: return {2, KernelPart::Cos};
    case Multiplier::K2Sin: return {2, KernelPart::Sin};
    case Multiplier::K1Exp: return {1, KernelPart::Exp};
    case Multiplier::K1Cos: return {1, KernelPart::Cos};
    case Multiplier::K1Sin: return {1, KernelPart::Sin};
    case Multiplier::K0Exp: return {0, KernelPart::Exp};
    case Multiplier::K0Cos: return {0, KernelPart::Cos};
    case Multiplier::K0Sin: return {0, KernelPart::Sin};
    case Multiplier::Profile: break;
  }
  throw UsageError("the profile multiplier has no kernel part");
}

}  // namespace

PointwiseResult multiplier_pointwise_check(Multiplier which, double sigma,
                                           const std::vector<double>& rho_grid,
                                           const std::vector<double>& t_grid,
                                           const MgtParams& params) {
  params.validate();
  check_s(sigma);
  if (rho_grid.empty() || t_grid.empty()) throw UsageError("empty grid");
  for (double t : t_grid) {
    if (!(t >= 0.0)) throw UsageError("times must be >= 0");
  }
  for (double rho : rho_grid) {
    if (!(rho > 0.0)) throw UsageError("frequencies must be > 0");
  }
  PointwiseResult out;
  std::vector<KernelEvalContext> ctx;
  ctx.reserve(rho_grid.size());
  double gap = kInf;
  for (double rho : rho_grid) {
    ctx.push_back(KernelEvalContext::at(params, rho));
    gap = std::min({gap, std::abs(ctx.back().roots.lambda1), std::abs(ctx.back().roots.muR)});
  }
  out.c = which == Multiplier::Profile ? params.delta / 4.0 : 0.5 * gap;
  const double power = multiplier_bound_power(which) + sigma;
  const double rho_min = *std::min_element(rho_grid.begin(), rho_grid.end());
  const double t_min = *std::min_element(t_grid.begin(), t_grid.end());
  for (std::size_t i = 0; i < rho_grid.size(); ++i) {
    const double rho = rho_grid[i];
    for (double t : t_grid) {
      double m, bound;
      if (which == Multiplier::Profile) {
        m = std::pow(rho, sigma) * std::sin(rho * t) * std::exp(-0.5 * params.delta * rho * rho * t);
        bound = std::exp(-out.c * rho * rho * t) * std::pow(rho, sigma);
      } else {
        m = std::pow(rho, sigma) * eval_kernel_hat(multiplier_kernel(which), t, ctx[i]);
        bound = std::exp(-out.c * t) * std::pow(rho, power);
      }
      const double ratio = std::abs(m) / bound;
      if (ratio > out.worst_ratio) {
        out.worst_ratio = ratio;
        out.worst_rho = rho;
        out.worst_t = t;
      }
      if (rho == rho_min || t == t_min) out.reference_ratio = std::max(out.reference_ratio, ratio);
    }
  }
  out.bounded = std::isfinite(out.worst_ratio) && out.worst_ratio <= 10.0 * out.reference_ratio;
  return out;
}

}  // namespace mgt
