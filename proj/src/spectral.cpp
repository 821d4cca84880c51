#include "mgt/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mgt/errors.hpp"

namespace mgt {

double PhysicalNorms::value(double want) const {
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] == want) return values[i];
  }
  throw UsageError("norm was not requested");
}

namespace {

void check_profile(const SpectralProfile& p) {
  if (!p.sample) throw UsageError("spectral profile without a sampler");
  if (p.breakpoints.size() < 2) throw UsageError("spectral profile needs a support interval");
  if (!(p.breakpoints.back() > p.breakpoints.front())) {
    throw UsageError("spectral profile support is empty");
  }
  if (!(p.physical_extent > 0.0)) throw UsageError("physical extent must be positive");
}

struct Transformed {
  RadialFunction f;
  std::size_t frequency_nodes;
  double origin;
};

Transformed transform(int n, const SpectralProfile& prof, double R, const EngineOptions& opt) {
  const double rho_max = prof.breakpoints.back();
  const double h_src = RadialGrid::kPanelOrder * 2.0 * M_PI /
                       (opt.nodes_per_period * (prof.phase_rate + R));
  GridPtr src = RadialGrid::gauss_panels(n, prof.breakpoints, h_src);
  RadialFunction g = prof.sample(src);
  const double h_phys = RadialGrid::kPanelOrder * 2.0 * M_PI /
                        (opt.physical_nodes_per_period * rho_max);
  GridPtr tgt = RadialGrid::gauss_panels(n, {0.0, R}, h_phys);
  TransformOptions to;
  to.min_points_per_period = opt.nodes_per_period;
  to.workers = opt.workers;
  const double origin = radial_fourier_at(g, {0.0}, Direction::Inverse, to).front();
  return {radial_fourier(g, tgt, Direction::Inverse, to), src->size(), origin};
}

}  // namespace

RadialFunction physical_function(int n, const SpectralProfile& profile, double extent,
                                 const EngineOptions& opt) {
  check_profile(profile);
  return transform(n, profile, extent, opt).f;
}

PhysicalNorms physical_norms(int n, const SpectralProfile& prof, const std::vector<double>& qs,
                             const EngineOptions& opt) {
  check_profile(prof);
  if (qs.empty()) throw UsageError("no norms requested");
  for (double q : qs) {
    if (!(q >= 1.0)) throw DomainError("norm exponent must be >= 1");
  }
  PhysicalNorms out;
  out.q = qs;
  double R = prof.physical_extent;
  for (int ext = 0;; ++ext) {
    Transformed tr = transform(n, prof, R, opt);
    const RadialFunction& f = tr.f;
    const auto& nodes = f.grid->nodes();
    const auto& w = f.grid->weights();
    const double cut = 0.9 * R;
    out.values.assign(qs.size(), 0.0);
    double worst_tail = 0.0;
    for (std::size_t k = 0; k < qs.size(); ++k) {
      const double q = qs[k];
      if (std::isinf(q)) {
        double all = std::abs(tr.origin), tail = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
          const double a = std::abs(f.values[i]);
          all = std::max(all, a);
          if (nodes[i] >= cut) tail = std::max(tail, a);
        }
        out.values[k] = all;
        if (all > 0.0) worst_tail = std::max(worst_tail, tail / all);
      } else {
        double all = 0.0, tail = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
          const double a = std::abs(f.values[i]);
          const double c = w[i] * (q == 1.0 ? a : std::pow(a, q));
          all += c;
          if (nodes[i] >= cut) tail += c;
        }
        out.values[k] = std::pow(sphere_area(n) * all, 1.0 / q);
        if (all > 0.0) worst_tail = std::max(worst_tail, tail / all);
      }
    }
    out.extent = R;
    out.tail_fraction = worst_tail;
    out.frequency_nodes = tr.frequency_nodes;
    out.physical_nodes = nodes.size();
    out.extensions = ext;
    if (worst_tail <= opt.tail_tolerance) break;
    if (ext >= opt.max_extensions) {
      std::ostringstream os;
      os << "physical tail fraction " << worst_tail << " above " << opt.tail_tolerance
         << " at extent " << R;
      out.warnings.push_back(os.str());
      break;
    }
    R *= opt.extension_factor;
  }
  return out;
}

}  // namespace mgt
