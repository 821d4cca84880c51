#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mgt/radial.hpp"

namespace mgt {

// A radial frequency-side profile g^(rho) supported on
// [breakpoints.front(), breakpoints.back()].
struct SpectralProfile {
  std::function<RadialFunction(const GridPtr&)> sample;
  std::vector<double> breakpoints;
  // Largest |d phase / d rho| of the profile's own oscillation (t * speed).
  double phase_rate = 0.0;
  // Initial physical truncation radius; extended while the tail is too heavy.
  double physical_extent = 0.0;
};

struct EngineOptions {
  double nodes_per_period = 10.0;
  double physical_nodes_per_period = 32.0;
  double tail_tolerance = 1e-5;
  int max_extensions = 4;
  double extension_factor = 1.5;
  unsigned workers = 0;
};

struct PhysicalNorms {
  std::vector<double> q;
  std::vector<double> values;
  double extent = 0.0;
  double tail_fraction = 0.0;
  std::size_t frequency_nodes = 0;
  std::size_t physical_nodes = 0;
  int extensions = 0;
  std::vector<std::string> warnings;

  double value(double q) const;
};

// Inverse-transforms the profile onto a physical grid and returns the
// L^q(R^n) norms for each requested q (infinity allowed).
PhysicalNorms physical_norms(int n, const SpectralProfile& profile,
                             const std::vector<double>& qs, const EngineOptions& opt = {});

// The physical-side function itself on [0, extent].
RadialFunction physical_function(int n, const SpectralProfile& profile, double extent,
                                 const EngineOptions& opt = {});

}  // namespace mgt
