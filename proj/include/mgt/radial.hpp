#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "mgt/roots.hpp"

namespace mgt {

// Quadrature grid on [0, extent] for radial integrals in R^n.  Weights carry
// the r^{n-1} Jacobian, so sum_i w_i f(r_i) approximates
// int_0^extent f(r) r^{n-1} dr.
class RadialGrid {
 public:
  static constexpr int kPanelOrder = 16;

  // Composite Gauss-Legendre grid.  Each interval between consecutive
  // breakpoints is cut into equal panels no wider than max_panel_width.
  static std::shared_ptr<const RadialGrid> gauss_panels(int dimension,
                                                        std::vector<double> breakpoints,
                                                        double max_panel_width);
  // Grid with exactly the given panel edges (ascending, first edge >= 0).
  static std::shared_ptr<const RadialGrid> from_edges(int dimension,
                                                      std::vector<double> edges);

  int dimension() const { return dim_; }
  double extent() const { return edges_.back(); }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& panel_edges() const { return edges_; }

 private:
  RadialGrid() = default;
  int dim_ = 1;
  std::vector<double> edges_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

struct RadialFunction {
  GridPtr grid;
  std::vector<double> values;

  RadialFunction() = default;
  // Throws DomainError on a length mismatch or a non-finite value.
  RadialFunction(GridPtr g, std::vector<double> v);

  template <class F>
  static RadialFunction sample(const GridPtr& g, F&& f) {
    std::vector<double> v(g->size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(g->nodes()[i]);
    return RadialFunction(g, std::move(v));
  }

  int dimension() const { return grid->dimension(); }
};

// Surface area of the unit sphere in R^n.
double sphere_area(int n);

// J~_mu(s) = s^{-mu} J_mu(s) for integer or half-integer mu >= -1/2.
double modified_bessel(double mu, double s);

// Unitary Fourier normalization: the radial transform of f(x) = f0(|x|) is
// f^(rho) = int_0^inf f0(r) r^{n-1} J~_{n/2-1}(r rho) dr, the same kernel in
// both directions.
constexpr double kTransformConstant = 1.0;

enum class Direction { Forward, Inverse };

struct TransformOptions {
  double min_points_per_period = 10.0;
  unsigned workers = 0;  // 0: hardware concurrency
};

RadialFunction radial_fourier(const RadialFunction& f, const GridPtr& target,
                              Direction dir, const TransformOptions& opt = {});

std::vector<double> radial_fourier_at(const RadialFunction& f,
                                      const std::vector<double>& targets, Direction dir,
                                      const TransformOptions& opt = {});

// ||f||_{L^q(R^n)}; q = infinity gives the maximum over the nodes.
double lq_norm(const RadialFunction& f, double q);

enum class Mollifier { SmoothstepQuintic };

struct CutoffSpec {
  double eps0 = 0.1;
  double N0 = 10.0;
  Mollifier mollifier = Mollifier::SmoothstepQuintic;

  void validate() const;
  double chi1(double rho) const;
  double chi2(double rho) const;
  double chi3(double rho) const;
  double chi(int which, double rho) const;

  static CutoffSpec defaults_for(const MgtParams& p);
};

struct CutoffValidation {
  bool ok = true;
  double first_bad_rho = 0.0;
  std::string message;
};

// Scans the discriminant on (0, 2 eps0] and [N0, 8 N0].
CutoffValidation validate_by_discriminant(const CutoffSpec& spec, const MgtParams& p,
                                          int samples = 400);

RadialFunction cutoff_apply(const RadialFunction& f, const CutoffSpec& spec, int which);

// Multiplies by rho^s (s >= 0).
RadialFunction homogeneous_derivative(const RadialFunction& f, double s);

// Two-column CSV (node,value) with a JSON sidecar at path + ".json" holding
// dimension, extent and the panel edges needed to rebuild the grid.
void write_radial_csv(const std::string& path, const RadialFunction& f);
RadialFunction read_radial_csv(const std::string& path);

}  // namespace mgt
