#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "mgt/kernels.hpp"
#include "mgt/radial.hpp"
#include "mgt/report.hpp"
#include "mgt/roots.hpp"
#include "mgt/spectral.hpp"

namespace mgt {

// Time exponents of the L^p-L^q estimates for the dissipative equation.
struct ExponentQuery {
  int n = 3;
  double p = 1.0;
  double q = 2.0;
  double s = 0.0;
  bool refined = false;  // profile-subtracted estimate

  void validate() const;
};

double predicted_exponent(const ExponentQuery& query);
std::string predicted_branch(const ExponentQuery& query);

// Exponent tables of the small-frequency kernel estimates.  `subtract` selects
// the estimate for K_ell - [2 - ell + (ell - 1) tau] J (ell = 1, 2).
double kernel_l1_exponent(int ell, double s, int n, bool subtract);
double kernel_linf_exponent(int ell, double s, int n, bool subtract);
// Exponents for the whole solution operator (all kernels together).
double total_l1_exponent(double s, int n, bool subtract);
double total_linf_exponent(double s, int n, bool subtract);
// L^r with 1/r = inv_r in [0, 1].
double total_lr_exponent(double s, int n, double inv_r, bool subtract);

std::vector<double> dyadic_times(int first_level, int last_level);

// Settings shared by the numerical experiments.  Zero eps0 / N0 select
// defaults: N0 from CutoffSpec::defaults_for, eps0 large enough that the
// small-frequency cutoff sits on its plateau at the first fitted time.
struct LabOptions {
  EngineOptions engine;
  double eps0 = 0.0;
  double N0 = 0.0;
  double slope_tolerance = 0.15;
  RateMode mode = RateMode::UpperBound;
};

enum class Oscillation { SincKernel, SinCos, ExpKernel };
enum class Phase { Sin, Cos };
const char* to_string(Oscillation o);

struct LemmaQuery {
  int n = 3;
  double beta = 0.0;
  double c1 = 1.0;
  double c2 = 1.0;
  Oscillation oscillation = Oscillation::SinCos;
  Phase phase = Phase::Cos;

  void validate() const;
};

// Predicted L^1 exponent of the oscillating multipliers (Sinc / SinCos).
double lemma_predicted_exponent(const LemmaQuery& q);

RateReport lemma_l1_check(const LemmaQuery& query, const std::vector<double>& times,
                          const LabOptions& opt = {});

enum class NormKind { L1, Linf, Lr };
struct NormSpec {
  NormKind kind = NormKind::L1;
  double r = 1.0;  // used by Lr
  double exponent() const;  // the q of L^q, infinity for Linf
};

RateReport kernel_prop_check(int ell, double s, NormSpec norm, bool subtract_profile, int n,
                             const MgtParams& params, const std::vector<double>& times,
                             const LabOptions& opt = {});

// Radial data given on the frequency side.  Each component must be smooth and
// negligible beyond `support`.
struct FrequencyData {
  std::array<std::function<double(double)>, 3> phi;
  double support = 6.0;
  std::vector<double> breakpoints;  // interior features, optional

  void validate() const;
  // All three components equal to exp(-a rho^2).
  static FrequencyData gaussian(double a = 1.0);
  // All three components equal to a C-infinity bump supported on [lo, hi].
  static FrequencyData bump(double lo, double hi);
};

enum class ZoneSelect { SmallOnly, Full };

RateReport run_decay_experiment(const MgtParams& params, const FrequencyData& data,
                                const ExponentQuery& query, const std::vector<double>& times,
                                ZoneSelect zone, const LabOptions& opt = {});

enum class Band { Bounded, High };

// Exponential decay of the solution localized to the chi_2 (Bounded) or
// chi_3 (High) zone.  Returns one report per q with mode ExpDecay.
std::vector<RateReport> high_freq_decay_check(const MgtParams& params, int n,
                                              const std::vector<double>& qs, double s,
                                              const FrequencyData& data, Band band,
                                              const std::vector<double>& times,
                                              const LabOptions& opt = {});

// Default band-limited data for high_freq_decay_check.
FrequencyData band_data(const MgtParams& params, Band band, const LabOptions& opt = {});

enum class Multiplier {
  Profile,
  K2Exp, K2Cos, K2Sin,
  K1Exp, K1Cos, K1Sin,
  K0Exp, K0Cos, K0Sin,
};
const char* to_string(Multiplier m);
Multiplier multiplier_from_string(const std::string& name);
// Power of rho in the large-frequency bound, excluding sigma.
double multiplier_bound_power(Multiplier m);

struct PointwiseResult {
  bool bounded = false;
  double worst_ratio = 0.0;
  double reference_ratio = 0.0;
  double c = 0.0;
  double worst_rho = 0.0;
  double worst_t = 0.0;
};

PointwiseResult multiplier_pointwise_check(Multiplier which, double sigma,
                                           const std::vector<double>& rho_grid,
                                           const std::vector<double>& t_grid,
                                           const MgtParams& params);

}  // namespace mgt
