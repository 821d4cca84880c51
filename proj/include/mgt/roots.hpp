#pragma once

#include <cstddef>
#include <optional>
#include <string>

namespace mgt {

struct MgtParams {
  double tau = 1.0;
  double delta = 0.0;

  // Throws DomainError unless tau > 0, delta >= 0 and both finite.
  void validate() const;
};

// Roots of tau*l^3 + l^2 + (delta+tau) rho^2 l + rho^2 = 0.
//
// lambda1 is the real root continuously connected to -1/tau.  Normally the
// other two roots are muR +- i muI.  Inside a three-real-root window muI is 0
// and the remaining real roots are muR +- real_pair_split.
struct RootTriple {
  double lambda1 = 0.0;
  double muR = 0.0;
  double muI = 0.0;
  double discriminant = 0.0;
  double real_pair_split = 0.0;
  bool three_real = false;
  bool near_degenerate = false;
};

enum class Zone { SmallFreq, LargeFreq };
enum class RootComponent { Lambda1, MuR, MuI };

const char* to_string(Zone z);
const char* to_string(RootComponent c);

struct ExpansionOrder {
  Zone zone = Zone::SmallFreq;
  int terms = 2;
};

// Discriminant of the cubic in lambda as a closed polynomial in rho.
double discriminant(const MgtParams& p, double rho);

// Open interval (rho_lo, rho_hi) where three real roots exist, if any.
struct RealRootWindow {
  double rho_lo;
  double rho_hi;
};
std::optional<RealRootWindow> real_root_window(const MgtParams& p);

RootTriple solve_characteristic(const MgtParams& p, double rho);

// |p(z)| / sum_k |a_k| |z|^k for each of the three returned roots; the
// maximum is returned.
double scaled_residual(const MgtParams& p, double rho, const RootTriple& r);

RootTriple small_freq_expansion(const MgtParams& p, double rho,
                                const ExpansionOrder& order);
RootTriple large_freq_expansion(const MgtParams& p, double rho,
                                const ExpansionOrder& order);

struct OrderCheckResult {
  double slope = 0.0;          // NaN when saturated
  bool saturated = false;      // every residual sat below the noise floor
  bool exact = false;          // residuals were identically zero
  std::size_t points_used = 0;
  std::size_t points_total = 0;
};

struct OrderCheckOptions {
  double rho0 = 0.0;  // 0 selects 0.1 (small zone) or 10 (large zone)
  int levels = 7;
  int terms = 2;
};

OrderCheckResult expansion_order_check(const MgtParams& p, Zone zone,
                                       RootComponent component,
                                       const OrderCheckOptions& opt = {});

// Printed remainder order for the given zone/component at the given number
// of terms (e.g. small zone, lambda1, 2 terms -> 4).
int printed_remainder_order(Zone zone, RootComponent component, int terms);

}  // namespace mgt
