#include <doctest.h>

#include <cmath>
#include <vector>

#include "mgt/errors.hpp"
#include "mgt/kernels.hpp"

using namespace mgt;

TEST_CASE("Lambda0 and kernels at tau=1, delta=0, rho=1") {
  const KernelEvalContext ctx = KernelEvalContext::at({1.0, 0.0}, 1.0);
  CHECK(ctx.Lambda0 == -2.0);
  for (double t : {0.0, 0.3, 1.0, 4.5, 10.0}) {
    const double expect = 0.5 * std::exp(-t) - 0.5 * std::cos(t) + 0.5 * std::sin(t);
    CHECK(eval_kernel_hat({2, KernelPart::Total}, t, ctx) == doctest::Approx(expect).epsilon(1e-14));
  }
}

TEST_CASE("initial conditions hold analytically on small and large frequencies") {
  for (const MgtParams p : {MgtParams{1.0, 1.0}, MgtParams{0.5, 2.0}, MgtParams{1.0, 0.0}}) {
    for (double rho : {1e-3, 0.02, 0.05, 0.1, 25.0, 40.0, 200.0}) {
      const KernelEvalContext ctx = KernelEvalContext::at(p, rho);
      for (int ell = 0; ell < 3; ++ell) {
        for (int j = 0; j < 3; ++j) {
          const double v = eval_kernel_derivative({ell, KernelPart::Total}, j, 0.0, ctx);
          CHECK(std::abs(v - (j == ell ? 1.0 : 0.0)) < 1e-8);
        }
      }
    }
  }
}

TEST_CASE("finite-difference derivative check at moderate frequencies") {
  const MgtParams p{1.0, 1.0};
  for (double rho : {0.05, 0.5, 2.0}) {
    const KernelEvalContext ctx = KernelEvalContext::at(p, rho);
    const double h = 1e-3;
    // one-sided 4th-order stencils at t = 0 for the first and second derivative
    auto K = [&](int ell, double t) { return eval_kernel_hat({ell, KernelPart::Total}, t, ctx); };
    auto d1 = [&](int ell) {
      return (-25.0 * K(ell, 0) + 48.0 * K(ell, h) - 36.0 * K(ell, 2 * h) + 16.0 * K(ell, 3 * h) -
              3.0 * K(ell, 4 * h)) / (12.0 * h);
    };
    auto d2 = [&](int ell) {
      return (45.0 * K(ell, 0) - 154.0 * K(ell, h) + 214.0 * K(ell, 2 * h) - 156.0 * K(ell, 3 * h) +
              61.0 * K(ell, 4 * h) - 10.0 * K(ell, 5 * h)) / (12.0 * h * h);
    };
    CHECK(d1(1) == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(std::abs(d1(0)) < 1e-7);
    CHECK(d2(2) == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(std::abs(d2(1)) < 1e-4);
  }
}

TEST_CASE("printed formula matches the ODE oracle") {
  std::vector<double> times;
  for (int k = 0; k <= 200; ++k) times.push_back(0.05 * k);
  for (const MgtParams p : {MgtParams{1.0, 0.0}, MgtParams{1.0, 1.0}, MgtParams{0.3, 2.0}}) {
    for (double rho : {0.05, 0.025, 1.0, 40.0}) {
      const KernelEvalContext ctx = KernelEvalContext::at(p, rho);
      for (int ell = 0; ell < 3; ++ell) {
        std::array<double, 3> y0{0, 0, 0};
        y0[ell] = 1.0;
        const OdeTrajectory tr = ode_oracle(y0, rho, times, p);
        double peak = 0.0, dev = 0.0;
        for (std::size_t i = 0; i < times.size(); ++i) {
          const double k = eval_kernel_hat({ell, KernelPart::Total}, times[i], ctx);
          peak = std::max(peak, std::abs(tr.y[i][0]));
          dev = std::max(dev, std::abs(k - tr.y[i][0]));
        }
        CHECK(dev < 1e-6 * peak);
      }
    }
  }
}

TEST_CASE("oracle special cases") {
  const std::vector<double> times{0.0, 1.0, 5.0, 10.0};
  const OdeTrajectory c = ode_oracle({1.0, 0.0, 0.0}, 0.0, times, {1.0, 1.0});
  for (const auto& y : c.y) CHECK(y[0] == doctest::Approx(1.0).epsilon(1e-12));
  // energy of the good unknown in the conservative case
  std::vector<double> many;
  for (int k = 0; k <= 100; ++k) many.push_back(0.1 * k);
  const OdeTrajectory w = ode_oracle({0.3, -0.7, 1.1}, 2.0, many, {0.7, 0.0});
  const double e0 = good_unknown_energy(w.y[0], 2.0, 0.7);
  for (const auto& y : w.y) {
    CHECK(std::abs(good_unknown_energy(y, 2.0, 0.7) - e0) < 1e-8 * e0);
  }
  CHECK_THROWS_AS(ode_oracle({NAN, 0.0, 0.0}, 1.0, times, {1.0, 1.0}), DomainError);
}

TEST_CASE("profile J") {
  CHECK(eval_profile_J(5.0, 0.0, 3.0) == 5.0);
  CHECK(std::abs(eval_profile_J(M_PI, 1.0, 0.0)) < 1e-15);
  CHECK(eval_profile_J(1.0, 1.0, 2.0) == doctest::Approx(0.3095598757).epsilon(1e-10));
  CHECK(profile_weight(1, 0.4) == 1.0);
  CHECK(profile_weight(2, 0.4) == doctest::Approx(0.4));
}

TEST_CASE("subtracting the profile removes the 1/rho growth") {
  const MgtParams p{1.0, 1.0};
  const double rho = 1e-3;
  const KernelEvalContext ctx = KernelEvalContext::at(p, rho);
  double worst_sub = 0.0, worst = 0.0;
  for (double t = 0.0; t < 5000.0; t += 7.0) {
    for (int ell = 1; ell <= 2; ++ell) {
      const double k = eval_kernel_hat({ell, KernelPart::Total}, t, ctx);
      worst = std::max(worst, std::abs(k));
      worst_sub = std::max(worst_sub, std::abs(k - profile_weight(ell, p.tau) * eval_profile_J(t, rho, p.delta)));
    }
  }
  CHECK(worst > 100.0);
  CHECK(worst_sub < 5.0);
}

TEST_CASE("solution evaluation") {
  const MgtParams p{1.0, 1.0};
  GridPtr g = RadialGrid::gauss_panels(3, {0.0, 2.0}, 0.5);
  DataTriple d{RadialFunction::sample(g, [](double r) { return std::exp(-r * r); }),
               RadialFunction::sample(g, [](double r) { return r; }),
               RadialFunction::sample(g, [](double) { return 0.5; })};
  CHECK(eval_solution_hat(d, 0.0, p).values == d.phi0.values);
  const RadialFunction s = eval_solution_hat(d, 3.0, p);
  for (std::size_t i = 0; i < g->size(); ++i) {
    const KernelEvalContext ctx = KernelEvalContext::at(p, g->nodes()[i]);
    double expect = 0.0;
    for (int ell = 0; ell < 3; ++ell) {
      expect += eval_kernel_hat({ell, KernelPart::Total}, 3.0, ctx) * d[ell].values[i];
    }
    CHECK(s.values[i] == doctest::Approx(expect).epsilon(1e-14));
  }
}

TEST_CASE("degenerate configurations") {
  // tau=0.1, delta=5 has a three-real-root window.
  const MgtParams p{0.1, 5.0};
  const auto w = real_root_window(p);
  REQUIRE(w.has_value());
  const double rho = 0.5 * (w->rho_lo + w->rho_hi);
  const KernelEvalContext ctx = KernelEvalContext::at(p, rho);
  CHECK(ctx.degenerate());
  try {
    eval_kernel_hat({0, KernelPart::Total}, 1.0, ctx);
    FAIL("expected degenerate configuration");
  } catch (const DegenerateConfigurationError& e) {
    CHECK(e.rho() == rho);
  }
  // the general representation still agrees with the oracle there
  std::vector<double> times{0.5, 1.0, 3.0};
  for (int ell = 0; ell < 3; ++ell) {
    std::array<double, 3> y0{0, 0, 0};
    y0[ell] = 1.0;
    const auto tr = ode_oracle(y0, rho, times, p);
    for (std::size_t i = 0; i < times.size(); ++i) {
      CHECK(eval_kernel_general(ell, times[i], ctx) ==
            doctest::Approx(tr.y[i][0]).epsilon(1e-7));
    }
  }
  GridPtr g = RadialGrid::from_edges(1, {rho - 1e-3, rho + 1e-3});
  DataTriple d{RadialFunction::sample(g, [](double) { return 1.0; }),
               RadialFunction::sample(g, [](double) { return 0.0; }),
               RadialFunction::sample(g, [](double) { return 0.0; })};
  CHECK_THROWS_AS(eval_solution_hat(d, 1.0, p), DegenerateConfigurationError);
  CHECK_NOTHROW(eval_solution_hat(d, 1.0, p, KernelFormula::AllowGeneral));
}
