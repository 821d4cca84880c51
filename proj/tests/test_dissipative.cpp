#include <doctest.h>

#include <cmath>
#include <random>
#include <string>

#include "mgt/dissipative.hpp"
#include "mgt/errors.hpp"

using namespace mgt;

namespace {

// Plain three-branch exponent written out directly from the theorem table.
double plain_oracle(int n, double p, double q, double s) {
  const double gap = 1.0 / p - 1.0 / q;
  const double fl = std::floor(n / 2.0);
  if (s == 1.0) return -(0.5 + n / 2.0 + fl / 2.0) * gap + 0.5 + fl / 2.0;
  if (s > 2.0) return -(3.0 * n / 4.0) * gap + 0.5 + n / 4.0 - s / 2.0;
  return -(1.0 + n / 2.0 + fl / 2.0) * gap + 1.5 + fl / 2.0 - s / 2.0;
}

}  // namespace

TEST_CASE("hand-checked exponents at n=3, p=1, q=2") {
  CHECK(predicted_exponent({3, 1.0, 2.0, 0.0, false}) == doctest::Approx(0.5));
  CHECK(predicted_exponent({3, 1.0, 2.0, 1.0, false}) == doctest::Approx(-0.25));
  CHECK(predicted_exponent({3, 1.0, 2.0, 2.0, false}) == doctest::Approx(-0.5));
  CHECK(predicted_exponent({3, 1.0, 2.0, 3.0, false}) == doctest::Approx(-1.375));
  CHECK(predicted_branch({3, 1.0, 2.0, 3.0, false}) == "s>2");
  CHECK(predicted_exponent({3, 2.0, 2.0, 0.0, false}) == doctest::Approx(2.0));
  CHECK(predicted_exponent({3, 2.0, 2.0, 0.0, true}) == doctest::Approx(1.0));
}

TEST_CASE("plain exponent matches the branch formulas on random queries") {
  std::mt19937 gen(7);
  std::uniform_int_distribution<int> nd(2, 7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 500; ++k) {
    const int n = nd(gen);
    const double p = 1.0 + 3.0 * u(gen);
    const double q = p + 0.01 + 5.0 * u(gen);
    const double s = k % 5 == 0 ? 1.0 : 4.0 * u(gen);
    CHECK(predicted_exponent({n, p, q, s, false}) ==
          doctest::Approx(plain_oracle(n, p, q, s)).epsilon(1e-12));
  }
}

TEST_CASE("queries outside the hypotheses name the violated hypothesis") {
  auto message = [](const ExponentQuery& q) {
    try {
      predicted_exponent(q);
    } catch (const DomainError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message({1, 1.0, 2.0, 0.0, false}).find("n >= 2") != std::string::npos);
  CHECK(message({3, 0.5, 2.0, 0.0, false}).find("1 <= p") != std::string::npos);
  CHECK(message({3, 3.0, 2.0, 0.0, false}).find("p <= q") != std::string::npos);
  CHECK(message({3, 1.0, 1.0, 0.0, false}).find("q != 1") != std::string::npos);
  CHECK(message({3, 1.0, INFINITY, 0.0, false}).find("q < infinity") != std::string::npos);
}

TEST_CASE("L^r endpoints reproduce the L^1 and L^infinity tables") {
  for (int n = 2; n <= 6; ++n) {
    for (double s : {0.0, 0.5, 1.0, 1.5, 2.0, 3.0}) {
      for (bool sub : {false, true}) {
        CHECK(total_lr_exponent(s, n, 1.0, sub) == doctest::Approx(total_l1_exponent(s, n, sub)));
        CHECK(total_lr_exponent(s, n, 0.0, sub) == doctest::Approx(total_linf_exponent(s, n, sub)));
      }
    }
  }
  CHECK(kernel_l1_exponent(2, 0.0, 3, false) == doctest::Approx(2.0));
  CHECK(kernel_l1_exponent(1, 0.0, 3, true) == doctest::Approx(1.0));
  CHECK(kernel_linf_exponent(1, 0.0, 3, false) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(kernel_l1_exponent(0, 0.0, 3, true), UsageError);
}

TEST_CASE("dyadic times") {
  const auto t = dyadic_times(4, 6);
  REQUIRE(t.size() == 3);
  CHECK(t[0] == 16.0);
  CHECK(t[2] == 64.0);
  CHECK_THROWS_AS(dyadic_times(5, 4), UsageError);
}

TEST_CASE("decay experiment preconditions") {
  const MgtParams p{1.0, 1.0};
  const auto data = FrequencyData::gaussian();
  const ExponentQuery q{3, 2.0, 2.0, 0.0, false};
  CHECK_THROWS_AS(run_decay_experiment(p, data, q, {16.0}, ZoneSelect::SmallOnly), FitError);
  CHECK_THROWS_AS(run_decay_experiment(p, data, q, {4.0, 8.0, 16.0, 32.0, 64.0, 128.0},
                                       ZoneSelect::SmallOnly),
                  UsageError);
  CHECK_THROWS_AS(run_decay_experiment({1.0, 0.0}, data, q, dyadic_times(4, 8), ZoneSelect::Full),
                  DomainError);
  CHECK_THROWS_AS(kernel_prop_check(0, 0.0, {NormKind::L1}, true, 3, p, dyadic_times(4, 8)),
                  UsageError);
}

TEST_CASE("profile subtraction lowers the small-frequency growth") {
  const MgtParams p{1.0, 1.0};
  const auto data = FrequencyData::gaussian();
  const auto times = dyadic_times(4, 9);
  const RateReport plain =
      run_decay_experiment(p, data, {3, 2.0, 2.0, 0.0, false}, times, ZoneSelect::SmallOnly);
  const RateReport refined =
      run_decay_experiment(p, data, {3, 2.0, 2.0, 0.0, true}, times, ZoneSelect::SmallOnly);
  CHECK(plain.pass);
  CHECK(refined.pass);
  CHECK(refined.measured_slope < plain.measured_slope);
  CHECK(plain.predicted_slope == doctest::Approx(2.0));
  CHECK(refined.predicted_slope == doctest::Approx(1.0));
}

TEST_CASE("high-frequency band: initial norm and exponential decay") {
  const MgtParams p{1.0, 1.0};
  const FrequencyData data = band_data(p, Band::High);
  std::vector<double> times;
  for (int k = 0; k <= 10; ++k) times.push_back(2.0 * k);
  const auto reports = high_freq_decay_check(p, 3, {2.0}, 0.0, data, Band::High, times);
  REQUIRE(reports.size() == 1);
  CHECK(reports[0].pass);
  CHECK(reports[0].measured_slope < -0.01);
  CHECK(reports[0].norms.front() > reports[0].norms.back());
}

TEST_CASE("pointwise multiplier bounds") {
  const MgtParams p{1.0, 1.0};
  const CutoffSpec cut = CutoffSpec::defaults_for(p);
  std::vector<double> rho, t;
  for (int k = 0; k <= 40; ++k) rho.push_back(cut.N0 * std::pow(10.0, k / 40.0));
  for (int k = 0; k <= 50; ++k) t.push_back(k);
  const PointwiseResult exp2 = multiplier_pointwise_check(Multiplier::K2Exp, 2.0, rho, t, p);
  CHECK(exp2.bounded);
  CHECK(std::isfinite(exp2.worst_ratio));
  const PointwiseResult prof = multiplier_pointwise_check(Multiplier::Profile, 0.0, rho, t, p);
  CHECK(prof.bounded);
  const PointwiseResult at0 = multiplier_pointwise_check(Multiplier::K1Cos, 1.0, rho, {0.0}, p);
  CHECK(std::isfinite(at0.worst_ratio));
  CHECK(multiplier_from_string(to_string(Multiplier::K0Sin)) == Multiplier::K0Sin);
}

TEST_CASE("exponential kernel stays bounded after removing e^{-c1 t/2}") {
  LemmaQuery q;
  q.oscillation = Oscillation::ExpKernel;
  q.beta = 1.0;
  for (double c2 : {1.0, -1.0}) {
    q.c2 = c2;
    const RateReport r = lemma_l1_check(q, dyadic_times(0, 10));
    CHECK(r.pass);
    CHECK(r.measured_slope < 10.0);
  }
  LemmaQuery bad;
  bad.c2 = 0.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  CHECK_THROWS_AS(lemma_predicted_exponent(q), UsageError);
}
